// Copyright 2026 The Vibrometer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vibrometer/pauli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace vibrometer;

namespace {

std::vector<std::string> all_two_qubit_strings() {
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::vector<std::string> out;
  for (char a : letters)
    for (char b : letters) out.push_back(std::string{a, b});
  return out;
}

}  // namespace

TEST_CASE("pauli: parse and render round-trip") {
  for (const char* text : {"I", "X", "XIYZ", "ZZZZZZZZ"}) {
    CHECK(PauliString::parse(text).render() == text);
  }
  CHECK_THROWS_AS(PauliString::parse(""), ValidationError);
  CHECK_THROWS_AS(PauliString::parse("XQ"), ValidationError);

  CounterRng rng(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.next_int(1, 16));
    const PauliString p = oracle::random_pauli(n, rng);
    CHECK(PauliString::parse(p.render()) == p);
  }
}

TEST_CASE("pauli: single-qubit products") {
  const auto xy = multiply(PauliString::parse("X"), PauliString::parse("Y"));
  CHECK(xy.string.render() == "Z");
  CHECK(xy.i_exponent == 1);  // X Y = +i Z

  CounterRng rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const PauliString p = oracle::random_pauli(static_cast<int>(rng.next_int(1, 12)), rng);
    const auto pp = multiply(p, p);
    CHECK(pp.string.is_identity());
    CHECK(pp.i_exponent == 0);
  }
}

TEST_CASE("pauli: XZ times ZX is plus YY") {
  // Frozen from the dense 4x4 product, also recomputed below.
  const auto prod = multiply(PauliString::parse("XZ"), PauliString::parse("ZX"));
  CHECK(prod.string.render() == "YY");
  CHECK(prod.i_exponent == 0);

  const Eigen::MatrixXcd dense = oracle::dense_pauli(PauliString::parse("XZ")) *
                                 oracle::dense_pauli(PauliString::parse("ZX"));
  const Eigen::MatrixXcd expected = prod.phase() * oracle::dense_pauli(prod.string);
  CHECK((dense - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pauli: multiply agrees with dense kronecker products") {
  SECTION("exhaustive on 2 qubits") {
    for (const auto& a : all_two_qubit_strings()) {
      for (const auto& b : all_two_qubit_strings()) {
        const PauliString pa = PauliString::parse(a), pb = PauliString::parse(b);
        const auto prod = multiply(pa, pb);
        const Eigen::MatrixXcd dense = oracle::dense_pauli(pa) * oracle::dense_pauli(pb);
        const Eigen::MatrixXcd expected = prod.phase() * oracle::dense_pauli(prod.string);
        REQUIRE((dense - expected).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  SECTION("randomized on 3 and 4 qubits") {
    CounterRng rng(13, 0);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 3 + static_cast<int>(rng.next_int(0, 1));
      const PauliString pa = oracle::random_pauli(n, rng);
      const PauliString pb = oracle::random_pauli(n, rng);
      const auto prod = multiply(pa, pb);
      const Eigen::MatrixXcd dense = oracle::dense_pauli(pa) * oracle::dense_pauli(pb);
      const Eigen::MatrixXcd expected = prod.phase() * oracle::dense_pauli(prod.string);
      REQUIRE((dense - expected).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("pauli: commutation predicates") {
  CHECK(qubit_wise_commute(PauliString::parse("XI"), PauliString::parse("XZ")));
  CHECK_FALSE(qubit_wise_commute(PauliString::parse("XX"), PauliString::parse("YY")));
  CHECK(qubit_wise_commute(PauliString::parse("IIII"), PauliString::parse("XYZX")));

  CHECK(fully_commute(PauliString::parse("XX"), PauliString::parse("YY")));
  CHECK_FALSE(fully_commute(PauliString::parse("XI"), PauliString::parse("ZI")));

  CHECK_THROWS_AS(fully_commute(PauliString::parse("X"), PauliString::parse("XX")),
                  ValidationError);
  CHECK_THROWS_AS(qubit_wise_commute(PauliString::parse("X"), PauliString::parse("XX")),
                  ValidationError);
  CHECK_THROWS_AS(multiply(PauliString::parse("X"), PauliString::parse("XX")), ValidationError);
}

TEST_CASE("pauli: full commutation matches dense commutators on 2 qubits") {
  for (const auto& a : all_two_qubit_strings()) {
    for (const auto& b : all_two_qubit_strings()) {
      const PauliString pa = PauliString::parse(a), pb = PauliString::parse(b);
      const auto da = oracle::dense_pauli(pa), db = oracle::dense_pauli(pb);
      const bool dense_commutes = ((da * db - db * da).cwiseAbs().maxCoeff() == 0.0);
      REQUIRE(fully_commute(pa, pb) == dense_commutes);
    }
  }
}

TEST_CASE("pauli: qubit-wise commutation implies full commutation") {
  CounterRng rng(17, 0);
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  int qwc_pairs = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = static_cast<int>(rng.next_int(1, 16));
    // Construct a explicitly QWC-compatible pair, then check the implication.
    PauliString a(n), b(n);
    for (int k = 0; k < n; ++k) {
      const char la = letters[rng.next_int(0, 3)];
      a.set(k, la);
      switch (rng.next_int(0, 2)) {
        case 0: b.set(k, 'I'); break;
        case 1: b.set(k, la); break;
        default: b.set(k, letters[rng.next_int(0, 3)]); break;
      }
    }
    if (qubit_wise_commute(a, b)) {
      ++qwc_pairs;
      REQUIRE(fully_commute(a, b));
    }
  }
  CHECK(qwc_pairs > 1000);  // the generator must actually exercise the premise
}

TEST_CASE("pauli: sum construction and canonical order") {
  auto terms = std::vector<PauliTerm>{{PauliString::parse("XI"), 0.5},
                                      {PauliString::parse("ZZ"), -2.0},
                                      {PauliString::parse("IX"), 0.5}};
  const PauliSum sum = PauliSum::from_terms(2, terms, 1.25);
  REQUIRE(sum.size() == 3);
  CHECK(sum.terms()[0].string.render() == "ZZ");
  // |coeff| tie between IX and XI resolves lexicographically.
  CHECK(sum.terms()[1].string.render() == "IX");
  CHECK(sum.terms()[2].string.render() == "XI");
  CHECK(sum.constant() == 1.25);

  CHECK_THROWS_AS(PauliSum::from_terms(2,
                                       {{PauliString::parse("XI"), 1.0},
                                        {PauliString::parse("XI"), 0.5}}),
                  ValidationError);
  CHECK_THROWS_AS(PauliSum::from_terms(2, {{PauliString::parse("II"), 1.0}}), ValidationError);
}

TEST_CASE("pauli: accumulator combines like strings and screens residues") {
  PauliAccumulator acc(2);
  acc.add(PauliString::parse("XY"), {0.25, 0.5});
  acc.add(PauliString::parse("XY"), {0.25, -0.5});
  acc.add(PauliString::parse("II"), {3.0, 0.0});
  acc.add(PauliString::parse("ZI"), {1.0, 0.0});
  acc.add(PauliString::parse("ZI"), {-1.0, 0.0});  // cancels exactly, dropped
  const PauliSum sum = acc.finalize();
  REQUIRE(sum.size() == 1);
  CHECK(sum.terms()[0].string.render() == "XY");
  CHECK(sum.terms()[0].coeff == 0.5);
  CHECK(sum.constant() == 3.0);

  PauliAccumulator bad(1);
  bad.add(PauliString::parse("X"), {0.0, 1e-6});
  CHECK_THROWS_AS(bad.finalize(), InternalError);
}
