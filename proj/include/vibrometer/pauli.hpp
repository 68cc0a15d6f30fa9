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

#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vibrometer/errors.hpp"

namespace vibrometer {

class PauliString;
struct PauliProduct;
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// A tensor product of single-qubit Pauli operators in the symplectic
/// (binary) representation. Qubit k carries X iff x[k] & !z[k], Z iff
/// z[k] & !x[k], Y iff both bits are set and I iff neither is.
///
/// The phase convention is sigma(x, z) = i^{x z} X^x Z^z per qubit, which
/// makes every PauliString Hermitian. Text rendering is one character per
/// qubit, left to right for qubits 0 .. n-1, from the alphabet {I,X,Y,Z}.
class PauliString {
 public:
  explicit PauliString(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw ValidationError("PauliString: n_qubits must be positive");
    x_.assign(word_count(), 0);
    z_.assign(word_count(), 0);
  }

  static PauliString parse(std::string_view text) {
    if (text.empty()) throw ValidationError("PauliString: empty text");
    PauliString p(static_cast<int>(text.size()));
    for (int k = 0; k < p.n_qubits_; ++k) {
      switch (text[static_cast<std::size_t>(k)]) {
        case 'I': break;
        case 'X': p.set_x(k, true); break;
        case 'Z': p.set_z(k, true); break;
        case 'Y': p.set_x(k, true); p.set_z(k, true); break;
        default:
          throw ValidationError("PauliString: invalid character '" +
                                std::string(1, text[static_cast<std::size_t>(k)]) +
                                "' (expected I, X, Y or Z)");
      }
    }
    return p;
  }

  int n_qubits() const { return n_qubits_; }

  bool x_bit(int k) const { return (x_[word(k)] >> bit(k)) & 1u; }
  bool z_bit(int k) const { return (z_[word(k)] >> bit(k)) & 1u; }

  void set_x(int k, bool v) { assign_bit(x_, k, v); }
  void set_z(int k, bool v) { assign_bit(z_, k, v); }

  void set(int k, char pauli) {
    switch (pauli) {
      case 'I': set_x(k, false); set_z(k, false); break;
      case 'X': set_x(k, true); set_z(k, false); break;
      case 'Y': set_x(k, true); set_z(k, true); break;
      case 'Z': set_x(k, false); set_z(k, true); break;
      default: throw ValidationError("PauliString::set: invalid Pauli letter");
    }
  }

  char at(int k) const {
    const bool x = x_bit(k), z = z_bit(k);
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }

  std::string render() const {
    std::string s(static_cast<std::size_t>(n_qubits_), 'I');
    for (int k = 0; k < n_qubits_; ++k) s[static_cast<std::size_t>(k)] = at(k);
    return s;
  }

  bool is_identity() const {
    for (std::size_t w = 0; w < x_.size(); ++w)
      if (x_[w] | z_[w]) return false;
    return true;
  }

  /// Number of non-identity single-qubit factors.
  int weight() const {
    int n = 0;
    for (std::size_t w = 0; w < x_.size(); ++w)
      n += std::popcount(x_[w] | z_[w]);
    return n;
  }

  /// Qubit indices with a non-identity factor, ascending.
  std::vector<int> support() const {
    std::vector<int> qs;
    for (int k = 0; k < n_qubits_; ++k)
      if (x_bit(k) || z_bit(k)) qs.push_back(k);
    return qs;
  }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

  bool operator==(const PauliString& o) const {
    return n_qubits_ == o.n_qubits_ && x_ == o.x_ && z_ == o.z_;
  }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

  /// Total order matching lexicographic order of render() (I < X < Y < Z).
  bool operator<(const PauliString& o) const {
    if (n_qubits_ != o.n_qubits_) return n_qubits_ < o.n_qubits_;
    for (int k = 0; k < n_qubits_; ++k) {
      const char a = at(k), b = o.at(k);
      if (a != b) return a < b;
    }
    return false;
  }

 private:
  friend struct PauliProduct;
  friend PauliProduct multiply(const PauliString& a, const PauliString& b);

  static std::size_t word(int k) { return static_cast<std::size_t>(k) >> 6; }
  static unsigned bit(int k) { return static_cast<unsigned>(k) & 63u; }
  std::size_t word_count() const { return (static_cast<std::size_t>(n_qubits_) + 63) / 64; }

  void assign_bit(std::vector<std::uint64_t>& bits, int k, bool v) {
    if (v)
      bits[word(k)] |= (1ULL << bit(k));
    else
      bits[word(k)] &= ~(1ULL << bit(k));
  }

  int n_qubits_;
  std::vector<std::uint64_t> x_, z_;
};

/// Result of a PauliString product: a.b = i^{i_exponent} * string.
struct PauliProduct {
  PauliString string;
  int i_exponent;  // 0..3

  std::complex<double> phase() const {
    switch (i_exponent & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
};

namespace detail {
inline void check_same_size(const PauliString& a, const PauliString& b, const char* who) {
  if (a.n_qubits() != b.n_qubits())
    throw ValidationError(std::string(who) + ": qubit count mismatch (" +
                          std::to_string(a.n_qubits()) + " vs " + std::to_string(b.n_qubits()) +
                          ")");
}
}  // namespace detail

/// Product of two Pauli strings with the phase tracked mod 4.
///
/// Per qubit, sigma(x1,z1) sigma(x2,z2) = i^k sigma(x1^x2, z1^z2) with
/// k = x1 z1 + x2 z2 - x3 z3 + 2 z1 x2 (mod 4); exponents add across qubits.
inline PauliProduct multiply(const PauliString& a, const PauliString& b) {
  detail::check_same_size(a, b, "multiply");
  PauliString out(a.n_qubits());
  long long k = 0;
  const auto& ax = a.x_words();
  const auto& az = a.z_words();
  const auto& bx = b.x_words();
  const auto& bz = b.z_words();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    const std::uint64_t x3 = ax[w] ^ bx[w];
    const std::uint64_t z3 = az[w] ^ bz[w];
    k += std::popcount(ax[w] & az[w]);
    k += std::popcount(bx[w] & bz[w]);
    k -= std::popcount(x3 & z3);
    k += 2 * std::popcount(az[w] & bx[w]);
    out.x_[w] = x3;
    out.z_[w] = z3;
  }
  return {std::move(out), static_cast<int>(((k % 4) + 4) % 4)};
}

/// Qubit-wise commutation: every qubit's factors are equal or one is I.
inline bool qubit_wise_commute(const PauliString& a, const PauliString& b) {
  detail::check_same_size(a, b, "qubit_wise_commute");
  const auto& ax = a.x_words();
  const auto& az = a.z_words();
  const auto& bx = b.x_words();
  const auto& bz = b.z_words();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    const std::uint64_t conflict =
        (ax[w] | az[w]) & (bx[w] | bz[w]) & ((ax[w] ^ bx[w]) | (az[w] ^ bz[w]));
    if (conflict) return false;
  }
  return true;
}

/// Full commutation: the symplectic inner product <a.x, b.z> + <a.z, b.x>
/// vanishes mod 2.
inline bool fully_commute(const PauliString& a, const PauliString& b) {
  detail::check_same_size(a, b, "fully_commute");
  const auto& ax = a.x_words();
  const auto& az = a.z_words();
  const auto& bx = b.x_words();
  const auto& bz = b.z_words();
  int parity = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) {
    parity ^= std::popcount(ax[w] & bz[w]) & 1;
    parity ^= std::popcount(az[w] & bx[w]) & 1;
  }
  return parity == 0;
}

/// One weighted term of a PauliSum.
struct PauliTerm {
  PauliString string;
  double coeff;
};

/// A real-coefficient Pauli operator sum H = c + sum_i h_i P_i. The identity
/// component is stored in `constant` and never appears among the terms.
/// Terms are kept in canonical order: descending |coeff|, ties broken by the
/// lexicographic rendering of the string.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits, double constant = 0.0)
      : n_qubits_(n_qubits), constant_(constant) {
    if (n_qubits < 1) throw ValidationError("PauliSum: n_qubits must be positive");
  }

  int n_qubits() const { return n_qubits_; }
  double constant() const { return constant_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  static bool canonical_less(const PauliTerm& a, const PauliTerm& b) {
    const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
    if (ma != mb) return ma > mb;
    return a.string < b.string;
  }

  /// Builds a PauliSum from raw (string, coeff) pairs. Duplicate strings and
  /// identity terms are rejected; use PauliAccumulator to combine them.
  static PauliSum from_terms(int n_qubits, std::vector<PauliTerm> terms, double constant = 0.0) {
    PauliSum sum(n_qubits, constant);
    for (const auto& t : terms) {
      if (t.string.n_qubits() != n_qubits)
        throw ValidationError("PauliSum: term qubit count mismatch");
      if (t.string.is_identity())
        throw ValidationError("PauliSum: identity string belongs in the constant");
    }
    std::sort(terms.begin(), terms.end(), canonical_less);
    for (std::size_t i = 1; i < terms.size(); ++i)
      if (terms[i].string == terms[i - 1].string)
        throw ValidationError("PauliSum: duplicate Pauli string " + terms[i].string.render());
    sum.terms_ = std::move(terms);
    return sum;
  }

 private:
  friend class PauliAccumulator;
  int n_qubits_;
  double constant_;
  std::vector<PauliTerm> terms_;
};

/// Accumulates complex-weighted Pauli strings and finalizes them into a
/// Hermitian PauliSum. Finalization verifies that every imaginary residue is
/// below `imag_tol` before dropping it; a larger residue signals a
/// non-Hermitian source operator.
class PauliAccumulator {
 public:
  explicit PauliAccumulator(int n_qubits) : n_qubits_(n_qubits), constant_(0.0, 0.0) {}

  int n_qubits() const { return n_qubits_; }

  void add(const PauliString& p, std::complex<double> w) {
    if (p.n_qubits() != n_qubits_)
      throw ValidationError("PauliAccumulator: qubit count mismatch");
    if (p.is_identity())
      constant_ += w;
    else
      acc_[p] += w;
  }

  void add_constant(std::complex<double> w) { constant_ += w; }

  /// Merges another accumulator. Per-key addition order follows the merge
  /// call order, so merging worker-local accumulators in a fixed order keeps
  /// results bit-identical regardless of the worker count.
  void merge(const PauliAccumulator& other) {
    if (other.n_qubits_ != n_qubits_)
      throw ValidationError("PauliAccumulator: qubit count mismatch in merge");
    constant_ += other.constant_;
    for (const auto& [p, w] : other.acc_) acc_[p] += w;
  }

  PauliSum finalize(double imag_tol = 1e-10) const {
    if (std::abs(constant_.imag()) >= imag_tol)
      throw InternalError("PauliAccumulator: imaginary residue " +
                          std::to_string(constant_.imag()) +
                          " on the identity component (non-Hermitian input?)");
    PauliSum sum(n_qubits_, constant_.real());
    sum.terms_.reserve(acc_.size());
    for (const auto& [p, w] : acc_) {
      if (std::abs(w.imag()) >= imag_tol)
        throw InternalError("PauliAccumulator: imaginary residue " + std::to_string(w.imag()) +
                            " on " + p.render() + " (non-Hermitian input?)");
      if (w.real() != 0.0) sum.terms_.push_back({p, w.real()});
    }
    std::sort(sum.terms_.begin(), sum.terms_.end(), PauliSum::canonical_less);
    return sum;
  }

 private:
  int n_qubits_;
  std::complex<double> constant_;
  std::map<PauliString, std::complex<double>> acc_;
};

}  // namespace vibrometer
