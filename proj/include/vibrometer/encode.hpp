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
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vibrometer/errors.hpp"
#include "vibrometer/parallel.hpp"
#include "vibrometer/pauli.hpp"
#include "vibrometer/sop.hpp"

namespace vibrometer {

/// Direct (one-hot) qubit layout: one qubit per modal, modes laid out in
/// contiguous blocks. Modal i of mode m sits on qubit offset(m) + i, and a
/// valid configuration has exactly one set bit per mode block. Basis-state
/// integers are little-endian: qubit k is bit k of the statevector index.
struct QubitLayout {
  ModeBasisSpec basis;
  std::vector<int> offsets;
  int n_qubits = 0;

  QubitLayout() = default;

  explicit QubitLayout(const ModeBasisSpec& spec) : basis(spec) {
    basis.validate();
    offsets.resize(static_cast<std::size_t>(spec.mode_count));
    int off = 0;
    for (int m = 0; m < spec.mode_count; ++m) {
      offsets[static_cast<std::size_t>(m)] = off;
      off += spec.modals[static_cast<std::size_t>(m)];
    }
    n_qubits = off;
  }

  int offset(int mode) const { return offsets[static_cast<std::size_t>(mode)]; }

  int qubit(int mode, int modal) const { return offset(mode) + modal; }

  /// Mode owning qubit k.
  int mode_of_qubit(int k) const {
    for (int m = basis.mode_count - 1; m >= 0; --m)
      if (k >= offsets[static_cast<std::size_t>(m)]) return m;
    throw ValidationError("QubitLayout: qubit index out of range");
  }

  /// Basis-state integer for configuration (i_0, ..., i_{M-1}).
  std::uint64_t one_hot_index(const std::vector<int>& config) const {
    std::uint64_t idx = 0;
    for (int m = 0; m < basis.mode_count; ++m)
      idx |= std::uint64_t{1} << qubit(m, config[static_cast<std::size_t>(m)]);
    return idx;
  }
};

namespace detail {

// One single-qubit alternative of an encoded ladder factor.
struct PauliOption {
  int qubit;
  char letter;  // 'I', 'X', 'Y' or 'Z'
  std::complex<double> weight;
};

// sigma^+ = (X - iY)/2 creates occupation, sigma^- = (X + iY)/2 annihilates
// it, with the |1> = occupied, Z|1> = -|1> convention.
inline std::vector<PauliOption> raising_options(int qubit) {
  return {{qubit, 'X', {0.5, 0.0}}, {qubit, 'Y', {0.0, -0.5}}};
}
inline std::vector<PauliOption> lowering_options(int qubit) {
  return {{qubit, 'X', {0.5, 0.0}}, {qubit, 'Y', {0.0, 0.5}}};
}
// Number operator n = (I - Z)/2.
inline std::vector<PauliOption> number_options(int qubit) {
  return {{qubit, 'I', {0.5, 0.0}}, {qubit, 'Z', {-0.5, 0.0}}};
}

// Expands a product of single-qubit option lists (all on distinct qubits)
// into the accumulator, scaled by `scale`.
inline void accumulate_option_product(PauliAccumulator& acc, int n_qubits,
                                      const std::vector<std::vector<PauliOption>>& factors,
                                      std::complex<double> scale) {
  std::vector<std::size_t> pick(factors.size(), 0);
  for (;;) {
    PauliString p(n_qubits);
    std::complex<double> w = scale;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const PauliOption& opt = factors[i][pick[i]];
      if (opt.letter != 'I') p.set(opt.qubit, opt.letter);
      w *= opt.weight;
    }
    acc.add(p, w);
    std::size_t i = 0;
    for (; i < factors.size(); ++i) {
      if (++pick[i] < factors[i].size()) break;
      pick[i] = 0;
    }
    if (i == factors.size()) break;
  }
}

}  // namespace detail

/// Maps an expanded second-quantized operator onto qubits with the direct
/// one-hot encoding: a+_p a_q on mode m becomes (I - Z)/2 on qubit
/// offset(m)+p when p = q and sigma^+ sigma^- across the two qubits
/// otherwise. Imaginary residues above 1e-10 signal a non-symmetric input
/// and raise InternalError; smaller residues are dropped.
inline std::pair<PauliSum, QubitLayout> encode(const ExpandedHamiltonian& ham,
                                               int qubit_cap = 24) {
  QubitLayout layout(ham.basis);
  if (layout.n_qubits > qubit_cap)
    throw ResourceError("encode: " + std::to_string(layout.n_qubits) +
                        " qubits exceed the cap of " + std::to_string(qubit_cap));

  const std::size_t chunk = 256;
  const std::size_t n_chunks = ham.strings.empty() ? 0 : (ham.strings.size() + chunk - 1) / chunk;
  std::vector<PauliAccumulator> partial(n_chunks, PauliAccumulator(layout.n_qubits));
  parallel_chunks(ham.strings.size(), chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    PauliAccumulator& acc = partial[c];
    std::vector<std::vector<detail::PauliOption>> factors;
    for (std::size_t s = lo; s < hi; ++s) {
      const ExpandedString& str = ham.strings[s];
      factors.clear();
      for (std::size_t i = 0; i < str.modes.size(); ++i) {
        const int m = str.modes[i];
        const auto [p, q] = str.pq[i];
        if (p == q) {
          factors.push_back(detail::number_options(layout.qubit(m, p)));
        } else {
          factors.push_back(detail::raising_options(layout.qubit(m, p)));
          factors.push_back(detail::lowering_options(layout.qubit(m, q)));
        }
      }
      detail::accumulate_option_product(acc, layout.n_qubits, factors, {str.coeff, 0.0});
    }
  });

  PauliAccumulator total(layout.n_qubits);
  total.add_constant({ham.constant, 0.0});
  for (const PauliAccumulator& acc : partial) total.merge(acc);
  return {total.finalize(1e-10), layout};
}

/// Hermitian Pauli expansion of amplitude * i (a+_i a_j a+_m a_n - h.c.) on
/// four distinct qubits: exactly eight strings acting as X or Y on
/// i, j, m, n, each with |coeff| = amplitude / 8. The pattern is derived
/// from the sigma^+- algebra rather than transcribed.
inline std::vector<PauliTerm> expand_double_excitation(int i, int j, int m, int n,
                                                       double amplitude, int n_qubits = 0) {
  const std::vector<int> qs = {i, j, m, n};
  for (int q : qs)
    if (q < 0) throw ValidationError("expand_double_excitation: negative qubit index");
  for (std::size_t a = 0; a < qs.size(); ++a)
    for (std::size_t b = a + 1; b < qs.size(); ++b)
      if (qs[a] == qs[b])
        throw ValidationError("expand_double_excitation: repeated qubit index " +
                              std::to_string(qs[a]));
  const int needed = *std::max_element(qs.begin(), qs.end()) + 1;
  if (n_qubits == 0) n_qubits = needed;
  if (n_qubits < needed)
    throw ValidationError("expand_double_excitation: n_qubits too small for indices");

  PauliAccumulator acc(n_qubits);
  const std::complex<double> plus_i{0.0, 1.0};
  detail::accumulate_option_product(
      acc, n_qubits,
      {detail::raising_options(i), detail::lowering_options(j), detail::raising_options(m),
       detail::lowering_options(n)},
      plus_i * amplitude);
  detail::accumulate_option_product(
      acc, n_qubits,
      {detail::lowering_options(i), detail::raising_options(j), detail::lowering_options(m),
       detail::raising_options(n)},
      -plus_i * amplitude);
  const PauliSum sum = acc.finalize(1e-12);
  if (sum.constant() != 0.0)
    throw InternalError("expand_double_excitation: unexpected identity component");
  return sum.terms();
}

/// CNOT count of the UVCCSD double excitations in the direct mapping:
/// 48 * C(M,2) * n^2 for M modes and n virtual modals per mode. Singles are
/// not counted; the doubles dominate the circuit depth.
inline std::int64_t cnot_count_uvccsd(int M, int n) {
  if (M < 2) throw ValidationError("cnot_count_uvccsd: need at least two modes");
  if (n < 1) throw ValidationError("cnot_count_uvccsd: need at least one virtual modal");
  auto checked_mul = [](std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("cnot_count_uvccsd: overflow");
    return r;
  };
  const std::int64_t pairs = checked_mul(M, M - 1) / 2;
  return checked_mul(48, checked_mul(pairs, checked_mul(n, n)));
}

}  // namespace vibrometer
