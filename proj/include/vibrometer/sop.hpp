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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibrometer/errors.hpp"
#include "vibrometer/parallel.hpp"

namespace vibrometer {

/// Mode/modal layout of the vibrational basis: M modes, mode m spanned by
/// N_m one-mode basis functions. The configuration space has dimension
/// D = prod_m N_m, capped at 2^20.
struct ModeBasisSpec {
  int mode_count = 0;
  std::vector<int> modals;

  static constexpr std::int64_t kMaxConfigDim = std::int64_t{1} << 20;

  void validate() const {
    if (mode_count < 1) throw ValidationError("ModeBasisSpec: mode_count must be >= 1");
    if (static_cast<int>(modals.size()) != mode_count)
      throw ValidationError("ModeBasisSpec: modals length does not match mode_count");
    for (int m = 0; m < mode_count; ++m)
      if (modals[static_cast<std::size_t>(m)] < 1)
        throw ValidationError("ModeBasisSpec: modal count of mode " + std::to_string(m) +
                              " must be >= 1");
    config_dim();
  }

  std::int64_t config_dim() const {
    std::int64_t d = 1;
    for (int n : modals) {
      d *= n;
      if (d > kMaxConfigDim)
        throw ValidationError("ModeBasisSpec: configuration dimension exceeds the 2^20 cap");
    }
    return d;
  }

  bool operator==(const ModeBasisSpec& o) const {
    return mode_count == o.mode_count && modals == o.modals;
  }
};

/// One factor of a sum-of-products term: a one-mode operator matrix acting
/// on `mode` in its modal basis.
struct SopFactor {
  int mode = 0;
  Eigen::MatrixXd matrix;
};

/// One term c_t * prod_m h^{m,t} of a sum-of-products operator. Factor modes
/// are strictly increasing, so each mode appears at most once per term.
struct SopTerm {
  double coeff = 0.0;
  std::vector<SopFactor> factors;
};

namespace detail {
inline bool is_identity_matrix(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}
}  // namespace detail

/// A vibrational Hamiltonian in sum-of-products form,
/// H = constant + sum_t c_t prod_m h^{m,t}. Only real symmetric one-mode
/// matrices are accepted; explicit identity factors must be absorbed by the
/// producer so that mode combinations stay canonical.
struct SopHamiltonian {
  ModeBasisSpec basis;
  double constant = 0.0;
  std::vector<SopTerm> terms;

  static constexpr double kSymmetryTol = 1e-12;

  void validate() const {
    basis.validate();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const SopTerm& term = terms[t];
      if (term.factors.empty())
        throw ValidationError("SopHamiltonian: term " + std::to_string(t) +
                              " has no factors (fold pure constants into `constant`)");
      int prev_mode = -1;
      for (const SopFactor& f : term.factors) {
        if (f.mode <= prev_mode)
          throw ValidationError("SopHamiltonian: factor modes of term " + std::to_string(t) +
                                " must be strictly increasing");
        prev_mode = f.mode;
        if (f.mode < 0 || f.mode >= basis.mode_count)
          throw ValidationError("SopHamiltonian: factor mode " + std::to_string(f.mode) +
                                " out of range");
        const int n = basis.modals[static_cast<std::size_t>(f.mode)];
        if (f.matrix.rows() != n || f.matrix.cols() != n)
          throw ValidationError("SopHamiltonian: factor matrix on mode " +
                                std::to_string(f.mode) + " must be " + std::to_string(n) + "x" +
                                std::to_string(n));
        if ((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
          throw ValidationError("SopHamiltonian: factor matrix on mode " +
                                std::to_string(f.mode) + " of term " + std::to_string(t) +
                                " is not symmetric");
        if (detail::is_identity_matrix(f.matrix))
          throw ValidationError("SopHamiltonian: explicit identity factor on mode " +
                                std::to_string(f.mode) + " of term " + std::to_string(t) +
                                " (absorb identities before building the operator)");
      }
    }
  }
};

/// One flat second-quantized string: coeff * prod_m a+_{p^m} a_{q^m} over the
/// modes of `modes` (sorted ascending), with indices pq[i] on modes[i].
struct ExpandedString {
  std::vector<int> modes;
  std::vector<std::pair<int, int>> pq;
  double coeff = 0.0;
};

/// A fully expanded second-quantized operator: aggregated coefficients per
/// (mode combination, index tuple), stored lexicographically in
/// (modes, indices) so serialization and downstream tie-breaking are
/// deterministic.
struct ExpandedHamiltonian {
  ModeBasisSpec basis;
  double constant = 0.0;
  std::vector<ExpandedString> strings;

  /// Checks per-string shape, uniqueness of (modes, pq) keys, and the
  /// Hermiticity pairing: the all-transposed twin of every string must be
  /// present with the same coefficient within `tol`.
  void validate(double tol = 1e-12) const {
    basis.validate();
    std::map<std::pair<std::vector<int>, std::vector<std::pair<int, int>>>, double> seen;
    for (const ExpandedString& s : strings) {
      if (s.modes.empty()) throw ValidationError("ExpandedHamiltonian: empty mode combination");
      if (s.modes.size() != s.pq.size())
        throw ValidationError("ExpandedHamiltonian: modes/pq length mismatch");
      int prev = -1;
      for (std::size_t i = 0; i < s.modes.size(); ++i) {
        const int m = s.modes[i];
        if (m <= prev) throw ValidationError("ExpandedHamiltonian: modes must be ascending");
        prev = m;
        if (m < 0 || m >= basis.mode_count)
          throw ValidationError("ExpandedHamiltonian: mode index out of range");
        const int n = basis.modals[static_cast<std::size_t>(m)];
        if (s.pq[i].first < 0 || s.pq[i].first >= n || s.pq[i].second < 0 || s.pq[i].second >= n)
          throw ValidationError("ExpandedHamiltonian: modal index out of range on mode " +
                                std::to_string(m));
      }
      if (!seen.emplace(std::make_pair(s.modes, s.pq), s.coeff).second)
        throw ValidationError("ExpandedHamiltonian: duplicate (modes, indices) key");
    }
    for (const auto& [key, coeff] : seen) {
      auto transposed = key;
      for (auto& pq : transposed.second) std::swap(pq.first, pq.second);
      auto it = seen.find(transposed);
      if (it == seen.end() || std::abs(it->second - coeff) > tol)
        throw ValidationError("ExpandedHamiltonian: Hermiticity pairing violated");
    }
  }
};

/// Expands a sum-of-products operator into flat second-quantized strings,
/// aggregating coefficients over all terms that share a
/// (mode combination, index tuple) key and dropping aggregated strings with
/// |coeff| <= drop_threshold. The retained string count is bounded by the
/// index-tuple space, independent of how many SOP terms produced it.
inline ExpandedHamiltonian expand(const SopHamiltonian& sop, double drop_threshold = 0.0) {
  sop.validate();
  if (drop_threshold < 0.0 || !std::isfinite(drop_threshold))
    throw ValidationError("expand: drop_threshold must be >= 0");

  using Key = std::pair<std::vector<int>, std::vector<std::pair<int, int>>>;
  using Acc = std::map<Key, double>;

  // Contiguous term chunks merged in chunk order reproduce the sequential
  // per-key addition order for any worker count.
  const std::size_t chunk = 64;
  const std::size_t n_chunks = sop.terms.empty() ? 0 : (sop.terms.size() + chunk - 1) / chunk;
  std::vector<Acc> partial(n_chunks);
  parallel_chunks(sop.terms.size(), chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    Acc& acc = partial[c];
    for (std::size_t t = lo; t < hi; ++t) {
      const SopTerm& term = sop.terms[t];
      const std::size_t k = term.factors.size();
      Key key;
      key.first.resize(k);
      key.second.resize(k);
      for (std::size_t i = 0; i < k; ++i) key.first[i] = term.factors[i].mode;
      // Odometer over one (p, q) pair per factor.
      std::vector<int> p(k, 0), q(k, 0);
      for (;;) {
        double w = term.coeff;
        for (std::size_t i = 0; i < k; ++i) w *= term.factors[i].matrix(p[i], q[i]);
        if (w != 0.0) {
          for (std::size_t i = 0; i < k; ++i) key.second[i] = {p[i], q[i]};
          acc[key] += w;
        }
        std::size_t i = 0;
        for (; i < k; ++i) {
          const int n = static_cast<int>(term.factors[i].matrix.rows());
          if (++q[i] < n) break;
          q[i] = 0;
          if (++p[i] < n) break;
          p[i] = 0;
        }
        if (i == k) break;
      }
    }
  });

  Acc merged;
  for (const Acc& acc : partial)
    for (const auto& [key, w] : acc) merged[key] += w;

  ExpandedHamiltonian out;
  out.basis = sop.basis;
  out.constant = sop.constant;
  out.strings.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    if (std::abs(w) <= drop_threshold) continue;
    out.strings.push_back({key.first, key.second, w});
  }
  return out;
}

/// Closed-form count of second-quantized strings for an M-mode operator with
/// N modals per mode and couplings up to `max_coupling` modes:
/// sum_{k=1..max_coupling} C(M,k) N^{2k}.
inline std::int64_t count_terms(int M, int N, int max_coupling = 3) {
  if (M < 1 || N < 1) throw ValidationError("count_terms: M and N must be >= 1");
  if (max_coupling < 1 || max_coupling > 3)
    throw ValidationError("count_terms: max_coupling must be in [1, 3]");
  auto checked_mul = [](std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("count_terms: overflow");
    return r;
  };
  auto checked_add = [](std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw ValidationError("count_terms: overflow");
    return r;
  };
  std::int64_t total = 0;
  for (int k = 1; k <= max_coupling; ++k) {
    if (k > M) continue;
    std::int64_t binom = 1;  // exact at every step: prod (M-k+i)/i over i=1..k
    for (int i = 1; i <= k; ++i) binom = checked_mul(binom, M - k + i) / i;
    std::int64_t pw = 1;
    for (int i = 0; i < 2 * k; ++i) pw = checked_mul(pw, N);
    total = checked_add(total, checked_mul(binom, pw));
  }
  return total;
}

/// The mode combination range: every mode-index tuple with at least one
/// retained string.
inline std::set<std::vector<int>> mode_combinations(const ExpandedHamiltonian& ham) {
  std::set<std::vector<int>> mcr;
  for (const ExpandedString& s : ham.strings) mcr.insert(s.modes);
  return mcr;
}

}  // namespace vibrometer
