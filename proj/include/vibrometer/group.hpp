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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vibrometer/encode.hpp"
#include "vibrometer/errors.hpp"
#include "vibrometer/parallel.hpp"
#include "vibrometer/pauli.hpp"

namespace vibrometer {

/// Pairwise commutation requirement inside one measurement group.
enum class CommutationScheme { QWC, FC };

/// Full grouping strategy: plain Sorted Insertion or the MCR pre-partition
/// followed by Sorted Insertion within each combined set.
enum class GroupingScheme { QWC, FC, QWC_MCR, FC_MCR };

inline CommutationScheme commutation_of(GroupingScheme s) {
  return (s == GroupingScheme::QWC || s == GroupingScheme::QWC_MCR) ? CommutationScheme::QWC
                                                                    : CommutationScheme::FC;
}

inline bool uses_mcr(GroupingScheme s) {
  return s == GroupingScheme::QWC_MCR || s == GroupingScheme::FC_MCR;
}

inline std::string to_string(CommutationScheme s) {
  return s == CommutationScheme::QWC ? "QWC" : "FC";
}

inline std::string to_string(GroupingScheme s) {
  switch (s) {
    case GroupingScheme::QWC: return "QWC";
    case GroupingScheme::FC: return "FC";
    case GroupingScheme::QWC_MCR: return "QWC/MCR";
    default: return "FC/MCR";
  }
}

inline GroupingScheme grouping_scheme_from_string(const std::string& s) {
  if (s == "QWC" || s == "qwc") return GroupingScheme::QWC;
  if (s == "FC" || s == "fc") return GroupingScheme::FC;
  if (s == "QWC/MCR" || s == "qwc-mcr") return GroupingScheme::QWC_MCR;
  if (s == "FC/MCR" || s == "fc-mcr") return GroupingScheme::FC_MCR;
  throw ValidationError("unknown grouping scheme '" + s +
                        "' (expected qwc, fc, qwc-mcr or fc-mcr)");
}

inline bool commutes(const PauliString& a, const PauliString& b, CommutationScheme scheme) {
  return scheme == CommutationScheme::QWC ? qubit_wise_commute(a, b) : fully_commute(a, b);
}

/// One simultaneously measurable set of Pauli terms. Members are in the
/// insertion order of Sorted Insertion, i.e. descending |coeff|.
struct MeasurementGroup {
  std::vector<PauliTerm> members;
  CommutationScheme scheme = CommutationScheme::QWC;
  std::string source_tag;  // MCR set label, empty for plain SI

  double total_abs_coeff() const {
    double s = 0.0;
    for (const auto& m : members) s += std::abs(m.coeff);
    return s;
  }
};

/// A complete partition of the non-identity terms of a PauliSum.
struct GroupingResult {
  std::vector<MeasurementGroup> groups;
  GroupingScheme scheme = GroupingScheme::QWC;
  std::int64_t covered_terms = 0;
  int n_qubits = 0;
};

namespace detail {

// Greedy Sorted Insertion sweep over terms already in canonical order.
inline std::vector<MeasurementGroup> sorted_insertion_sweep(const std::vector<PauliTerm>& terms,
                                                            CommutationScheme scheme,
                                                            const std::string& tag) {
  std::vector<MeasurementGroup> groups;
  std::vector<bool> used(terms.size(), false);
  for (std::size_t seed = 0; seed < terms.size(); ++seed) {
    if (used[seed]) continue;
    MeasurementGroup group;
    group.scheme = scheme;
    group.source_tag = tag;
    group.members.push_back(terms[seed]);
    used[seed] = true;
    for (std::size_t i = seed + 1; i < terms.size(); ++i) {
      if (used[i]) continue;
      bool ok = true;
      for (const auto& member : group.members)
        if (!commutes(member.string, terms[i].string, scheme)) {
          ok = false;
          break;
        }
      if (ok) {
        group.members.push_back(terms[i]);
        used[i] = true;
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace detail

/// Sorted Insertion: orders terms by descending |coeff| (ties by rendered
/// string), then repeatedly seeds a group with the largest remaining term
/// and sweeps the remainder in order, moving in every term that commutes
/// with all current members. Deterministic for a fixed input.
inline GroupingResult sorted_insertion(const PauliSum& ham, CommutationScheme scheme) {
  GroupingResult result;
  result.scheme = scheme == CommutationScheme::QWC ? GroupingScheme::QWC : GroupingScheme::FC;
  result.n_qubits = ham.n_qubits();
  result.covered_terms = static_cast<std::int64_t>(ham.size());
  result.groups = detail::sorted_insertion_sweep(ham.terms(), scheme, "");
  return result;
}

/// One combined set of the MCR pre-partition: pairwise disjoint mode
/// combinations plus every Pauli term attributed to them.
struct McrSet {
  std::string label;
  std::vector<std::vector<int>> combinations;
  std::vector<PauliTerm> terms;
};

namespace detail {

inline std::vector<int> term_support_modes(const PauliTerm& term, const QubitLayout& layout) {
  std::set<int> modes;
  for (int q : term.string.support()) modes.insert(layout.mode_of_qubit(q));
  return {modes.begin(), modes.end()};
}

// Routes a support set to its mode combination: an exact match when present,
// otherwise the lexicographically smallest of the minimal supersets. Strings
// produced by encode always have at least one superset in the source MCR.
inline const std::vector<int>* attribute_support(const std::vector<int>& support,
                                                 const std::set<std::vector<int>>& mcr) {
  if (auto it = mcr.find(support); it != mcr.end()) return &*it;
  const std::vector<int>* best = nullptr;
  for (const auto& mc : mcr) {
    if (!std::includes(mc.begin(), mc.end(), support.begin(), support.end())) continue;
    if (!best || mc.size() < best->size() || (mc.size() == best->size() && mc < *best))
      best = &mc;
  }
  return best;
}

}  // namespace detail

/// Pre-partition by mode combinations (Pauli terms are attributed to mode
/// combinations through their qubit-block support): pairwise disjoint
/// combinations are packed greedily into combined sets, highest coupling
/// order first and largest total |coeff| first within an order, with all
/// one-mode combinations collected into one final set.
inline std::vector<McrSet> mcr_partition(const PauliSum& ham, const QubitLayout& layout,
                                         const std::set<std::vector<int>>& mcr) {
  if (layout.n_qubits != ham.n_qubits())
    throw ValidationError("mcr_partition: layout does not match the operator");
  for (const auto& mc : mcr) {
    if (mc.empty()) throw ValidationError("mcr_partition: empty mode combination");
    for (int m : mc)
      if (m < 0 || m >= layout.basis.mode_count)
        throw ValidationError("mcr_partition: mode index out of range in MCR");
  }

  // Attribute every term; accumulate per-combination weight for packing.
  std::map<std::vector<int>, std::vector<PauliTerm>> routed;
  std::map<std::vector<int>, double> weight;
  for (const auto& mc : mcr) {
    routed[mc];
    weight[mc] = 0.0;
  }
  for (const auto& term : ham.terms()) {
    const auto support = detail::term_support_modes(term, layout);
    const std::vector<int>* mc = detail::attribute_support(support, mcr);
    if (!mc)
      throw ValidationError("mcr_partition: term " + term.string.render() +
                            " is not attributable to a single mode combination "
                            "(input not produced by encode?)");
    routed[*mc].push_back(term);
    weight[*mc] += std::abs(term.coeff);
  }

  // Multi-mode combinations, highest order first, heaviest first, then lex.
  std::vector<std::vector<int>> multi;
  std::vector<std::vector<int>> singles;
  for (const auto& mc : mcr) (mc.size() >= 2 ? multi : singles).push_back(mc);
  std::sort(multi.begin(), multi.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return a < b;
  });

  std::vector<McrSet> sets;
  std::vector<bool> used(multi.size(), false);
  auto disjoint = [](const std::vector<int>& a, const std::vector<int>& b) {
    for (int m : a)
      if (std::binary_search(b.begin(), b.end(), m)) return false;
    return true;
  };
  for (std::size_t seed = 0; seed < multi.size(); ++seed) {
    if (used[seed]) continue;
    McrSet set;
    set.combinations.push_back(multi[seed]);
    used[seed] = true;
    for (std::size_t i = seed + 1; i < multi.size(); ++i) {
      if (used[i]) continue;
      bool ok = true;
      for (const auto& mc : set.combinations)
        if (!disjoint(mc, multi[i])) {
          ok = false;
          break;
        }
      if (ok) {
        set.combinations.push_back(multi[i]);
        used[i] = true;
      }
    }
    sets.push_back(std::move(set));
  }
  if (!singles.empty()) {
    McrSet one_body;
    one_body.combinations = singles;  // already lexicographic from the std::set
    sets.push_back(std::move(one_body));
  }

  for (std::size_t s = 0; s < sets.size(); ++s) {
    sets[s].label = "S" + std::to_string(s);
    for (const auto& mc : sets[s].combinations) {
      auto& terms = routed[mc];
      sets[s].terms.insert(sets[s].terms.end(), terms.begin(), terms.end());
    }
    std::sort(sets[s].terms.begin(), sets[s].terms.end(), PauliSum::canonical_less);
  }
  return sets;
}

/// MCR variant that derives the mode combination range from the Pauli term
/// supports themselves.
inline std::vector<McrSet> mcr_partition(const PauliSum& ham, const QubitLayout& layout) {
  std::set<std::vector<int>> mcr;
  for (const auto& term : ham.terms()) mcr.insert(detail::term_support_modes(term, layout));
  return mcr_partition(ham, layout, mcr);
}

/// MCR pre-partition followed by independent Sorted Insertion within each
/// combined set; groups are concatenated in set-label order and tagged with
/// their set. Per-set sweeps may run concurrently, the output order is fixed.
inline GroupingResult mcr_sorted_insertion(const PauliSum& ham, const QubitLayout& layout,
                                           CommutationScheme scheme,
                                           const std::set<std::vector<int>>& mcr) {
  const std::vector<McrSet> sets = mcr_partition(ham, layout, mcr);
  std::vector<std::vector<MeasurementGroup>> per_set(sets.size());
  parallel_chunks(sets.size(), 1, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    (void)c;
    for (std::size_t s = lo; s < hi; ++s)
      per_set[s] = detail::sorted_insertion_sweep(sets[s].terms, scheme, sets[s].label);
  });

  GroupingResult result;
  result.scheme = scheme == CommutationScheme::QWC ? GroupingScheme::QWC_MCR
                                                   : GroupingScheme::FC_MCR;
  result.n_qubits = ham.n_qubits();
  result.covered_terms = static_cast<std::int64_t>(ham.size());
  for (auto& groups : per_set)
    for (auto& g : groups) result.groups.push_back(std::move(g));
  return result;
}

inline GroupingResult mcr_sorted_insertion(const PauliSum& ham, const QubitLayout& layout,
                                           CommutationScheme scheme) {
  std::set<std::vector<int>> mcr;
  for (const auto& term : ham.terms()) mcr.insert(detail::term_support_modes(term, layout));
  return mcr_sorted_insertion(ham, layout, scheme, mcr);
}

/// Runs the requested grouping scheme; MCR schemes need the source mode
/// combination range (pass the one from the expanded operator when
/// available, otherwise supports are used).
inline GroupingResult run_grouping(const PauliSum& ham, const QubitLayout& layout,
                                   GroupingScheme scheme,
                                   const std::optional<std::set<std::vector<int>>>& mcr = {}) {
  if (!uses_mcr(scheme)) return sorted_insertion(ham, commutation_of(scheme));
  if (mcr) return mcr_sorted_insertion(ham, layout, commutation_of(scheme), *mcr);
  return mcr_sorted_insertion(ham, layout, commutation_of(scheme));
}

}  // namespace vibrometer
