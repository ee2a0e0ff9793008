// Copyright 2026 The adasub Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADASUB_CORE_H_
#define ADASUB_CORE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adasub/error.h"
#include "adasub/policy_tree.h"

namespace adasub {

// Absolute tolerance on probabilities.
inline constexpr double kProbTol = 1e-12;
// Relative tolerance on objective values.
inline constexpr double kValueRelTol = 1e-9;

// Subset of a ground set with at most 64 elements.
class ElementSet {
 public:
  static constexpr int kMaxElements = 64;

  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t mask) : mask_(mask) {}
  static ElementSet Of(const std::vector<ElementId>& elements);
  static ElementSet All(int n);

  std::uint64_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  bool contains(ElementId v) const { return (mask_ >> v) & 1u; }
  int size() const { return __builtin_popcountll(mask_); }
  ElementSet with(ElementId v) const {
    return ElementSet(mask_ | (std::uint64_t{1} << v));
  }
  ElementSet without(ElementId v) const {
    return ElementSet(mask_ & ~(std::uint64_t{1} << v));
  }
  ElementSet operator|(ElementSet o) const {
    return ElementSet(mask_ | o.mask_);
  }
  ElementSet operator&(ElementSet o) const {
    return ElementSet(mask_ & o.mask_);
  }
  bool operator==(const ElementSet& o) const = default;
  bool IsSubsetOf(ElementSet o) const { return (mask_ & ~o.mask_) == 0; }
  std::vector<ElementId> elements() const;
  std::string DebugString() const;

 private:
  std::uint64_t mask_ = 0;
};

// Per-element finite state spaces with dense codes 0..n-1.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<int> num_states,
                      std::vector<std::vector<std::string>> labels = {});

  int num_elements() const { return static_cast<int>(num_states_.size()); }
  int num_states(ElementId v) const { return num_states_.at(v); }
  const std::vector<int>& all_num_states() const { return num_states_; }
  // Label of a state; the decimal code when no labels were given.
  std::string Label(ElementId v, StateCode s) const;

 private:
  std::vector<int> num_states_;
  std::vector<std::vector<std::string>> labels_;
};

// Full realization. `latent` distinguishes support points that agree on every
// element state but differ in unobservable variables the objective reads.
struct Realization {
  std::vector<StateCode> states;
  int latent = 0;

  bool operator==(const Realization& o) const = default;
};

struct Observation {
  ElementId element;
  StateCode state;

  bool operator==(const Observation& o) const = default;
};

// Ordered observation history. Element ids are unbounded; set-valued
// accessors need ids below 64.
class PartialRealization {
 public:
  PartialRealization() = default;
  PartialRealization(std::initializer_list<Observation> entries);
  explicit PartialRealization(const std::vector<Observation>& entries);

  // Throws kElementReuse if the element was already observed.
  void Add(ElementId element, StateCode state);
  PartialRealization With(ElementId element, StateCode state) const;

  const std::vector<Observation>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  bool Contains(ElementId v) const;
  // State of an observed element, nullopt otherwise.
  std::optional<StateCode> StateOf(ElementId v) const;
  // Throws kInvalidInput when an element id is 64 or more.
  ElementSet Dom() const;
  bool ConsistentWith(const Realization& phi) const;
  // First `n` entries: the history before the n-th selection.
  PartialRealization Prefix(int n) const;
  // Subset relation on the entry sets; order is ignored.
  bool IsSubsetOf(const PartialRealization& other) const;
  // Sub-realization keeping the entries whose index bit is set in `mask`.
  PartialRealization SubsetByMask(std::uint64_t mask) const;
  std::string DebugString() const;

 private:
  std::vector<Observation> entries_;
  ElementSet dom_;  // Elements below 64.
  bool has_large_ = false;
};

// Explicit finite joint distribution over realizations.
class TabularPrior {
 public:
  TabularPrior() = default;
  // Validates codes against `space`, probabilities >= 0 summing to 1 within
  // kProbTol, and pairwise distinct support points.
  TabularPrior(StateSpace space, std::vector<Realization> support,
               std::vector<double> probs);

  const StateSpace& space() const { return space_; }
  int num_elements() const { return space_.num_elements(); }
  int size() const { return static_cast<int>(support_.size()); }
  const std::vector<Realization>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const Realization& realization(int i) const { return support_[i]; }
  double prob(int i) const { return probs_[i]; }

  // Total probability of the realizations consistent with psi.
  double Probability(const PartialRealization& psi) const;

 private:
  friend TabularPrior Condition(const TabularPrior&, const PartialRealization&);
  StateSpace space_;
  std::vector<Realization> support_;
  std::vector<double> probs_;
};

using Objective = std::function<double(ElementSet, const Realization&)>;

struct TabularInstance {
  TabularPrior prior;
  Objective objective;
  std::string name;
};

struct ExpectedGain {
  double value = 0.0;
  // 0 means the value is exact.
  int sample_count = 0;
  double std_error = 0.0;
};

// Zero threshold for gains on an instance whose values have magnitude `scale`.
inline double GainZeroTol(double scale) {
  return 1e-12 * (scale > 1.0 ? scale : 1.0);
}

// Posterior given psi, renormalized. Throws kInconsistentObservation when
// p(psi) = 0.
TabularPrior Condition(const TabularPrior& prior,
                       const PartialRealization& psi);

// Exact expected marginal gains over the conditioned support.
ExpectedGain GainElement(const TabularInstance& inst, ElementId v,
                         const PartialRealization& psi);
ExpectedGain GainSet(const TabularInstance& inst, ElementSet s,
                     const PartialRealization& psi);
// Throws kElementReuse if the tree selects an element of dom(psi) and
// kMissingBranch if a consistent realization reaches a missing child.
ExpectedGain GainPolicy(const TabularInstance& inst, const PolicyTree& policy,
                        const PartialRealization& psi);

struct PolicyRun {
  ElementSet selected;
  // Observations in selection order; the prefix before entry i is the
  // history the policy used to pick entry i.
  PartialRealization trace;
};

PolicyRun RunPolicy(const PolicyTree& policy, const Realization& phi);

// E[f(E(pi, Phi), Phi)].
ExpectedGain AvgValue(const TabularInstance& inst, const PolicyTree& policy);

// Runs `first`, then `second` from scratch. Elements of `second` that were
// already selected are not selected again; their observed branch is taken.
PolicyTree Concat(const PolicyTree& first, const PolicyTree& second);

struct PropertyCheck {
  bool holds = true;
  // On failure: the violating history pair and element. For monotonicity
  // `larger` is unused.
  PartialRealization smaller;
  PartialRealization larger;
  ElementId element = -1;
  double gain_smaller = 0.0;
  double gain_larger = 0.0;
};

// Default cap on the number of distinct positive-probability histories.
inline constexpr std::int64_t kDefaultLatticeCap = 2'000'000;

PropertyCheck CheckAdaptiveMonotone(const TabularInstance& inst,
                                    std::int64_t cap = kDefaultLatticeCap);
// Checks Delta(v|psi) >= Delta(v|psi') - tol on every pair psi -> psi + (u,y)
// of positive-probability histories; by transitivity this covers all pairs.
PropertyCheck CheckAdaptiveSubmodular(const TabularInstance& inst,
                                      std::int64_t cap = kDefaultLatticeCap);

// Largest |f| over the support on the empty set and the full ground set.
double ValueScale(const TabularInstance& inst);

}  // namespace adasub

#endif  // ADASUB_CORE_H_
