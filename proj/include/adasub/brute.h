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

#ifndef ADASUB_BRUTE_H_
#define ADASUB_BRUTE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "adasub/core.h"
#include "adasub/lattice.h"

namespace adasub {

enum class MetricKind {
  kGammaAdaptive,
  kGammaLevel,
  kGammaNonadaptive,
  kBeta,
  kZetaStar,
  kGap,
};

std::string MetricKindName(MetricKind kind);

// Minimizing history and policy of an adaptive ratio.
struct PolicyWitness {
  PartialRealization psi;
  PolicyTree policy;
  double numerator = 0.0;
  double denominator = 0.0;
};

// Minimizing (L, S) of a set-function ratio.
struct SetWitness {
  ElementSet base;
  ElementSet set;
  double numerator = 0.0;
  double denominator = 0.0;
};

// Maximizing (psi subset of psi', v) of the weak submodularity factor.
struct PairWitness {
  PartialRealization smaller;
  PartialRealization larger;
  ElementId element = -1;
  double numerator = 0.0;
  double denominator = 0.0;
};

// Best non-adaptive set and optimal adaptive value of a gap.
struct GapWitness {
  ElementSet set;
  double nonadaptive_value = 0.0;
  double adaptive_value = 0.0;
  PolicyTree adaptive_policy;
};

struct MetricReport {
  MetricKind kind = MetricKind::kGammaAdaptive;
  double value = 1.0;
  std::variant<std::monostate, PolicyWitness, SetWitness, PairWitness,
               GapWitness>
      witness;
  // Histories skipped because they have probability zero.
  std::int64_t skipped_zero_probability = 0;
  std::int64_t nodes_visited = 0;
};

inline constexpr std::int64_t kDefaultNodeCap = 2'000'000;

// Adaptive submodularity ratio gamma_{psi,k}: the minimum over psi' subset of
// psi and trees of height <= k over V \ dom(psi') of
//   sum_v Pr(v in E(pi) | psi') Delta(v | psi') / Delta(pi | psi').
// 0/0 counts as 1; policies with zero gain and a positive numerator are
// skipped. The minimum over trees is found exactly by a parametric dynamic
// program over the lattice (Dinkelbach iteration), which assumes adaptive
// monotonicity. `cap` bounds the (history, depth) states visited.
MetricReport GammaAdaptive(ObservationLattice& lattice,
                           const PartialRealization& psi, int k,
                           std::int64_t cap = kDefaultNodeCap);

// gamma_{l,k}: minimum of gamma over positive-probability psi with |psi| <= l.
MetricReport GammaLevel(ObservationLattice& lattice, int level, int k,
                        std::int64_t cap = kDefaultNodeCap);

// Same quantity by explicit enumeration of every tree; the test oracle for
// GammaAdaptive. Ratios are evaluated with PolicyRatio.
MetricReport GammaAdaptiveByEnumeration(const TabularInstance& inst,
                                        const PartialRealization& psi, int k,
                                        std::int64_t cap = kDefaultNodeCap);

// Numerator and denominator of the ratio for one tree at psi, computed from
// the core expectation operators.
struct RatioTerms {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 1.0;
};
RatioTerms PolicyRatio(const TabularInstance& inst,
                       const PartialRealization& psi, const PolicyTree& policy);

// Every tree of height <= k at node n with a child for every positive
// probability branch. Throws kBudgetExceeded past `cap` trees.
std::vector<PolicyTree> EnumeratePolicies(ObservationLattice& lattice,
                                          ObservationLattice::NodeId n, int k,
                                          std::int64_t cap = kDefaultNodeCap);
// Number of such trees (including the leaf) without materializing them.
std::int64_t CountPolicies(ObservationLattice& lattice,
                           ObservationLattice::NodeId n, int k);

using SetValue = std::function<double(ElementSet)>;

// Submodularity ratio gamma_{U,k} of g over ground set {0..n-1}: minimum over
// L subset of U and nonempty S disjoint from L, |S| <= k, of
// sum_{v in S} g(v|L) / g(S|L). Values within `zero_tol` of 0 count as 0.
MetricReport GammaNonadaptive(const SetValue& g, int n, ElementSet u, int k,
                              double zero_tol = 1e-12,
                              std::int64_t cap = kDefaultNodeCap);
// Supermodularity ratio beta_{U,k}: g(S|L) / sum_{v in S} g(v|L).
MetricReport BetaNonadaptive(const SetValue& g, int n, ElementSet u, int k,
                             double zero_tol = 1e-12,
                             std::int64_t cap = kDefaultNodeCap);

// zeta*: maximum over positive-probability psi subset of psi' and v outside
// dom(psi') of Delta(v|psi') / Delta(v|psi); +infinity when the denominator
// is 0 and the numerator positive. For each (psi', v) the smallest
// Delta(v|psi) over sub-histories is propagated down the lattice, which
// assumes nonnegative gains (adaptive monotonicity).
MetricReport ZetaStar(ObservationLattice& lattice,
                      std::int64_t cap = kDefaultNodeCap);

// Same quantity by enumerating every pair psi subset of psi'; the test
// oracle for ZetaStar.
MetricReport ZetaStarByEnumeration(ObservationLattice& lattice,
                                   std::int64_t cap = kDefaultNodeCap);

// max_{|M| <= k} E f(M) divided by the optimal adaptive value over trees of
// height <= k; 1 when the adaptive value is 0.
MetricReport AdaptivityGapExact(ObservationLattice& lattice, int k,
                                std::int64_t cap = kDefaultNodeCap);

struct GapBoundReport {
  double gap = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  bool holds = false;
};
// gap >= beta_{empty,k}(E f) * gamma_{empty,k} - 1e-9.
GapBoundReport VerifyGapBound(ObservationLattice& lattice, int k,
                              std::int64_t cap = kDefaultNodeCap);

struct ZetaGammaReport {
  double zeta = 1.0;
  double min_gamma = 1.0;
  bool holds = false;
};
// 1/zeta* <= min over all psi of gamma_{psi,k} + 1e-9.
ZetaGammaReport VerifyZetaVsGamma(ObservationLattice& lattice, int k,
                                  std::int64_t cap = kDefaultNodeCap);

// Expected objective E f(S, Phi) over the prior as a set function.
SetValue ExpectedObjective(ObservationLattice& lattice);

}  // namespace adasub

#endif  // ADASUB_BRUTE_H_
