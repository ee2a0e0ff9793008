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

#include "adasub/policies.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "adasub/rng.h"

namespace adasub {

int ArgmaxLowestIndex(const std::vector<double>& values,
                      const std::vector<bool>& eligible) {
  int best = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!eligible[i]) continue;
    if (best < 0 || values[i] > values[best]) best = static_cast<int>(i);
  }
  if (best < 0) return -1;
  const double top = values[best];
  const double slack = 1e-12 * std::max(1.0, std::abs(top));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (eligible[i] && values[i] >= top - slack) return static_cast<int>(i);
  }
  return best;
}

GreedyRun RunGreedy(GreedyOracle& oracle, int budget,
                    const GreedyOptions& options) {
  const int n = oracle.num_elements();
  if (budget < 0 || budget > n) {
    throw Error(ErrorCode::kInvalidInput, "budget " + std::to_string(budget) +
                                              " outside [0, " +
                                              std::to_string(n) + "]");
  }
  GreedyRun run;
  run.budget = budget;
  std::vector<bool> eligible(n, true);
  std::vector<double> gains(n, 0.0);
  for (int step = 0; step < budget; ++step) {
    for (int v = 0; v < n; ++v) {
      gains[v] = eligible[v] ? oracle.Gain(v).value : 0.0;
    }
    const int best = ArgmaxLowestIndex(gains, eligible);
    if (best < 0) break;
    if (options.stop_on_zero && gains[best] <= 0.0) break;
    const StateCode s = oracle.Select(best);
    eligible[best] = false;
    run.selected.push_back(best);
    run.observations.Add(best, s);
    run.gains.push_back(gains[best]);
  }
  return run;
}

TabularGreedyOracle::TabularGreedyOracle(ObservationLattice& lattice,
                                         Realization truth)
    : lattice_(lattice), truth_(std::move(truth)), node_(lattice.root()) {}

ExpectedGain TabularGreedyOracle::Gain(ElementId v) {
  return ExpectedGain{lattice_.Gain(node_, v), 0, 0.0};
}

StateCode TabularGreedyOracle::Select(ElementId v) {
  const StateCode s = truth_.states.at(v);
  for (const auto& b : lattice_.Branches(node_, v)) {
    if (b.state == s) {
      node_ = b.child;
      return s;
    }
  }
  throw Error(ErrorCode::kInconsistentObservation,
              "true realization has probability 0 under the prior");
}

GreedyRun AdaptiveGreedy(ObservationLattice& lattice, int budget,
                         const Realization& truth,
                         const GreedyOptions& options) {
  TabularGreedyOracle oracle(lattice, truth);
  return RunGreedy(oracle, budget, options);
}

namespace {

PolicyTree GreedyAt(ObservationLattice& lattice,
                    ObservationLattice::NodeId node, int depth,
                    std::map<std::pair<int, int>, PolicyTree>& memo) {
  if (depth == 0) return PolicyTree::Leaf();
  const auto key = std::make_pair(node, depth);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const int n = lattice.num_elements();
  const ElementSet dom = lattice.Dom(node);
  std::vector<double> gains(n, 0.0);
  std::vector<bool> eligible(n, false);
  for (int v = 0; v < n; ++v) {
    if (dom.contains(v)) continue;
    eligible[v] = true;
    gains[v] = lattice.Gain(node, v);
  }
  const int best = ArgmaxLowestIndex(gains, eligible);
  PolicyTree out;
  if (best >= 0) {
    PolicyTree::Children children;
    for (const auto& b : lattice.Branches(node, best)) {
      children.emplace(b.state, GreedyAt(lattice, b.child, depth - 1, memo));
    }
    out = PolicyTree::Node(best, std::move(children));
  }
  memo.emplace(key, out);
  return out;
}

}  // namespace

PolicyTree GreedyPolicyTree(ObservationLattice& lattice, int budget) {
  std::map<std::pair<int, int>, PolicyTree> memo;
  return GreedyAt(lattice, lattice.root(), budget, memo);
}

std::vector<ElementId> NonAdaptiveGreedy(const SetFunction& g, int n,
                                         int budget) {
  if (budget < 0 || budget > n) {
    throw Error(ErrorCode::kInvalidInput, "budget outside [0, n]");
  }
  std::vector<ElementId> chosen;
  std::vector<bool> eligible(n, true);
  std::vector<double> values(n, 0.0);
  for (int step = 0; step < budget; ++step) {
    for (int v = 0; v < n; ++v) {
      if (!eligible[v]) continue;
      chosen.push_back(v);
      values[v] = g(chosen);
      chosen.pop_back();
    }
    const int best = ArgmaxLowestIndex(values, eligible);
    eligible[best] = false;
    chosen.push_back(best);
  }
  return chosen;
}

std::vector<ElementId> RandomPolicy(int n, int budget, std::uint64_t seed) {
  if (budget < 0 || budget > n) {
    throw Error(ErrorCode::kInvalidInput, "budget outside [0, n]");
  }
  std::vector<ElementId> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (int i = 0; i < budget; ++i) {
    const int j = i + static_cast<int>(rng.UniformInt(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(budget);
  return perm;
}

namespace {

struct OptimalSearch {
  ObservationLattice& lattice;
  std::int64_t cap;
  std::int64_t visited = 0;
  std::map<std::pair<int, int>, std::pair<double, PolicyTree>> memo;

  // Best additional expected value from `node` with `depth` selections left.
  const std::pair<double, PolicyTree>& Solve(ObservationLattice::NodeId node,
                                             int depth) {
    const auto key = std::make_pair(node, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (++visited > cap) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "optimal policy search exceeds cap " + std::to_string(cap));
    }
    std::pair<double, PolicyTree> best{0.0, PolicyTree::Leaf()};
    if (depth > 0) {
      const ElementSet dom = lattice.Dom(node);
      const double tol = lattice.zero_tol();
      for (int v = 0; v < lattice.num_elements(); ++v) {
        if (dom.contains(v)) continue;
        double value = lattice.Gain(node, v);
        // Copy: recursion may grow the branch cache.
        const std::vector<ObservationLattice::Branch> branches =
            lattice.Branches(node, v);
        for (const auto& b : branches) {
          value += b.prob * Solve(b.child, depth - 1).first;
        }
        if (value > best.first + tol) {
          PolicyTree::Children children;
          for (const auto& b : branches) {
            children.emplace(b.state, Solve(b.child, depth - 1).second);
          }
          best = {value, PolicyTree::Node(v, std::move(children))};
        }
      }
    }
    return memo.emplace(key, std::move(best)).first->second;
  }
};

}  // namespace

OptimalPolicy OptimalPolicyExhaustive(ObservationLattice& lattice, int k,
                                      std::int64_t cap) {
  if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative budget");
  OptimalSearch search{lattice, cap, 0, {}};
  const auto& [gain, tree] = search.Solve(lattice.root(), k);
  OptimalPolicy out;
  out.tree = tree;
  out.value = lattice.ExpectedValue(lattice.root(), ElementSet()) + gain;
  out.nodes_visited = search.visited;
  return out;
}

}  // namespace adasub
