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

#ifndef ADASUB_POLICIES_H_
#define ADASUB_POLICIES_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "adasub/core.h"
#include "adasub/lattice.h"

namespace adasub {

// Live gain oracle for adaptive greedy. Gain(v) is the expected marginal gain
// of v given the observations made so far; Select(v) observes v's true state
// and returns it.
class GreedyOracle {
 public:
  virtual ~GreedyOracle() = default;
  virtual int num_elements() const = 0;
  virtual ExpectedGain Gain(ElementId v) = 0;
  virtual StateCode Select(ElementId v) = 0;
};

struct GreedyOptions {
  // Stop early once the best gain is at most zero (off by default: the
  // algorithm always makes `budget` selections).
  bool stop_on_zero = false;
};

struct GreedyRun {
  std::vector<ElementId> selected;
  PartialRealization observations;
  std::vector<double> gains;
  int budget = 0;
};

// Index of the maximum, breaking ties (within 1e-12 relative) by the lowest
// index. Entries with `eligible[i] == false` are ignored. Returns -1 if none.
int ArgmaxLowestIndex(const std::vector<double>& values,
                      const std::vector<bool>& eligible);

// Adaptive greedy on a live oracle. Requires budget <= num_elements.
GreedyRun RunGreedy(GreedyOracle& oracle, int budget,
                    const GreedyOptions& options = {});

// Oracle over a tabular instance observing a fixed true realization.
class TabularGreedyOracle : public GreedyOracle {
 public:
  TabularGreedyOracle(ObservationLattice& lattice, Realization truth);
  int num_elements() const override { return lattice_.num_elements(); }
  ExpectedGain Gain(ElementId v) override;
  StateCode Select(ElementId v) override;

 private:
  ObservationLattice& lattice_;
  Realization truth_;
  ObservationLattice::NodeId node_;
};

GreedyRun AdaptiveGreedy(ObservationLattice& lattice, int budget,
                         const Realization& truth,
                         const GreedyOptions& options = {});

// The greedy policy as a tree of height `budget` over every positive
// probability history.
PolicyTree GreedyPolicyTree(ObservationLattice& lattice, int budget);

// Greedy on a set function over elements 0..n-1 (no observations).
using SetFunction = std::function<double(const std::vector<ElementId>&)>;
std::vector<ElementId> NonAdaptiveGreedy(const SetFunction& g, int n,
                                         int budget);

// Uniform random subset of size `budget` in draw order (partial
// Fisher-Yates), deterministic in the seed.
std::vector<ElementId> RandomPolicy(int n, int budget, std::uint64_t seed);

struct OptimalPolicy {
  PolicyTree tree;
  // f_avg of the tree.
  double value = 0.0;
  std::int64_t nodes_visited = 0;
};

// Exact maximizer of f_avg over trees of height <= k by dynamic programming
// over the lattice. Throws kBudgetExceeded past `cap` (history, depth) states.
OptimalPolicy OptimalPolicyExhaustive(ObservationLattice& lattice, int k,
                                      std::int64_t cap = 2'000'000);

}  // namespace adasub

#endif  // ADASUB_POLICIES_H_
