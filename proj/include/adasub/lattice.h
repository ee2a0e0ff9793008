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

#ifndef ADASUB_LATTICE_H_
#define ADASUB_LATTICE_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "adasub/core.h"

namespace adasub {

// Memoized DAG of the positive-probability partial realizations of a tabular
// instance. A node is identified by its set of (element, state) pairs, which
// is all the posterior depends on. Gains, branch lists and objective values
// are computed lazily and cached.
//
// Not thread-safe: lookups mutate the caches.
class ObservationLattice {
 public:
  using NodeId = int;

  struct Branch {
    StateCode state;
    NodeId child;
    // Posterior probability of `state` at the parent.
    double prob;
  };

  // Throws kBudgetExceeded once more than `node_cap` nodes are created.
  explicit ObservationLattice(const TabularInstance& inst,
                              std::int64_t node_cap = kDefaultLatticeCap);

  const TabularInstance& instance() const { return inst_; }
  int num_elements() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(nodes_.size()); }

  NodeId root() const { return 0; }
  // Node for psi, or nullopt when p(psi) = 0.
  std::optional<NodeId> Find(const PartialRealization& psi);

  // Positive-probability outcomes of observing v at node n, by ascending
  // state. v must not be observed at n.
  const std::vector<Branch>& Branches(NodeId n, ElementId v);
  // Delta(v | psi_n); zero when v is observed at n.
  double Gain(NodeId n, ElementId v);
  // E[f(s, Phi) | psi_n].
  double ExpectedValue(NodeId n, ElementSet s);

  double Mass(NodeId n) const { return nodes_[n].mass; }
  ElementSet Dom(NodeId n) const { return nodes_[n].dom; }
  int Depth(NodeId n) const { return nodes_[n].dom.size(); }
  // Observations of node n in ascending element order.
  PartialRealization ToPartial(NodeId n) const;
  const std::vector<int>& SupportOf(NodeId n) const {
    return nodes_[n].support;
  }

  // All nodes with at most `depth` observations, in breadth-first order.
  std::vector<NodeId> NodesUpToDepth(int depth);

  // Objective values f(s, phi_i) for every support point i.
  const std::vector<double>& Values(ElementSet s);
  // Magnitude used to scale zero tolerances on gains.
  double value_scale() const { return value_scale_; }
  double zero_tol() const { return GainZeroTol(value_scale_); }

 private:
  struct Node {
    std::vector<std::int16_t> key;
    ElementSet dom;
    std::vector<int> support;
    double mass = 0.0;
    std::vector<double> gains;  // NaN until computed.
    std::vector<std::optional<std::vector<Branch>>> branches;
  };

  struct KeyHash {
    std::size_t operator()(const std::vector<std::int16_t>& k) const;
  };

  NodeId Intern(std::vector<std::int16_t> key, std::vector<int> support);

  const TabularInstance& inst_;
  int n_;
  std::int64_t node_cap_;
  std::deque<Node> nodes_;  // Stable references across growth.
  std::unordered_map<std::vector<std::int16_t>, NodeId, KeyHash> index_;
  std::unordered_map<std::uint64_t, std::vector<double>> values_;
  double value_scale_ = 0.0;
};

}  // namespace adasub

#endif  // ADASUB_LATTICE_H_
