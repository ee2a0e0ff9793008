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

#include "adasub/lattice.h"

#include <cmath>
#include <limits>
#include <string>

namespace adasub {

std::size_t ObservationLattice::KeyHash::operator()(
    const std::vector<std::int16_t>& k) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int16_t x : k) {
    h ^= static_cast<std::uint16_t>(x);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

ObservationLattice::ObservationLattice(const TabularInstance& inst,
                                       std::int64_t node_cap)
    : inst_(inst), n_(inst.prior.num_elements()), node_cap_(node_cap) {
  if (n_ > ElementSet::kMaxElements) {
    throw Error(ErrorCode::kInvalidInput, "more than 64 elements");
  }
  std::vector<int> all(inst.prior.size());
  for (int i = 0; i < inst.prior.size(); ++i) all[i] = i;
  Intern(std::vector<std::int16_t>(n_, -1), std::move(all));
  for (double x : Values(ElementSet())) {
    value_scale_ = std::max(value_scale_, std::abs(x));
  }
  for (double x : Values(ElementSet::All(n_))) {
    value_scale_ = std::max(value_scale_, std::abs(x));
  }
}

ObservationLattice::NodeId ObservationLattice::Intern(
    std::vector<std::int16_t> key, std::vector<int> support) {
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (static_cast<std::int64_t>(nodes_.size()) >= node_cap_) {
    throw Error(ErrorCode::kBudgetExceeded,
                "observation lattice exceeds cap " + std::to_string(node_cap_));
  }
  Node node;
  node.key = key;
  for (int v = 0; v < n_; ++v) {
    if (key[v] >= 0) node.dom = node.dom.with(v);
  }
  for (int i : support) node.mass += inst_.prior.prob(i);
  node.support = std::move(support);
  node.gains.assign(n_, std::numeric_limits<double>::quiet_NaN());
  node.branches.resize(n_);
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(node));
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<ObservationLattice::NodeId> ObservationLattice::Find(
    const PartialRealization& psi) {
  NodeId node = root();
  for (int v = 0; v < n_; ++v) {
    auto s = psi.StateOf(v);
    if (!s) continue;
    bool found = false;
    for (const Branch& b : Branches(node, v)) {
      if (b.state == *s) {
        node = b.child;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return node;
}

const std::vector<ObservationLattice::Branch>& ObservationLattice::Branches(
    NodeId n, ElementId v) {
  if (nodes_[n].branches[v]) return *nodes_[n].branches[v];
  if (nodes_[n].dom.contains(v)) {
    throw Error(ErrorCode::kElementReuse,
                "element " + std::to_string(v) + " already observed");
  }
  const int num_states = inst_.prior.space().num_states(v);
  std::vector<std::vector<int>> groups(num_states);
  for (int i : nodes_[n].support) {
    groups[inst_.prior.realization(i).states[v]].push_back(i);
  }
  std::vector<Branch> out;
  const double parent_mass = nodes_[n].mass;
  for (int s = 0; s < num_states; ++s) {
    if (groups[s].empty()) continue;
    double mass = 0.0;
    for (int i : groups[s]) mass += inst_.prior.prob(i);
    if (mass <= 0.0) continue;
    std::vector<std::int16_t> key = nodes_[n].key;
    key[v] = static_cast<std::int16_t>(s);
    const NodeId child = Intern(std::move(key), std::move(groups[s]));
    out.push_back(Branch{s, child, mass / parent_mass});
  }
  nodes_[n].branches[v] = std::move(out);
  return *nodes_[n].branches[v];
}

const std::vector<double>& ObservationLattice::Values(ElementSet s) {
  auto it = values_.find(s.mask());
  if (it != values_.end()) return it->second;
  std::vector<double> vals(inst_.prior.size());
  for (int i = 0; i < inst_.prior.size(); ++i) {
    vals[i] = inst_.objective(s, inst_.prior.realization(i));
  }
  return values_.emplace(s.mask(), std::move(vals)).first->second;
}

double ObservationLattice::Gain(NodeId n, ElementId v) {
  double cached = nodes_[n].gains[v];
  if (!std::isnan(cached)) return cached;
  const ElementSet dom = nodes_[n].dom;
  double g = 0.0;
  if (!dom.contains(v)) {
    const std::vector<double>& base = Values(dom);
    const std::vector<double>& next = Values(dom.with(v));
    double acc = 0.0;
    for (int i : nodes_[n].support) {
      acc += inst_.prior.prob(i) * (next[i] - base[i]);
    }
    g = acc / nodes_[n].mass;
  }
  nodes_[n].gains[v] = g;
  return g;
}

double ObservationLattice::ExpectedValue(NodeId n, ElementSet s) {
  const std::vector<double>& vals = Values(s);
  double acc = 0.0;
  for (int i : nodes_[n].support) acc += inst_.prior.prob(i) * vals[i];
  return acc / nodes_[n].mass;
}

PartialRealization ObservationLattice::ToPartial(NodeId n) const {
  PartialRealization psi;
  for (int v = 0; v < n_; ++v) {
    if (nodes_[n].key[v] >= 0) psi.Add(v, nodes_[n].key[v]);
  }
  return psi;
}

std::vector<ObservationLattice::NodeId> ObservationLattice::NodesUpToDepth(
    int depth) {
  std::vector<NodeId> order{root()};
  std::vector<bool> seen(1, true);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId n = order[head];
    if (Depth(n) >= depth) continue;
    for (int v = 0; v < n_; ++v) {
      if (nodes_[n].dom.contains(v)) continue;
      for (const Branch& b : Branches(n, v)) {
        if (static_cast<std::size_t>(b.child) >= seen.size()) {
          seen.resize(nodes_.size(), false);
        }
        if (!seen[b.child]) {
          seen[b.child] = true;
          order.push_back(b.child);
        }
      }
    }
  }
  return order;
}

}  // namespace adasub
