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

#include "adasub/core.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "adasub/lattice.h"

namespace adasub {

ElementSet ElementSet::Of(const std::vector<ElementId>& elements) {
  ElementSet s;
  for (ElementId v : elements) {
    if (v < 0 || v >= kMaxElements) {
      throw Error(ErrorCode::kInvalidInput, "element id out of range");
    }
    s = s.with(v);
  }
  return s;
}

ElementSet ElementSet::All(int n) {
  if (n < 0 || n > kMaxElements) {
    throw Error(ErrorCode::kInvalidInput, "ground set too large");
  }
  return ElementSet(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
}

std::vector<ElementId> ElementSet::elements() const {
  std::vector<ElementId> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(__builtin_ctzll(m));
  }
  return out;
}

std::string ElementSet::DebugString() const {
  std::string s = "{";
  bool first = true;
  for (ElementId v : elements()) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(v);
  }
  return s + "}";
}

StateSpace::StateSpace(std::vector<int> num_states,
                       std::vector<std::vector<std::string>> labels)
    : num_states_(std::move(num_states)), labels_(std::move(labels)) {
  for (int c : num_states_) {
    if (c < 1) throw Error(ErrorCode::kInvalidInput, "element with no states");
  }
  if (!labels_.empty()) {
    if (labels_.size() != num_states_.size()) {
      throw Error(ErrorCode::kInvalidInput, "label count mismatch");
    }
    for (std::size_t v = 0; v < labels_.size(); ++v) {
      if (static_cast<int>(labels_[v].size()) != num_states_[v]) {
        throw Error(ErrorCode::kInvalidInput, "label count mismatch");
      }
    }
  }
}

std::string StateSpace::Label(ElementId v, StateCode s) const {
  if (labels_.empty()) return std::to_string(s);
  return labels_.at(v).at(s);
}

PartialRealization::PartialRealization(std::initializer_list<Observation> e) {
  for (const Observation& o : e) Add(o.element, o.state);
}

PartialRealization::PartialRealization(const std::vector<Observation>& e) {
  for (const Observation& o : e) Add(o.element, o.state);
}

void PartialRealization::Add(ElementId element, StateCode state) {
  if (element < 0) {
    throw Error(ErrorCode::kInvalidInput, "element id out of range");
  }
  if (Contains(element)) {
    throw Error(ErrorCode::kElementReuse,
                "element " + std::to_string(element) + " observed twice");
  }
  entries_.push_back({element, state});
  if (element < ElementSet::kMaxElements) {
    dom_ = dom_.with(element);
  } else {
    has_large_ = true;
  }
}

bool PartialRealization::Contains(ElementId v) const {
  if (v >= 0 && v < ElementSet::kMaxElements) return dom_.contains(v);
  if (!has_large_) return false;
  for (const Observation& o : entries_) {
    if (o.element == v) return true;
  }
  return false;
}

ElementSet PartialRealization::Dom() const {
  if (has_large_) {
    throw Error(ErrorCode::kInvalidInput,
                "domain has elements beyond the 64-element set range");
  }
  return dom_;
}

PartialRealization PartialRealization::With(ElementId element,
                                            StateCode state) const {
  PartialRealization out = *this;
  out.Add(element, state);
  return out;
}

std::optional<StateCode> PartialRealization::StateOf(ElementId v) const {
  if (!Contains(v)) return std::nullopt;
  for (const Observation& o : entries_) {
    if (o.element == v) return o.state;
  }
  return std::nullopt;
}

bool PartialRealization::ConsistentWith(const Realization& phi) const {
  for (const Observation& o : entries_) {
    if (o.element >= static_cast<int>(phi.states.size()) ||
        phi.states[o.element] != o.state) {
      return false;
    }
  }
  return true;
}

PartialRealization PartialRealization::Prefix(int n) const {
  PartialRealization out;
  for (int i = 0; i < n && i < size(); ++i) {
    out.Add(entries_[i].element, entries_[i].state);
  }
  return out;
}

bool PartialRealization::IsSubsetOf(const PartialRealization& other) const {
  for (const Observation& o : entries_) {
    auto s = other.StateOf(o.element);
    if (!s || *s != o.state) return false;
  }
  return true;
}

PartialRealization PartialRealization::SubsetByMask(std::uint64_t mask) const {
  PartialRealization out;
  for (int i = 0; i < size(); ++i) {
    if ((mask >> i) & 1u) out.Add(entries_[i].element, entries_[i].state);
  }
  return out;
}

std::string PartialRealization::DebugString() const {
  std::string s = "[";
  for (int i = 0; i < size(); ++i) {
    if (i > 0) s += ",";
    s += "(" + std::to_string(entries_[i].element) + "," +
         std::to_string(entries_[i].state) + ")";
  }
  return s + "]";
}

TabularPrior::TabularPrior(StateSpace space, std::vector<Realization> support,
                           std::vector<double> probs)
    : space_(std::move(space)),
      support_(std::move(support)),
      probs_(std::move(probs)) {
  if (support_.size() != probs_.size()) {
    throw Error(ErrorCode::kInvalidInput, "support/probability size mismatch");
  }
  if (support_.empty()) throw Error(ErrorCode::kInvalidInput, "empty support");
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const Realization& r = support_[i];
    if (static_cast<int>(r.states.size()) != space_.num_elements()) {
      throw Error(ErrorCode::kInvalidInput, "realization length mismatch");
    }
    for (int v = 0; v < space_.num_elements(); ++v) {
      if (r.states[v] < 0 || r.states[v] >= space_.num_states(v)) {
        throw Error(ErrorCode::kInvalidInput,
                    "state code out of range for element " + std::to_string(v));
      }
    }
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw Error(ErrorCode::kInvalidInput,
                  "negative or non-finite probability");
    }
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > kProbTol) {
    throw Error(ErrorCode::kInvalidInput,
                "probabilities sum to " + std::to_string(total));
  }
  std::set<std::pair<std::vector<StateCode>, int>> seen;
  for (const Realization& r : support_) {
    if (!seen.emplace(r.states, r.latent).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate support point");
    }
  }
}

double TabularPrior::Probability(const PartialRealization& psi) const {
  double p = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (psi.ConsistentWith(support_[i])) p += probs_[i];
  }
  return p;
}

TabularPrior Condition(const TabularPrior& prior,
                       const PartialRealization& psi) {
  if (psi.empty()) return prior;
  TabularPrior out;
  out.space_ = prior.space_;
  double total = 0.0;
  for (int i = 0; i < prior.size(); ++i) {
    if (prior.probs_[i] > 0.0 && psi.ConsistentWith(prior.support_[i])) {
      out.support_.push_back(prior.support_[i]);
      out.probs_.push_back(prior.probs_[i]);
      total += prior.probs_[i];
    }
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInconsistentObservation,
                "history " + psi.DebugString() + " has probability 0");
  }
  for (double& p : out.probs_) p /= total;
  return out;
}

namespace {

// Consistent support indices and their total mass; throws when empty.
double ConsistentSupport(const TabularPrior& prior,
                         const PartialRealization& psi, std::vector<int>& idx) {
  double mass = 0.0;
  for (int i = 0; i < prior.size(); ++i) {
    if (prior.prob(i) > 0.0 && psi.ConsistentWith(prior.realization(i))) {
      idx.push_back(i);
      mass += prior.prob(i);
    }
  }
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kInconsistentObservation,
                "history " + psi.DebugString() + " has probability 0");
  }
  return mass;
}

void CheckDisjoint(const PolicyTree& t, ElementSet dom) {
  if (t.is_leaf()) return;
  if (dom.contains(t.element())) {
    throw Error(ErrorCode::kElementReuse, "policy selects observed element " +
                                              std::to_string(t.element()));
  }
  for (const auto& [s, child] : t.children()) CheckDisjoint(child, dom);
}

// Elements the policy selects on phi, added to `selected`.
ElementSet Descend(const PolicyTree& policy, const Realization& phi,
                   PartialRealization* trace) {
  ElementSet selected;
  const PolicyTree* node = &policy;
  while (!node->is_leaf()) {
    const ElementId v = node->element();
    if (v >= static_cast<int>(phi.states.size())) {
      throw Error(ErrorCode::kInvalidInput, "policy element out of range");
    }
    const StateCode s = phi.states[v];
    selected = selected.with(v);
    if (trace != nullptr) trace->Add(v, s);
    const PolicyTree* next = node->child(s);
    if (next == nullptr) {
      throw Error(ErrorCode::kMissingBranch,
                  "no branch for state " + std::to_string(s) + " of element " +
                      std::to_string(v));
    }
    node = next;
  }
  return selected;
}

}  // namespace

ExpectedGain GainSet(const TabularInstance& inst, ElementSet s,
                     const PartialRealization& psi) {
  std::vector<int> idx;
  const double mass = ConsistentSupport(inst.prior, psi, idx);
  const ElementSet dom = psi.Dom();
  const ElementSet target = dom | s;
  if (target == dom) return ExpectedGain{0.0, 0, 0.0};
  double acc = 0.0;
  for (int i : idx) {
    const Realization& phi = inst.prior.realization(i);
    acc += inst.prior.prob(i) *
           (inst.objective(target, phi) - inst.objective(dom, phi));
  }
  return ExpectedGain{acc / mass, 0, 0.0};
}

ExpectedGain GainElement(const TabularInstance& inst, ElementId v,
                         const PartialRealization& psi) {
  if (v < 0 || v >= inst.prior.num_elements()) {
    throw Error(ErrorCode::kInvalidInput, "element id out of range");
  }
  return GainSet(inst, ElementSet().with(v), psi);
}

ExpectedGain GainPolicy(const TabularInstance& inst, const PolicyTree& policy,
                        const PartialRealization& psi) {
  std::vector<int> idx;
  const double mass = ConsistentSupport(inst.prior, psi, idx);
  const ElementSet dom = psi.Dom();
  CheckDisjoint(policy, dom);
  double acc = 0.0;
  for (int i : idx) {
    const Realization& phi = inst.prior.realization(i);
    const ElementSet chosen = Descend(policy, phi, nullptr);
    if (chosen.empty()) continue;
    acc += inst.prior.prob(i) *
           (inst.objective(dom | chosen, phi) - inst.objective(dom, phi));
  }
  return ExpectedGain{acc / mass, 0, 0.0};
}

PolicyRun RunPolicy(const PolicyTree& policy, const Realization& phi) {
  PolicyRun run;
  run.selected = Descend(policy, phi, &run.trace);
  return run;
}

ExpectedGain AvgValue(const TabularInstance& inst, const PolicyTree& policy) {
  double acc = 0.0;
  for (int i = 0; i < inst.prior.size(); ++i) {
    const Realization& phi = inst.prior.realization(i);
    if (inst.prior.prob(i) == 0.0) continue;
    acc +=
        inst.prior.prob(i) * inst.objective(Descend(policy, phi, nullptr), phi);
  }
  return ExpectedGain{acc, 0, 0.0};
}

namespace {

PolicyTree Graft(const PolicyTree& second, const PartialRealization& seen) {
  const PolicyTree* node = &second;
  while (!node->is_leaf()) {
    auto s = seen.StateOf(node->element());
    if (!s) break;
    node = node->child(*s);
    if (node == nullptr) return PolicyTree::Leaf();
  }
  if (node->is_leaf()) return PolicyTree::Leaf();
  PolicyTree::Children children;
  for (const auto& [s, child] : node->children()) {
    children.emplace(s, Graft(child, seen.With(node->element(), s)));
  }
  return PolicyTree::Node(node->element(), std::move(children));
}

PolicyTree ConcatAt(const PolicyTree& first, const PolicyTree& second,
                    const PartialRealization& seen) {
  if (first.is_leaf()) return Graft(second, seen);
  PolicyTree::Children children;
  for (const auto& [s, child] : first.children()) {
    children.emplace(s, ConcatAt(child, second, seen.With(first.element(), s)));
  }
  return PolicyTree::Node(first.element(), std::move(children));
}

}  // namespace

PolicyTree Concat(const PolicyTree& first, const PolicyTree& second) {
  return ConcatAt(first, second, PartialRealization());
}

PropertyCheck CheckAdaptiveMonotone(const TabularInstance& inst,
                                    std::int64_t cap) {
  ObservationLattice lattice(inst, cap);
  const double tol = lattice.zero_tol();
  const int n = lattice.num_elements();
  PropertyCheck out;
  for (ObservationLattice::NodeId node : lattice.NodesUpToDepth(n)) {
    for (int v = 0; v < n; ++v) {
      if (lattice.Dom(node).contains(v)) continue;
      const double g = lattice.Gain(node, v);
      if (g < -tol) {
        out.holds = false;
        out.smaller = lattice.ToPartial(node);
        out.element = v;
        out.gain_smaller = g;
        return out;
      }
    }
  }
  return out;
}

PropertyCheck CheckAdaptiveSubmodular(const TabularInstance& inst,
                                      std::int64_t cap) {
  ObservationLattice lattice(inst, cap);
  const double tol = lattice.zero_tol();
  const int n = lattice.num_elements();
  PropertyCheck out;
  for (ObservationLattice::NodeId node : lattice.NodesUpToDepth(n)) {
    const ElementSet dom = lattice.Dom(node);
    for (int u = 0; u < n; ++u) {
      if (dom.contains(u)) continue;
      for (const auto& b : lattice.Branches(node, u)) {
        for (int v = 0; v < n; ++v) {
          if (v == u || dom.contains(v)) continue;
          const double before = lattice.Gain(node, v);
          const double after = lattice.Gain(b.child, v);
          if (after > before + tol) {
            out.holds = false;
            out.smaller = lattice.ToPartial(node);
            out.larger = lattice.ToPartial(b.child);
            out.element = v;
            out.gain_smaller = before;
            out.gain_larger = after;
            return out;
          }
        }
      }
    }
  }
  return out;
}

double ValueScale(const TabularInstance& inst) {
  double scale = 0.0;
  const ElementSet all = ElementSet::All(inst.prior.num_elements());
  for (const Realization& phi : inst.prior.support()) {
    scale = std::max(scale, std::abs(inst.objective(ElementSet(), phi)));
    scale = std::max(scale, std::abs(inst.objective(all, phi)));
  }
  return scale;
}

}  // namespace adasub
