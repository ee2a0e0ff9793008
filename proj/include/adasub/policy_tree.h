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

#ifndef ADASUB_POLICY_TREE_H_
#define ADASUB_POLICY_TREE_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace adasub {

using ElementId = int;
using StateCode = int;

// Deterministic decision tree. A leaf stops; an internal node selects an
// element and branches on its observed state. Trees are immutable and share
// subtrees, so copies are cheap.
class PolicyTree {
 public:
  using Children = std::map<StateCode, PolicyTree>;

  PolicyTree() = default;  // Leaf.

  static PolicyTree Leaf() { return PolicyTree(); }
  static PolicyTree Node(ElementId element, Children children);
  // Sequence of elements where every state continues with the rest; the
  // last element's children are leaves. `num_states[v]` gives the branch
  // fan-out per element.
  static PolicyTree Chain(const std::vector<ElementId>& elements,
                          const std::vector<int>& num_states);

  bool is_leaf() const { return node_ == nullptr; }
  ElementId element() const;
  const Children& children() const;
  // Child for `state`, or nullptr when the branch is missing.
  const PolicyTree* child(StateCode state) const;

  int height() const;
  int node_count() const;

  // Throws kInvalidInput if an element repeats on a root-to-node path or an
  // element id is outside [0, num_elements), and kBudgetExceeded if the
  // height exceeds `max_height` (negative disables the check).
  void Validate(int num_elements, int max_height) const;

  std::string DebugString() const;

 private:
  struct NodeData {
    ElementId element;
    Children children;
    int height;
  };
  std::shared_ptr<const NodeData> node_;
};

}  // namespace adasub

#endif  // ADASUB_POLICY_TREE_H_
