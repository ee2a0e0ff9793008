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

#include "adasub/policy_tree.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "adasub/error.h"

namespace adasub {

PolicyTree PolicyTree::Node(ElementId element, Children children) {
  if (element < 0) throw Error(ErrorCode::kInvalidInput, "negative element");
  int h = 0;
  for (const auto& [state, child] : children) h = std::max(h, child.height());
  PolicyTree t;
  t.node_ = std::make_shared<const NodeData>(
      NodeData{element, std::move(children), h + 1});
  return t;
}

PolicyTree PolicyTree::Chain(const std::vector<ElementId>& elements,
                             const std::vector<int>& num_states) {
  PolicyTree tail;
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    Children children;
    for (int s = 0; s < num_states.at(*it); ++s) children.emplace(s, tail);
    tail = Node(*it, std::move(children));
  }
  return tail;
}

ElementId PolicyTree::element() const {
  if (is_leaf()) throw Error(ErrorCode::kInvalidInput, "leaf has no element");
  return node_->element;
}

const PolicyTree::Children& PolicyTree::children() const {
  static const Children kEmpty;
  return is_leaf() ? kEmpty : node_->children;
}

const PolicyTree* PolicyTree::child(StateCode state) const {
  if (is_leaf()) return nullptr;
  auto it = node_->children.find(state);
  return it == node_->children.end() ? nullptr : &it->second;
}

int PolicyTree::height() const { return is_leaf() ? 0 : node_->height; }

int PolicyTree::node_count() const {
  if (is_leaf()) return 0;
  int n = 1;
  for (const auto& [state, child] : node_->children) n += child.node_count();
  return n;
}

namespace {

void ValidatePath(const PolicyTree& t, int num_elements,
                  std::vector<bool>& on_path) {
  if (t.is_leaf()) return;
  const ElementId v = t.element();
  if (v >= num_elements) {
    throw Error(ErrorCode::kInvalidInput,
                "policy element " + std::to_string(v) + " out of range");
  }
  if (on_path[v]) {
    throw Error(ErrorCode::kInvalidInput,
                "element " + std::to_string(v) + " repeats on a path");
  }
  on_path[v] = true;
  for (const auto& [state, child] : t.children()) {
    ValidatePath(child, num_elements, on_path);
  }
  on_path[v] = false;
}

}  // namespace

void PolicyTree::Validate(int num_elements, int max_height) const {
  std::vector<bool> on_path(num_elements, false);
  ValidatePath(*this, num_elements, on_path);
  if (max_height >= 0 && height() > max_height) {
    throw Error(ErrorCode::kBudgetExceeded,
                "policy height " + std::to_string(height()) + " exceeds " +
                    std::to_string(max_height));
  }
}

std::string PolicyTree::DebugString() const {
  if (is_leaf()) return ".";
  std::string s = std::to_string(node_->element) + "{";
  bool first = true;
  for (const auto& [state, child] : node_->children) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(state) + ":" + child.DebugString();
  }
  return s + "}";
}

}  // namespace adasub
