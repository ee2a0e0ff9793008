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

#include <gtest/gtest.h>

#include <cmath>

#include "adasub/cases.h"
#include "adasub/infmax.h"
#include "adasub/rng.h"
#include "test_util.h"

namespace adasub {
namespace {

using testing::NearRel;
using testing::TwoCoins;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidInput;
}

TEST(ElementSetTest, BasicOperations) {
  ElementSet s = ElementSet::Of({0, 3, 5});
  EXPECT_EQ(s.size(), 3);
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.without(3).elements(), (std::vector<ElementId>{0, 5}));
  EXPECT_TRUE(ElementSet::Of({0}).IsSubsetOf(s));
  EXPECT_EQ(ElementSet::All(4).mask(), 0xfu);
  EXPECT_EQ((s & ElementSet::All(4)).elements(),
            (std::vector<ElementId>{0, 3}));
}

TEST(PartialRealizationTest, AddAndReuse) {
  PartialRealization psi{{2, 1}, {0, 0}};
  EXPECT_EQ(psi.size(), 2);
  EXPECT_EQ(psi.StateOf(2), 1);
  EXPECT_FALSE(psi.StateOf(1).has_value());
  EXPECT_EQ(psi.Dom(), ElementSet::Of({0, 2}));
  EXPECT_EQ(CodeOf([&] { psi.Add(2, 0); }), ErrorCode::kElementReuse);
  EXPECT_EQ(psi.Prefix(1).entries().size(), 1u);
  EXPECT_TRUE(psi.Prefix(1).IsSubsetOf(psi));
  EXPECT_FALSE(psi.IsSubsetOf(psi.Prefix(1)));
}

TEST(PartialRealizationTest, LargeElementIds) {
  PartialRealization psi;
  psi.Add(100, 1);
  psi.Add(3, 0);
  EXPECT_TRUE(psi.Contains(100));
  EXPECT_FALSE(psi.Contains(99));
  EXPECT_EQ(psi.StateOf(100), 1);
  EXPECT_EQ(CodeOf([&] { psi.Add(100, 0); }), ErrorCode::kElementReuse);
  EXPECT_EQ(CodeOf([&] { psi.Dom(); }), ErrorCode::kInvalidInput);
}

TEST(TabularPriorTest, Validation) {
  StateSpace space({2});
  EXPECT_EQ(CodeOf([&] { TabularPrior(space, {{{0}, 0}}, {0.5}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([&] { TabularPrior(space, {{{2}, 0}}, {1.0}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(
      CodeOf([&] { TabularPrior(space, {{{0}, 0}, {{0}, 0}}, {0.5, 0.5}); }),
      ErrorCode::kInvalidInput);
  EXPECT_NO_THROW(TabularPrior(space, {{{0}, 0}, {{0}, 1}}, {0.5, 0.5}));
}

TEST(ConditionTest, RenormalizesAndRejectsImpossible) {
  TabularInstance inst = TwoCoins();
  TabularPrior post = Condition(inst.prior, PartialRealization{{0, 1}});
  EXPECT_EQ(post.size(), 2);
  for (int i = 0; i < post.size(); ++i) EXPECT_DOUBLE_EQ(post.prob(i), 0.5);
  TabularPrior skewed(StateSpace({2, 2}), {{{0, 0}, 0}, {{1, 1}, 0}},
                      {0.5, 0.5});
  EXPECT_EQ(
      CodeOf([&] { Condition(skewed, PartialRealization{{0, 0}, {1, 1}}); }),
      ErrorCode::kInconsistentObservation);
}

TEST(GainTest, TwoCoinsByHand) {
  // f = heads + 2 [both selected and both heads].
  TabularInstance inst = TwoCoins(2.0);
  EXPECT_DOUBLE_EQ(GainElement(inst, 0, {}).value, 0.5);
  // Given coin 0 heads, adding coin 1: 1/2 + 2 * 1/2.
  EXPECT_DOUBLE_EQ(GainElement(inst, 1, PartialRealization{{0, 1}}).value, 1.5);
  EXPECT_DOUBLE_EQ(GainElement(inst, 1, PartialRealization{{0, 0}}).value, 0.5);
  EXPECT_DOUBLE_EQ(GainSet(inst, ElementSet::All(2), {}).value, 1.5);
  EXPECT_DOUBLE_EQ(GainElement(inst, 0, PartialRealization{{0, 1}}).value, 0.0);
}

TEST(GainPolicyTest, ErrorsOnReuseAndMissingBranch) {
  TabularInstance inst = TwoCoins();
  PolicyTree reuse = PolicyTree::Node(0, {{0, {}}, {1, {}}});
  EXPECT_EQ(
      CodeOf([&] { GainPolicy(inst, reuse, PartialRealization{{0, 1}}); }),
      ErrorCode::kElementReuse);
  PolicyTree missing = PolicyTree::Node(0, {{0, {}}});
  EXPECT_EQ(CodeOf([&] { GainPolicy(inst, missing, {}); }),
            ErrorCode::kMissingBranch);
  // A missing branch is fine when psi rules it out: the coins are equal.
  TabularInstance equal = TwoCoins();
  equal.prior =
      TabularPrior(StateSpace({2, 2}), {{{0, 0}, 0}, {{1, 1}, 0}}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(GainPolicy(equal, PolicyTree::Node(1, {{1, {}}}),
                              PartialRealization{{0, 1}})
                       .value,
                   1.0);
}

TEST(GainPolicyTest, ChainTelescopes) {
  // Deterministic chain: each element has one state, so the tree has a
  // single positive-probability branch and its gain is the telescoping sum.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TabularInstance inst = RandomSmallInstance(seed);
    const int n = inst.prior.num_elements();
    Rng rng(seed);
    const Realization& phi = inst.prior.realization(
        static_cast<int>(rng.UniformInt(inst.prior.size())));
    PartialRealization psi;
    PolicyTree tree;
    std::vector<ElementId> order;
    for (int v = 0; v < n; ++v) order.push_back(v);
    // Condition on the full realization of the chain's elements so every
    // step has one branch.
    PartialRealization full;
    for (int v = 0; v < n; ++v) full.Add(v, phi.states[v]);
    TabularInstance pinned{Condition(inst.prior, full), inst.objective, ""};
    for (int i = n - 1; i >= 0; --i) {
      tree = PolicyTree::Node(order[i], {{phi.states[order[i]], tree}});
    }
    double telescoped = 0.0;
    for (int v : order) {
      telescoped += GainElement(pinned, v, psi).value;
      psi.Add(v, phi.states[v]);
    }
    EXPECT_NEAR(GainPolicy(pinned, tree, {}).value, telescoped, 1e-12);
  }
}

TEST(RunPolicyTest, FollowsObservedBranches) {
  TabularInstance inst = TwoCoins();
  PolicyTree t = PolicyTree::Node(
      0,
      {{0, PolicyTree::Leaf()}, {1, PolicyTree::Node(1, {{0, {}}, {1, {}}})}});
  PolicyRun heads = RunPolicy(t, {{1, 0}, 0});
  EXPECT_EQ(heads.selected, ElementSet::Of({0, 1}));
  EXPECT_EQ(heads.trace.entries().size(), 2u);
  PolicyRun tails = RunPolicy(t, {{0, 1}, 0});
  EXPECT_EQ(tails.selected, ElementSet::Of({0}));
  // E f: 1/2 (tails: 0) + 1/2 (1 + 1/2).
  EXPECT_DOUBLE_EQ(AvgValue(inst, t).value, 0.75);
}

TEST(ConcatTest, SkipsSelectedAndFollowsObservation) {
  PolicyTree first = PolicyTree::Node(0, {{0, {}}, {1, {}}});
  PolicyTree second = PolicyTree::Node(
      0,
      {{0, PolicyTree::Node(1, {{0, {}}, {1, {}}})}, {1, PolicyTree::Leaf()}});
  PolicyTree c = Concat(first, second);
  EXPECT_EQ(c.DebugString(), "0{0:1{0:.,1:.},1:.}");
}

TEST(ConcatTest, ConcatenationNeverDecreasesValue) {
  // f_avg(pi @ pi') >= f_avg(pi') for adaptive monotone instances.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    TabularInstance inst = RandomSmallInstance(MixSeed(seed, 9));
    const int n = inst.prior.num_elements();
    std::vector<int> states = inst.prior.space().all_num_states();
    std::vector<ElementId> a = {static_cast<int>(seed % n)};
    std::vector<ElementId> b;
    for (int v = n - 1; v >= 0 && b.size() < 2; --v) b.push_back(v);
    PolicyTree pi = PolicyTree::Chain(a, states);
    PolicyTree rest = PolicyTree::Chain(b, states);
    EXPECT_GE(AvgValue(inst, Concat(pi, rest)).value,
              AvgValue(inst, rest).value - 1e-12)
        << inst.name;
  }
}

TEST(PropertyCheckTest, DetectsNonMonotoneAndNonSubmodular) {
  EXPECT_TRUE(CheckAdaptiveMonotone(TwoCoins(2.0)).holds);
  PropertyCheck sub = CheckAdaptiveSubmodular(TwoCoins(2.0));
  EXPECT_FALSE(sub.holds);
  EXPECT_GT(sub.gain_larger, sub.gain_smaller);
  EXPECT_TRUE(CheckAdaptiveSubmodular(TwoCoins(0.0)).holds);
  TabularInstance decreasing = TwoCoins();
  decreasing.objective = [](ElementSet s, const Realization&) {
    return -static_cast<double>(s.size());
  };
  PropertyCheck mono = CheckAdaptiveMonotone(decreasing);
  EXPECT_FALSE(mono.holds);
  EXPECT_GE(mono.element, 0);
}

TEST(PropertyCheckTest, IcInstancesAreAdaptiveSubmodular) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TabularInstance inst =
        ToTabular(GenRandomSmall(ModelKind::kIc, 3, 2, seed));
    EXPECT_TRUE(CheckAdaptiveMonotone(inst).holds);
    EXPECT_TRUE(CheckAdaptiveSubmodular(inst).holds);
  }
}

TEST(ValueScaleTest, LargestMagnitude) {
  EXPECT_DOUBLE_EQ(ValueScale(TwoCoins(3.0)), 5.0);
  EXPECT_DOUBLE_EQ(GainZeroTol(5.0), 5e-12);
  EXPECT_DOUBLE_EQ(GainZeroTol(0.1), 1e-12);
}

TEST(AvgValueTest, MatchesDirectExpectation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TabularInstance inst = RandomSmallInstance(seed);
    const int n = inst.prior.num_elements();
    PolicyTree all = PolicyTree::Chain(
        [&] {
          std::vector<ElementId> e;
          for (int v = 0; v < n; ++v) e.push_back(v);
          return e;
        }(),
        inst.prior.space().all_num_states());
    double direct = 0.0;
    for (int i = 0; i < inst.prior.size(); ++i) {
      direct += inst.prior.prob(i) *
                inst.objective(ElementSet::All(n), inst.prior.realization(i));
    }
    EXPECT_TRUE(NearRel(AvgValue(inst, all).value, direct));
  }
}

}  // namespace
}  // namespace adasub
