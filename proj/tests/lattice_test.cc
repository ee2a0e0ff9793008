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

#include <gtest/gtest.h>

#include "adasub/cases.h"
#include "adasub/rng.h"
#include "test_util.h"

namespace adasub {
namespace {

using testing::NearRel;
using testing::TwoCoins;

TEST(LatticeTest, RootAndBranches) {
  TabularInstance inst = TwoCoins();
  ObservationLattice lattice(inst);
  EXPECT_EQ(lattice.Depth(lattice.root()), 0);
  EXPECT_DOUBLE_EQ(lattice.Mass(lattice.root()), 1.0);
  const auto& branches = lattice.Branches(lattice.root(), 1);
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_EQ(branches[0].state, 0);
  EXPECT_EQ(branches[1].state, 1);
  EXPECT_DOUBLE_EQ(branches[0].prob, 0.5);
  EXPECT_EQ(lattice.ToPartial(branches[1].child).DebugString(), "[(1,1)]");
  EXPECT_EQ(lattice.NodesUpToDepth(2).size(), 1u + 4u + 4u);
}

TEST(LatticeTest, FindIgnoresOrderAndRejectsImpossible) {
  TabularInstance inst = TwoCoins();
  ObservationLattice lattice(inst);
  auto a = lattice.Find(PartialRealization{{0, 1}, {1, 0}});
  auto b = lattice.Find(PartialRealization{{1, 0}, {0, 1}});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
  TabularInstance equal = TwoCoins();
  equal.prior =
      TabularPrior(StateSpace({2, 2}), {{{0, 0}, 0}, {{1, 1}, 0}}, {0.5, 0.5});
  ObservationLattice eq(equal);
  EXPECT_FALSE(eq.Find(PartialRealization{{0, 0}, {1, 1}}).has_value());
}

TEST(LatticeTest, GainsMatchCoreOperators) {
  // The lattice caches posteriors by support index; core recomputes them by
  // conditioning. Both must agree on every positive-probability history.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TabularInstance inst = RandomSmallInstance(MixSeed(seed, 77));
    ObservationLattice lattice(inst);
    const int n = inst.prior.num_elements();
    for (auto node : lattice.NodesUpToDepth(n)) {
      const PartialRealization psi = lattice.ToPartial(node);
      EXPECT_TRUE(
          NearRel(lattice.Mass(node), inst.prior.Probability(psi), 1e-12));
      for (int v = 0; v < n; ++v) {
        EXPECT_TRUE(
            NearRel(lattice.Gain(node, v), GainElement(inst, v, psi).value))
            << inst.name << " " << psi.DebugString() << " v=" << v;
      }
      const ElementSet all = ElementSet::All(n);
      EXPECT_TRUE(NearRel(lattice.ExpectedValue(node, all),
                          GainSet(inst, all, psi).value +
                              lattice.ExpectedValue(node, lattice.Dom(node))));
    }
  }
}

TEST(LatticeTest, BranchProbabilitiesSumToOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TabularInstance inst = RandomSmallInstance(seed);
    ObservationLattice lattice(inst);
    const int n = inst.prior.num_elements();
    for (auto node : lattice.NodesUpToDepth(n - 1)) {
      for (int v = 0; v < n; ++v) {
        if (lattice.Dom(node).contains(v)) continue;
        double total = 0.0;
        for (const auto& b : lattice.Branches(node, v)) {
          EXPECT_GT(b.prob, 0.0);
          total += b.prob;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(LatticeTest, NodeCapFires) {
  TabularInstance inst = TwoCoins();
  ObservationLattice lattice(inst, 3);
  try {
    lattice.NodesUpToDepth(2);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

}  // namespace
}  // namespace adasub
