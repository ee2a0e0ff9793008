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
#include "adasub/infmax.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "adasub/lattice.h"
#include "adasub/rng.h"
#include "test_util.h"

namespace adasub {
namespace {

using testing::DataPath;
using testing::NearRel;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidInput;
}

TEST(EdgeListTest, ParsesFixture) {
  EdgeList list = LoadEdgeList(DataPath("two_sources.txt"));
  EXPECT_EQ(list.graph.n_src(), 2);
  EXPECT_EQ(list.graph.n_sink(), 1);
  EXPECT_EQ(list.graph.n_edges(), 2);
  EXPECT_EQ(list.params, (std::vector<double>{0.5, 0.5}));
  InfluenceInstance lt = MakeInstance(list, ModelKind::kLt, 1);
  // Sink reached with probability 1/2 through either source.
  EXPECT_DOUBLE_EQ(ExpectedSpreadNonAdaptive(lt, {0}), 0.5);
  EXPECT_DOUBLE_EQ(ExpectedSpreadNonAdaptive(lt, {0, 1}), 1.0);
  InfluenceInstance ic = MakeInstance(list, ModelKind::kIc, 1);
  EXPECT_DOUBLE_EQ(ExpectedSpreadNonAdaptive(ic, {0, 1}), 0.75);
}

TEST(EdgeListTest, Errors) {
  try {
    ParseEdgeList("u 0 1.0\ne 0 x 0.5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([] { ParseEdgeList("e 0 0 0.5\ne 0 0 0.5\n"); }),
            ErrorCode::kDuplicateEdge);
  EXPECT_EQ(CodeOf([] { ParseEdgeList("z 1 2\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { LoadEdgeList("/nonexistent/graph.txt"); }),
            ErrorCode::kIoError);
  EXPECT_NO_THROW(ParseEdgeList("# comment only\n\n"));
}

TEST(DegreeBaselineTest, OrdersByOutDegree) {
  EdgeList list = LoadEdgeList(DataPath("degrees.txt"));
  EXPECT_EQ(DegreeBaseline(list.graph, 3), (std::vector<int>{0, 2, 1}));
  EXPECT_EQ(DegreeBaseline(list.graph, 1), (std::vector<int>{0}));
}

TEST(SpreadTest, CountsSinkWeights) {
  EdgeList list = LoadEdgeList(DataPath("degrees.txt"));
  const BipartiteGraph& g = list.graph;
  std::vector<char> alive(g.n_edges(), 1);
  EXPECT_DOUBLE_EQ(Spread(g, {0}, alive), 3.5);
  EXPECT_DOUBLE_EQ(Spread(g, {1}, alive), 1.0);
  alive.assign(g.n_edges(), 0);
  EXPECT_DOUBLE_EQ(Spread(g, {0, 1, 2}, alive), 0.0);
}

TEST(AdaptiveGainTest, MatchesTabularOnEveryHistory) {
  // Closed-form posteriors against conditioning the joint support.
  const ModelKind kinds[] = {ModelKind::kIc, ModelKind::kLt,
                             ModelKind::kExtendedLt, ModelKind::kTriggering};
  for (ModelKind kind : kinds) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      InfluenceInstance inst = GenRandomSmall(kind, 3, 3, seed, 0.7);
      TabularInstance tab = ToTabular(inst);
      ObservationLattice lattice(tab);
      for (auto node : lattice.NodesUpToDepth(3)) {
        const PartialRealization psi = lattice.ToPartial(node);
        for (int v = 0; v < 3; ++v) {
          EXPECT_TRUE(NearRel(AdaptiveGain(inst, v, psi).value,
                              lattice.Gain(node, v), 1e-9))
              << ModelKindName(kind) << " seed " << seed << " "
              << psi.DebugString() << " v=" << v;
        }
      }
      for (std::uint64_t mask = 0; mask < 8; ++mask) {
        std::vector<int> s;
        for (int v = 0; v < 3; ++v) {
          if (mask >> v & 1) s.push_back(v);
        }
        EXPECT_TRUE(
            NearRel(ExpectedSpreadNonAdaptive(inst, s),
                    lattice.ExpectedValue(lattice.root(), ElementSet(mask))));
      }
    }
  }
}

TEST(SinkOutcomesTest, ExtendedLtMatchesSampling) {
  InfluenceInstance inst = GenRandomSmall(ModelKind::kExtendedLt, 3, 1, 4, 1.0);
  inst.model = ExtendedLtModel{3};
  const int deg = inst.graph.in_degree(0);
  ASSERT_EQ(deg, 3);
  std::map<std::uint64_t, double> exact;
  double total = 0.0;
  for (const SinkOutcome& o : SinkOutcomes(inst, 0)) {
    exact[o.mask] = o.prob;
    total += o.prob;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Independent oracle: draw t in-edges with replacement.
  Rng rng(8);
  std::map<std::uint64_t, int> counts;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t mask = 0;
    for (int j = 0; j < 3; ++j) mask |= std::uint64_t{1} << rng.UniformInt(deg);
    ++counts[mask];
  }
  for (const auto& [mask, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / n, exact[mask], 5e-3) << mask;
  }
}

TEST(SampleEdgeRealizationTest, IcFrequencies) {
  EdgeList list = LoadEdgeList(DataPath("degrees.txt"));
  InfluenceInstance inst = MakeInstance(list, ModelKind::kIc, 1);
  Rng rng(12);
  std::vector<int> alive(list.graph.n_edges(), 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    std::vector<char> a = SampleEdgeRealization(inst, rng);
    for (int e = 0; e < list.graph.n_edges(); ++e) alive[e] += a[e];
  }
  for (int e = 0; e < list.graph.n_edges(); ++e) {
    EXPECT_NEAR(static_cast<double>(alive[e]) / n, list.params[e], 0.01);
  }
}

TEST(InfluenceSessionTest, GainsMatchClosedForm) {
  InfluenceInstance inst = GenErdosRenyi(30, 30, 0.1, ModelKind::kLt, 1, 3, 4);
  Rng rng(5);
  std::vector<char> alive = SampleEdgeRealization(inst, rng);
  InfluenceSession session(inst, alive);
  for (int step = 0; step < 5; ++step) {
    for (int v = 0; v < 30; ++v) {
      EXPECT_TRUE(NearRel(session.Gain(v).value,
                          AdaptiveGain(inst, v, session.observations()).value));
    }
    session.Select(step * 3);
  }
}

TEST(GeneratorTest, ErdosRenyiDeterministicAndParameters) {
  InfluenceInstance a = GenErdosRenyi(50, 40, 0.05, ModelKind::kIc, 1, 9, 10);
  InfluenceInstance b = GenErdosRenyi(50, 40, 0.05, ModelKind::kIc, 1, 9, 10);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.graph.weights(), b.graph.weights());
  const auto& q = std::get<IcModel>(a.model).q;
  for (int e = 0; e < a.graph.n_edges(); ++e) {
    EXPECT_DOUBLE_EQ(q[e], 1.0 / a.graph.in_degree(a.graph.edge(e).sink));
  }
  // Expected edge count 100 with standard deviation below 10.
  EXPECT_NEAR(a.graph.n_edges(), 100, 40);
}

TEST(GeneratorTest, StarIsLinearThreshold) {
  InfluenceInstance star = GenStar(3);
  EXPECT_EQ(star.kind(), ModelKind::kLt);
  EXPECT_EQ(star.graph.n_src(), 3);
  for (double b : std::get<LtModel>(star.model).b) EXPECT_DOUBLE_EQ(b, 1.0 / 3);
  EXPECT_DOUBLE_EQ(
      AdaptiveGain(star, 2, PartialRealization{{0, 0}, {1, 0}}).value, 1.0);
}

TEST(IcGapLowerBoundTest, Formula) {
  EXPECT_DOUBLE_EQ(IcGapLowerBound(0.5, 3, 2), 0.5);
  EXPECT_DOUBLE_EQ(IcGapLowerBound(0.5, 2, 5), 0.5);
  EXPECT_DOUBLE_EQ(IcGapLowerBound(0.2, 1, 4), 1.0);
}

TEST(ValidateTest, RejectsBadParameters) {
  EdgeList list = LoadEdgeList(DataPath("two_sources.txt"));
  InfluenceInstance inst = MakeInstance(list, ModelKind::kLt, 1);
  inst.model = LtModel{{0.7, 0.7}};
  EXPECT_EQ(CodeOf([&] { inst.Validate(); }), ErrorCode::kInvalidParams);
  inst.model = IcModel{{0.5}};
  EXPECT_EQ(CodeOf([&] { inst.Validate(); }), ErrorCode::kInvalidParams);
}

TEST(ModelKindTest, Names) {
  EXPECT_EQ(ModelKindName(ModelKind::kExtendedLt), "elt");
  EXPECT_EQ(ModelKindName(ModelKind::kTriggering), "triggering");
}

}  // namespace
}  // namespace adasub
