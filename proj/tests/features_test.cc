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
#include "adasub/features.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "adasub/cases.h"
#include "adasub/lattice.h"
#include "adasub/rng.h"
#include "test_util.h"

namespace adasub {
namespace {

using testing::NearRel;

std::vector<Column> RandomColumns(int count, int m, Rng& rng) {
  std::vector<Column> cols(count, Column(m));
  for (Column& c : cols) {
    for (double& x : c) x = rng.Normal();
  }
  return cols;
}

TEST(R2ValueTest, ByHand) {
  EXPECT_DOUBLE_EQ(R2Value({{1.0, 0.0}}, {3.0, 4.0}), 9.0);
  EXPECT_DOUBLE_EQ(R2Value({}, {3.0, 4.0}), 0.0);
  EXPECT_NEAR(R2Value({{1.0, 0.0}, {1.0, 1.0}}, {3.0, 4.0}), 25.0, 1e-12);
}

TEST(ResidualProjectorTest, AgreesWithLeastSquares) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 5;
    std::vector<double> b = RandomColumns(1, m, rng)[0];
    std::vector<Column> cols = RandomColumns(m + 1, m, rng);
    ResidualProjector proj(b);
    std::vector<Column> used;
    for (const Column& c : cols) {
      std::vector<Column> next = used;
      next.push_back(c);
      const double gain = R2Value(next, b) - R2Value(used, b);
      EXPECT_NEAR(proj.Gain(c), gain, 1e-9 * Dot(b, b));
      proj.Add(c);
      used = next;
      EXPECT_NEAR(proj.Value(), R2Value(used, b), 1e-9 * Dot(b, b));
    }
  }
}

TEST(ResidualProjectorTest, DependentColumnHasZeroGain) {
  ResidualProjector proj({1.0, 2.0, 3.0});
  proj.Add({1.0, 0.0, 0.0});
  proj.Add({0.0, 1.0, 0.0});
  EXPECT_NEAR(proj.Gain({2.0, -1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(proj.Gain({0.0, 0.0, 1.0}), 9.0, 1e-12);
}

TEST(AdaptiveGainMcTest, FiniteMatchesTabular) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FeatureInstance inst = GenRandomFinite(3, 4, 2, seed % 2 == 0, seed);
    TabularInstance tab = ToTabular(inst);
    ObservationLattice lattice(tab);
    const auto& points = std::get<FiniteColumnPrior>(inst.prior).per_feature;
    for (auto node : lattice.NodesUpToDepth(3)) {
      const PartialRealization psi = lattice.ToPartial(node);
      std::vector<std::pair<int, Column>> observed;
      for (const Observation& o : psi.entries()) {
        observed.push_back({o.element, points[o.element][o.state].column});
      }
      for (int v = 0; v < 3; ++v) {
        const ExpectedGain g = AdaptiveGainMc(inst, v, observed, 1, 0);
        EXPECT_EQ(g.sample_count, 0);
        EXPECT_TRUE(NearRel(g.value, lattice.Gain(node, v)));
      }
    }
  }
}

TEST(AdaptiveGainMcTest, SamplerConsistentAcrossSeeds) {
  FeatureInstance inst = GenSynthetic(10, 8, 3, 0.3, 17);
  const ExpectedGain a = AdaptiveGainMc(inst, 2, {}, 4000, 1);
  const ExpectedGain b = AdaptiveGainMc(inst, 2, {}, 4000, 2);
  EXPECT_EQ(a.sample_count, 4000);
  EXPECT_GT(a.std_error, 0.0);
  EXPECT_LE(std::fabs(a.value - b.value),
            4.0 * std::hypot(a.std_error, b.std_error));
  // sigma = 0 is exact.
  FeatureInstance exact = GenSynthetic(10, 8, 3, 0.0, 17);
  const ExpectedGain e = AdaptiveGainMc(exact, 2, {}, 10, 1);
  EXPECT_EQ(e.sample_count, 0);
  ResidualProjector proj(exact.response);
  EXPECT_TRUE(NearRel(e.value, proj.Gain(exact.MeanColumn(2))));
}

TEST(AdaptiveGainMcTest, DoublingSamplesStaysWithinThreeStandardErrors) {
  FeatureInstance inst = GenSynthetic(6, 8, 2, 0.5, 31);
  int within = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const ExpectedGain small =
        AdaptiveGainMc(inst, 1, {}, 1 << 10, MixSeed(trial, 0));
    const ExpectedGain large =
        AdaptiveGainMc(inst, 1, {}, 1 << 14, MixSeed(trial, 1));
    const double se = std::hypot(small.std_error, large.std_error);
    within += std::fabs(small.value - large.value) < 3.0 * se;
  }
  EXPECT_GE(within, 95);
}

TEST(FeatureSessionTest, FastPathMatchesDirectEstimate) {
  FeatureInstance inst = GenSynthetic(12, 10, 3, 0.2, 5);
  FeatureSession session(inst, inst.hidden, 64, 99);
  std::vector<std::pair<int, Column>> observed;
  for (int step = 0; step < 4; ++step) {
    for (int v = 0; v < inst.n; ++v) {
      bool taken = false;
      for (const auto& [u, c] : observed) taken |= u == v;
      if (taken) continue;
      const double direct =
          AdaptiveGainMc(inst, v, observed, 64, MixSeed(99, step)).value;
      EXPECT_TRUE(NearRel(session.Gain(v).value, direct, 1e-8))
          << "step " << step << " v " << v;
    }
    const int pick = step * 2 + 1;
    session.Select(pick);
    observed.push_back({pick, inst.hidden.Column(pick)});
  }
}

TEST(GreedyTest, ZeroNoiseVariantsCoincide) {
  FeatureInstance inst = GenSynthetic(30, 12, 4, 0.0, 8);
  const std::vector<int> oblivious = NoiseObliviousGreedy(inst, 6);
  EXPECT_EQ(NonAdaptiveGreedyMc(inst, 6, 50, 3), oblivious);
  FeatureSession session(inst, inst.hidden, 50, 3);
  EXPECT_EQ(RunGreedy(session, 6).selected, oblivious);
}

TEST(GreedyTest, NoiseObliviousIsGreedyOnMeanMatrix) {
  FeatureInstance inst = GenSynthetic(15, 10, 3, 0.3, 21);
  const DenseMatrix mean = inst.MeanMatrix();
  SetFunction g = [&](const std::vector<ElementId>& s) {
    std::vector<Column> cols;
    for (int v : s) cols.push_back(mean.Column(v));
    return R2Value(cols, inst.response);
  };
  EXPECT_EQ(NoiseObliviousGreedy(inst, 5), NonAdaptiveGreedy(g, 15, 5));
}

TEST(GenSyntheticTest, DeterministicAndStandardized) {
  FeatureInstance a = GenSynthetic(20, 15, 5, 0.1, 3);
  FeatureInstance b = GenSynthetic(20, 15, 5, 0.1, 3);
  EXPECT_EQ(a.response, b.response);
  EXPECT_EQ(a.true_support, b.true_support);
  EXPECT_EQ(a.true_support.size(), 5u);
  const DenseMatrix mean = a.MeanMatrix();
  for (int v = 0; v < 20; ++v) {
    Column c = mean.Column(v);
    double mu = 0.0, sq = 0.0;
    for (double x : c) mu += x;
    mu /= 15;
    for (double x : c) sq += (x - mu) * (x - mu);
    EXPECT_NEAR(mu, 0.0, 1e-12);
    EXPECT_NEAR(sq / 15, 1.0, 1e-12);
  }
  for (int i = 0; i < 15; ++i) {
    for (int v = 0; v < 20; ++v) {
      EXPECT_LE(std::fabs(a.hidden(i, v) - mean(i, v)), 0.1 + 1e-15);
    }
  }
}

TEST(EigenBoundsTest, F4Instance) {
  FeatureInstance inst = BuildCorrelatedPairInstance(4, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  EigenBounds eb = EigenBoundsBruteForce(inst, 2);
  EXPECT_NEAR(eb.lambda_min, 1.0 - s, 1e-12);
  EXPECT_NEAR(eb.lambda_max, 1.0 + s, 1e-12);
  EXPECT_FALSE(eb.not_normalized);
  EXPECT_NEAR(GapLowerBound(inst, 4), (1.0 - s) / (1.0 + s), 1e-12);
  EXPECT_NEAR(RatioLowerBound(inst, 0, 1), 1.0, 1e-12);
}

TEST(EigenBoundsTest, FlagsUnnormalizedColumns) {
  FeatureInstance inst = GenRandomFinite(3, 4, 2, false, 1);
  EXPECT_TRUE(EigenBoundsBruteForce(inst, 2).not_normalized);
  // Singletons of unit columns have eigenvalue 1.
  const EigenBounds unit = EigenBoundsBruteForce(inst, 2, true);
  EXPECT_LE(unit.lambda_min, 1.0 + 1e-12);
  EXPECT_GE(unit.lambda_max, 1.0 - 1e-12);
}

TEST(SerializationTest, RoundTrip) {
  for (const FeatureInstance& inst :
       {GenSynthetic(6, 4, 2, 0.25, 5), GenRandomFinite(3, 4, 2, true, 6)}) {
    std::stringstream io;
    WriteInstance(inst, io);
    FeatureInstance back = ReadInstance(io);
    EXPECT_EQ(back.n, inst.n);
    EXPECT_EQ(back.m, inst.m);
    EXPECT_EQ(back.response, inst.response);
    EXPECT_EQ(back.true_support, inst.true_support);
    EXPECT_EQ(back.is_finite(), inst.is_finite());
    EXPECT_EQ(back.MeanMatrix().data(), inst.MeanMatrix().data());
    EXPECT_EQ(back.hidden.data(), inst.hidden.data());
  }
}

TEST(SerializationTest, RejectsGarbage) {
  std::stringstream io("not an instance\n");
  EXPECT_THROW(ReadInstance(io), Error);
}

TEST(NoiseVectorTest, SharedAndBounded) {
  EXPECT_EQ(NoiseVector(1, 2, 5), NoiseVector(1, 2, 5));
  EXPECT_NE(NoiseVector(1, 2, 5), NoiseVector(1, 3, 5));
  for (double x : NoiseVector(3, 4, 100)) {
    EXPECT_GE(x, -1.0);
    EXPECT_LE(x, 1.0);
  }
}

}  // namespace
}  // namespace adasub
