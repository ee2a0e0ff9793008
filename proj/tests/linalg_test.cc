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
#include "adasub/linalg.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "adasub/error.h"
#include "adasub/rng.h"

namespace adasub {
namespace {

DenseMatrix RandomMatrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = rng.Normal();
  }
  return a;
}

std::vector<double> Residual(const DenseMatrix& a, const std::vector<double>& w,
                             const std::vector<double>& b) {
  std::vector<double> r = b;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r[i] -= a(i, j) * w[j];
  }
  return r;
}

TEST(LeastSquaresTest, ExactSolveOfSquareSystem) {
  DenseMatrix a(2, 2, {2.0, 1.0, 1.0, 3.0});
  LeastSquaresResult r = LeastSquares(a, {3.0, 5.0});
  // 2x + y = 3, x + 3y = 5 -> x = 0.8, y = 1.4.
  EXPECT_NEAR(r.w[0], 0.8, 1e-12);
  EXPECT_NEAR(r.w[1], 1.4, 1e-12);
  EXPECT_NEAR(r.residual_sq, 0.0, 1e-20);
}

TEST(LeastSquaresTest, MinimalNormOnRankDeficient) {
  // Two identical columns: the minimal-norm solution splits the weight.
  DenseMatrix a = DenseMatrix::FromColumns({{1.0, 0.0}, {1.0, 0.0}});
  LeastSquaresResult r = LeastSquares(a, {2.0, 1.0});
  EXPECT_NEAR(r.w[0], 1.0, 1e-12);
  EXPECT_NEAR(r.w[1], 1.0, 1e-12);
  EXPECT_NEAR(r.residual_sq, 1.0, 1e-12);
}

TEST(LeastSquaresTest, ResidualOrthogonalToColumns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DenseMatrix a = RandomMatrix(8, 1 + seed % 6, seed);
    Rng rng(seed + 100);
    std::vector<double> b(8);
    for (double& x : b) x = rng.Normal();
    LeastSquaresResult r = LeastSquares(a, b);
    std::vector<double> res = Residual(a, r.w, b);
    const double bn = std::sqrt(Dot(b, b));
    for (int j = 0; j < a.cols(); ++j) {
      EXPECT_LE(std::fabs(Dot(a.Column(j), res)), 1e-8 * a.Norm() * bn);
    }
    EXPECT_NEAR(r.residual_sq, Dot(res, res), 1e-10);
  }
}

TEST(LeastSquaresTest, DimensionMismatch) {
  try {
    LeastSquares(DenseMatrix(3, 2), {1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(EigenTest, TwoByTwoClosedForm) {
  const double s = 1.0 / std::sqrt(2.0);
  auto [lo, hi] = SymEigenExtremes(DenseMatrix(2, 2, {1.0, s, s, 1.0}));
  EXPECT_NEAR(lo, 1.0 - s, 1e-12);
  EXPECT_NEAR(hi, 1.0 + s, 1e-12);
}

TEST(EigenTest, RayleighQuotientsAndTrace) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DenseMatrix m = Gram(RandomMatrix(6, 2 + seed % 5, seed));
    std::vector<double> ev = SymEigenvalues(m);
    ASSERT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    double trace = 0.0;
    for (int i = 0; i < m.rows(); ++i) trace += m(i, i);
    EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), trace,
                1e-8 * std::fabs(trace));
    Rng rng(seed + 7);
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> x(m.rows());
      for (double& v : x) v = rng.Normal();
      const double nx = Dot(x, x);
      double q = 0.0;
      for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) q += x[i] * m(i, j) * x[j];
      }
      q /= nx;
      EXPECT_GE(q, ev.front() - 1e-8);
      EXPECT_LE(q, ev.back() + 1e-8);
    }
  }
}

TEST(EigenTest, RejectsAsymmetric) {
  try {
    SymEigenvalues(DenseMatrix(2, 2, {1.0, 2.0, 0.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSymmetric);
  }
}

TEST(DenseMatrixTest, ColumnsAndIdentity) {
  DenseMatrix a = DenseMatrix::FromColumns({{1.0, 2.0}, {3.0, 4.0}});
  EXPECT_EQ(a(1, 0), 2.0);
  EXPECT_EQ(a.Column(1), (std::vector<double>{3.0, 4.0}));
  EXPECT_EQ(SymEigenvalues(DenseMatrix::Identity(3)),
            (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_NEAR(a.Norm(), std::sqrt(30.0), 1e-15);
}

}  // namespace
}  // namespace adasub
