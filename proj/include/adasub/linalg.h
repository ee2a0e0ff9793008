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

#ifndef ADASUB_LINALG_H_
#define ADASUB_LINALG_H_

#include <utility>
#include <vector>

namespace adasub {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);
  DenseMatrix(int rows, int cols, std::vector<double> data);
  static DenseMatrix Identity(int n);
  // Matrix whose j-th column is columns[j]; all columns must share a length.
  static DenseMatrix FromColumns(const std::vector<std::vector<double>>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[i * cols_ + j]; }
  double operator()(int i, int j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double> Column(int j) const;
  // Frobenius norm.
  double Norm() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Relative singular value cutoff below which directions count as null.
inline constexpr double kRankCutoff = 1e-10;

struct LeastSquaresResult {
  std::vector<double> w;
  double residual_sq = 0.0;
};

// Minimal-norm minimizer of ||b - A w||^2 by one-sided Jacobi SVD. Throws
// kDimensionMismatch when rows(A) != |b|.
LeastSquaresResult LeastSquares(const DenseMatrix& a,
                                const std::vector<double>& b);

// A^T A with the upper triangle copied from the lower, so the result is
// exactly symmetric.
DenseMatrix Gram(const DenseMatrix& a);

// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
// rotations (at most 64 sweeps; stops once the off-diagonal norm is below
// 1e-12 ||M||). Throws kNotSymmetric (asymmetry above 1e-10) or
// kNoConvergence.
std::vector<double> SymEigenvalues(const DenseMatrix& m);

// (lambda_min, lambda_max).
std::pair<double, double> SymEigenExtremes(const DenseMatrix& m);

double Dot(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace adasub

#endif  // ADASUB_LINALG_H_
