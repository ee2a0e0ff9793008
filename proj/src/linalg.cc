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

#include <algorithm>
#include <cmath>
#include <string>

#include "adasub/error.h"

namespace adasub {

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows),
      cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorCode::kInvalidInput, "negative matrix dimension");
  }
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0 ||
      data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix data size mismatch");
  }
}

DenseMatrix DenseMatrix::Identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::FromColumns(
    const std::vector<std::vector<double>>& cols) {
  if (cols.empty()) return DenseMatrix();
  const int rows = static_cast<int>(cols[0].size());
  DenseMatrix m(rows, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) {
      throw Error(ErrorCode::kDimensionMismatch, "column length mismatch");
    }
    for (int i = 0; i < rows; ++i) m(i, static_cast<int>(j)) = cols[j][i];
  }
  return m;
}

std::vector<double> DenseMatrix::Column(int j) const {
  std::vector<double> c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

double DenseMatrix::Norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Dot(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "dot of unequal lengths");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

LeastSquaresResult LeastSquares(const DenseMatrix& a,
                                const std::vector<double>& b) {
  const int m = a.rows();
  const int n = a.cols();
  if (static_cast<int>(b.size()) != m) {
    throw Error(ErrorCode::kDimensionMismatch, "A has " + std::to_string(m) +
                                                   " rows, b has " +
                                                   std::to_string(b.size()));
  }
  LeastSquaresResult out;
  out.w.assign(n, 0.0);
  out.residual_sq = Dot(b, b);
  if (n == 0 || m == 0) return out;

  // One-sided Jacobi: rotate column pairs of U = A V until orthogonal.
  // Columns stored contiguously for locality.
  std::vector<std::vector<double>> u(n), v(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    u[j] = a.Column(j);
    v[j][j] = 1.0;
  }
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double alpha = Dot(u[p], u[p]);
        const double beta = Dot(u[q], u[q]);
        const double gamma = Dot(u[p], u[q]);
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) ||
            gamma == 0.0) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < m; ++i) {
          const double x = u[p][i], y = u[q][i];
          u[p][i] = c * x - s * y;
          u[q][i] = s * x + c * y;
        }
        for (int i = 0; i < n; ++i) {
          const double x = v[p][i], y = v[q][i];
          v[p][i] = c * x - s * y;
          v[q][i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  // A = U_hat diag(sigma) V^T with sigma_j = ||u_j||; w = V diag(1/sigma)
  // U_hat^T b over the retained directions.
  std::vector<double> sigma(n);
  double sigma_max = 0.0;
  for (int j = 0; j < n; ++j) {
    sigma[j] = std::sqrt(Dot(u[j], u[j]));
    sigma_max = std::max(sigma_max, sigma[j]);
  }
  for (int j = 0; j < n; ++j) {
    if (sigma[j] <= kRankCutoff * sigma_max || sigma[j] == 0.0) continue;
    const double coef = Dot(u[j], b) / (sigma[j] * sigma[j]);
    for (int i = 0; i < n; ++i) out.w[i] += coef * v[j][i];
  }
  double rs = 0.0;
  for (int i = 0; i < m; ++i) {
    double r = b[i];
    for (int j = 0; j < n; ++j) r -= a(i, j) * out.w[j];
    rs += r * r;
  }
  out.residual_sq = rs;
  return out;
}

DenseMatrix Gram(const DenseMatrix& a) {
  const int n = a.cols();
  DenseMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

std::vector<double> SymEigenvalues(const DenseMatrix& m) {
  const int n = m.rows();
  if (m.cols() != n) throw Error(ErrorCode::kDimensionMismatch, "not square");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-10) {
        throw Error(ErrorCode::kNotSymmetric, "asymmetry at (" +
                                                  std::to_string(i) + "," +
                                                  std::to_string(j) + ")");
      }
    }
  }
  DenseMatrix a = m;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }
  const double norm = a.Norm();
  auto off = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };
  bool converged = off() <= 1e-12 * norm;
  for (int sweep = 0; sweep < 64 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double x = a(r, p), y = a(r, q);
          a(r, p) = c * x - s * y;
          a(r, q) = s * x + c * y;
        }
        for (int r = 0; r < n; ++r) {
          const double x = a(p, r), y = a(q, r);
          a(p, r) = c * x - s * y;
          a(q, r) = s * x + c * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    converged = off() <= 1e-12 * norm;
  }
  if (!converged) {
    throw Error(ErrorCode::kNoConvergence, "Jacobi did not converge");
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::pair<double, double> SymEigenExtremes(const DenseMatrix& m) {
  if (m.rows() == 0) throw Error(ErrorCode::kInvalidInput, "empty matrix");
  const std::vector<double> e = SymEigenvalues(m);
  return {e.front(), e.back()};
}

}  // namespace adasub
