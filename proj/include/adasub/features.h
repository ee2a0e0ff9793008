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

#ifndef ADASUB_FEATURES_H_
#define ADASUB_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adasub/core.h"
#include "adasub/linalg.h"
#include "adasub/policies.h"

namespace adasub {

using Column = std::vector<double>;

struct ColumnPoint {
  Column column;
  double prob;
};

// Independent finite distribution per feature column.
struct FiniteColumnPrior {
  std::vector<std::vector<ColumnPoint>> per_feature;
};

// Column v is mean.Column(v) plus independent uniform noise on
// [-sigma, sigma] in every entry.
struct SamplerColumnPrior {
  DenseMatrix mean;  // m x n
  double sigma = 0.0;
};

using ColumnPrior = std::variant<FiniteColumnPrior, SamplerColumnPrior>;

struct FeatureInstance {
  int n = 0;
  int m = 0;
  std::vector<double> response;
  ColumnPrior prior;
  // Ground truth, when known: support, coefficients and the hidden draw of
  // the columns (m x n) that generated the response.
  std::vector<int> true_support;
  std::vector<double> coefficients;
  DenseMatrix hidden;
  std::uint64_t seed = 0;

  // Throws kDimensionMismatch or kInvalidParams.
  void Validate() const;
  bool is_finite() const {
    return std::holds_alternative<FiniteColumnPrior>(prior);
  }
  // E[column v].
  Column MeanColumn(int v) const;
  // Matrix of expected columns.
  DenseMatrix MeanMatrix() const;
};

// ||b||^2 - min_w ||b - A_S w||^2 for the given columns of A_S, clamped at 0.
double R2Value(const std::vector<Column>& columns,
               const std::vector<double>& response);

// Incremental Gram-Schmidt projector onto the span of added columns. Gain(c)
// is the decrease of the squared residual from adding c.
class ResidualProjector {
 public:
  explicit ResidualProjector(std::vector<double> response);
  double Gain(const Column& c) const;
  void Add(const Column& c);
  // ||b||^2 - ||r||^2.
  double Value() const;
  const std::vector<double>& residual() const { return residual_; }
  const std::vector<Column>& basis() const { return basis_; }

 private:
  double norm_b_sq_;
  std::vector<double> residual_;
  std::vector<Column> basis_;
};

// Uniform noise on [-1, 1]^m for sample `index` of stream `stream_seed`.
// Shared by every candidate feature (common random numbers).
std::vector<double> NoiseVector(std::uint64_t stream_seed, std::uint64_t index,
                                int m);

// Delta(v | observed columns). Exact over the support for finite priors;
// otherwise the mean over `n_samples` draws of column v with noise from
// NoiseVector(seed, j). With sigma = 0 the mean column is used exactly.
ExpectedGain AdaptiveGainMc(const FeatureInstance& inst, int v,
                            const std::vector<std::pair<int, Column>>& observed,
                            int n_samples, std::uint64_t seed);

// Adaptive greedy oracle. Selecting v reveals column v of `truth` (m x n).
// Step s estimates gains with stream seed MixSeed(seed, s).
class FeatureSession : public GreedyOracle {
 public:
  FeatureSession(const FeatureInstance& inst, DenseMatrix truth, int n_samples,
                 std::uint64_t seed);
  int num_elements() const override { return inst_.n; }
  ExpectedGain Gain(ElementId v) override;
  StateCode Select(ElementId v) override;

 private:
  void PrepareStep();

  const FeatureInstance& inst_;
  DenseMatrix truth_;
  int n_samples_;
  std::uint64_t seed_;
  int step_ = 0;
  bool prepared_ = false;
  std::vector<bool> selected_;
  std::vector<std::pair<int, Column>> observed_;
  ResidualProjector projector_;
  // Per-step noise statistics for the sampler path.
  std::vector<std::vector<double>> noise_, noise_proj_;
  std::vector<double> noise_r_, noise_sq_;
};

// Non-adaptive greedy on E[f(S, Phi)], estimated with n_samples joint draws
// of the whole matrix (exact enumeration for finite priors is not attempted;
// finite priors are sampled too). With sigma = 0 this is the noise-oblivious
// greedy.
std::vector<int> NonAdaptiveGreedyMc(const FeatureInstance& inst, int budget,
                                     int n_samples, std::uint64_t seed);

// Greedy on f(., E[A(Phi)]).
std::vector<int> NoiseObliviousGreedy(const FeatureInstance& inst, int budget);

struct EigenBounds {
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  int ell = 0;
  // Some column norm differs from 1 by more than 1e-6.
  bool not_normalized = false;
};

// Extreme eigenvalues of A(phi)_S^T A(phi)_S over every realization in the
// joint support and every S with 1 <= |S| <= ell. With `normalize`, columns
// are scaled to unit norm first. Finite priors only.
EigenBounds EigenBoundsBruteForce(const FeatureInstance& inst, int ell,
                                  bool normalize = false,
                                  std::int64_t cap = 2'000'000);

// lambda_min over subsets of size <= k + ell.
double RatioLowerBound(const FeatureInstance& inst, int ell, int k,
                       bool normalize = false);
// lambda_min,k / lambda_max,k.
double GapLowerBound(const FeatureInstance& inst, int k,
                     bool normalize = false);

// Mean matrix uniform on [0,1] with columns standardized (population
// statistics), sampler noise sigma, hidden draw phi*, random support of the
// given size, standard normal coefficients and response A(phi*)_{S*} w.
FeatureInstance GenSynthetic(int n, int m, int sparsity, double sigma,
                             std::uint64_t seed);

// Random finite-support instance with `support` Gaussian points per
// feature (unit norm when `normalize`) and a Gaussian response.
FeatureInstance GenRandomFinite(int n, int m, int support, bool normalize,
                                std::uint64_t seed);

// Tabular form of a finite-support instance: element states index the
// support points.
TabularInstance ToTabular(const FeatureInstance& inst,
                          std::int64_t cap = 1'000'000);

// Text serialization (format documented in the README).
void WriteInstance(const FeatureInstance& inst, std::ostream& out);
FeatureInstance ReadInstance(std::istream& in);

}  // namespace adasub

#endif  // ADASUB_FEATURES_H_
