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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>

#include "adasub/rng.h"

namespace adasub {

namespace {

// Squared relative norm below which a column counts as inside the span.
constexpr double kSpanTol = kRankCutoff * kRankCutoff;
// Same decision when the orthogonal part is formed by subtraction of norms.
constexpr double kSpanTolFast = 1e-12;

double SqNorm(const std::vector<double>& x) { return Dot(x, x); }

void Orthogonalize(const std::vector<Column>& basis, Column& c) {
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (const Column& q : basis) {
      const double t = Dot(q, c);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= t * q[i];
    }
  }
}

}  // namespace

void FeatureInstance::Validate() const {
  if (m < 1 || n < 0) throw Error(ErrorCode::kInvalidParams, "need m >= 1");
  if (static_cast<int>(response.size()) != m) {
    throw Error(ErrorCode::kDimensionMismatch, "response length != m");
  }
  for (double x : response) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidParams, "non-finite response");
    }
  }
  if (const auto* f = std::get_if<FiniteColumnPrior>(&prior)) {
    if (static_cast<int>(f->per_feature.size()) != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "one distribution per feature");
    }
    for (const auto& points : f->per_feature) {
      if (points.empty()) {
        throw Error(ErrorCode::kInvalidParams, "empty column support");
      }
      double sum = 0.0;
      for (const ColumnPoint& p : points) {
        if (static_cast<int>(p.column.size()) != m) {
          throw Error(ErrorCode::kDimensionMismatch, "column length != m");
        }
        if (!(p.prob >= 0.0)) {
          throw Error(ErrorCode::kInvalidParams, "negative probability");
        }
        sum += p.prob;
      }
      if (std::abs(sum - 1.0) > kProbTol) {
        throw Error(ErrorCode::kInvalidParams,
                    "column support sums to " + std::to_string(sum));
      }
    }
  } else {
    const auto& s = std::get<SamplerColumnPrior>(prior);
    if (s.mean.rows() != m || s.mean.cols() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "mean matrix must be m x n");
    }
    if (!(s.sigma >= 0.0)) {
      throw Error(ErrorCode::kInvalidParams, "sigma must be >= 0");
    }
  }
  if (hidden.rows() != 0 && (hidden.rows() != m || hidden.cols() != n)) {
    throw Error(ErrorCode::kDimensionMismatch, "hidden matrix must be m x n");
  }
}

Column FeatureInstance::MeanColumn(int v) const {
  if (const auto* f = std::get_if<FiniteColumnPrior>(&prior)) {
    Column c(m, 0.0);
    for (const ColumnPoint& p : f->per_feature.at(v)) {
      for (int i = 0; i < m; ++i) c[i] += p.prob * p.column[i];
    }
    return c;
  }
  return std::get<SamplerColumnPrior>(prior).mean.Column(v);
}

DenseMatrix FeatureInstance::MeanMatrix() const {
  DenseMatrix a(m, n);
  for (int v = 0; v < n; ++v) {
    const Column c = MeanColumn(v);
    for (int i = 0; i < m; ++i) a(i, v) = c[i];
  }
  return a;
}

double R2Value(const std::vector<Column>& columns,
               const std::vector<double>& response) {
  const double total = SqNorm(response);
  if (columns.empty()) return 0.0;
  for (const Column& c : columns) {
    if (c.size() != response.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "column length != |b|");
    }
  }
  const LeastSquaresResult ls =
      LeastSquares(DenseMatrix::FromColumns(columns), response);
  return std::max(0.0, total - ls.residual_sq);
}

ResidualProjector::ResidualProjector(std::vector<double> response)
    : norm_b_sq_(SqNorm(response)), residual_(std::move(response)) {}

double ResidualProjector::Gain(const Column& c) const {
  if (c.size() != residual_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "column length != |b|");
  }
  const double cc = SqNorm(c);
  if (cc == 0.0) return 0.0;
  Column perp = c;
  Orthogonalize(basis_, perp);
  const double den = SqNorm(perp);
  if (den <= kSpanTol * cc) return 0.0;
  const double num = Dot(residual_, perp);
  return num * num / den;
}

void ResidualProjector::Add(const Column& c) {
  if (c.size() != residual_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "column length != |b|");
  }
  const double cc = SqNorm(c);
  Column q = c;
  Orthogonalize(basis_, q);
  const double qq = SqNorm(q);
  if (cc == 0.0 || qq <= kSpanTol * cc) return;
  const double inv = 1.0 / std::sqrt(qq);
  for (double& x : q) x *= inv;
  const double t = Dot(residual_, q);
  for (std::size_t i = 0; i < q.size(); ++i) residual_[i] -= t * q[i];
  basis_.push_back(std::move(q));
}

double ResidualProjector::Value() const {
  return std::max(0.0, norm_b_sq_ - SqNorm(residual_));
}

std::vector<double> NoiseVector(std::uint64_t stream_seed, std::uint64_t index,
                                int m) {
  Rng rng(MixSeed(stream_seed, index));
  std::vector<double> e(m);
  for (double& x : e) x = 2.0 * rng.Uniform() - 1.0;
  return e;
}

namespace {

ExpectedGain MeanAndError(const std::vector<double>& xs) {
  ExpectedGain g;
  g.sample_count = static_cast<int>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  g.value = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - g.value) * (x - g.value);
    g.std_error = std::sqrt(ss / (xs.size() - 1) / xs.size());
  }
  return g;
}

}  // namespace

ExpectedGain AdaptiveGainMc(const FeatureInstance& inst, int v,
                            const std::vector<std::pair<int, Column>>& observed,
                            int n_samples, std::uint64_t seed) {
  ResidualProjector proj(inst.response);
  for (const auto& [u, col] : observed) {
    if (u == v) return ExpectedGain{};
    proj.Add(col);
  }
  if (const auto* f = std::get_if<FiniteColumnPrior>(&inst.prior)) {
    double acc = 0.0;
    for (const ColumnPoint& p : f->per_feature.at(v)) {
      acc += p.prob * proj.Gain(p.column);
    }
    return ExpectedGain{acc, 0, 0.0};
  }
  const auto& s = std::get<SamplerColumnPrior>(inst.prior);
  const Column mean = s.mean.Column(v);
  if (s.sigma == 0.0) return ExpectedGain{proj.Gain(mean), 0, 0.0};
  if (n_samples < 1) throw Error(ErrorCode::kInvalidInput, "need samples");
  std::vector<double> gains(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    Column c = NoiseVector(seed, j, inst.m);
    for (int i = 0; i < inst.m; ++i) c[i] = mean[i] + s.sigma * c[i];
    gains[j] = proj.Gain(c);
  }
  return MeanAndError(gains);
}

FeatureSession::FeatureSession(const FeatureInstance& inst, DenseMatrix truth,
                               int n_samples, std::uint64_t seed)
    : inst_(inst),
      truth_(std::move(truth)),
      n_samples_(n_samples),
      seed_(seed),
      selected_(inst.n, false),
      projector_(inst.response) {
  if (truth_.rows() != inst.m || truth_.cols() != inst.n) {
    throw Error(ErrorCode::kDimensionMismatch, "truth must be m x n");
  }
}

void FeatureSession::PrepareStep() {
  prepared_ = true;
  const auto* s = std::get_if<SamplerColumnPrior>(&inst_.prior);
  if (s == nullptr || s->sigma == 0.0) return;
  const std::uint64_t stream = MixSeed(seed_, step_);
  noise_.resize(n_samples_);
  noise_proj_.assign(n_samples_, {});
  noise_r_.resize(n_samples_);
  noise_sq_.resize(n_samples_);
  const auto& basis = projector_.basis();
  for (int j = 0; j < n_samples_; ++j) {
    noise_[j] = NoiseVector(stream, j, inst_.m);
    for (const Column& q : basis) noise_proj_[j].push_back(Dot(q, noise_[j]));
    noise_r_[j] = Dot(projector_.residual(), noise_[j]);
    noise_sq_[j] = SqNorm(noise_[j]);
  }
}

ExpectedGain FeatureSession::Gain(ElementId v) {
  if (selected_.at(v)) return ExpectedGain{};
  if (!prepared_) PrepareStep();
  if (const auto* f = std::get_if<FiniteColumnPrior>(&inst_.prior)) {
    double acc = 0.0;
    for (const ColumnPoint& p : f->per_feature[v]) {
      acc += p.prob * projector_.Gain(p.column);
    }
    return ExpectedGain{acc, 0, 0.0};
  }
  const auto& s = std::get<SamplerColumnPrior>(inst_.prior);
  const Column mean = s.mean.Column(v);
  if (s.sigma == 0.0) return ExpectedGain{projector_.Gain(mean), 0, 0.0};
  // With c = mu + sigma * e and r orthogonal to the basis Q:
  //   gain = (r.c)^2 / (|c|^2 - |Q^T c|^2).
  const auto& basis = projector_.basis();
  std::vector<double> mu_proj;
  for (const Column& q : basis) mu_proj.push_back(Dot(q, mean));
  const double mu_r = Dot(projector_.residual(), mean);
  const double mu_sq = SqNorm(mean);
  const double sigma = s.sigma;
  std::vector<double> gains(n_samples_);
  for (int j = 0; j < n_samples_; ++j) {
    const double cc = mu_sq + 2.0 * sigma * Dot(mean, noise_[j]) +
                      sigma * sigma * noise_sq_[j];
    double proj = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double t = mu_proj[i] + sigma * noise_proj_[j][i];
      proj += t * t;
    }
    const double den = cc - proj;
    const double num = mu_r + sigma * noise_r_[j];
    gains[j] = (cc <= 0.0 || den <= kSpanTolFast * cc) ? 0.0 : num * num / den;
  }
  return MeanAndError(gains);
}

StateCode FeatureSession::Select(ElementId v) {
  selected_.at(v) = true;
  Column c = truth_.Column(v);
  projector_.Add(c);
  StateCode state = 0;
  if (const auto* f = std::get_if<FiniteColumnPrior>(&inst_.prior)) {
    const auto& points = f->per_feature[v];
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].column == c) state = static_cast<StateCode>(i);
    }
  }
  observed_.emplace_back(v, std::move(c));
  ++step_;
  prepared_ = false;
  return state;
}

std::vector<int> NoiseObliviousGreedy(const FeatureInstance& inst, int budget) {
  if (budget < 0 || budget > inst.n) {
    throw Error(ErrorCode::kInvalidInput, "budget outside [0, n]");
  }
  std::vector<Column> mean(inst.n);
  for (int v = 0; v < inst.n; ++v) mean[v] = inst.MeanColumn(v);
  ResidualProjector proj(inst.response);
  std::vector<bool> eligible(inst.n, true);
  std::vector<double> gains(inst.n, 0.0);
  std::vector<int> chosen;
  for (int step = 0; step < budget; ++step) {
    for (int v = 0; v < inst.n; ++v) {
      gains[v] = eligible[v] ? proj.Gain(mean[v]) : 0.0;
    }
    const int best = ArgmaxLowestIndex(gains, eligible);
    eligible[best] = false;
    chosen.push_back(best);
    proj.Add(mean[best]);
  }
  return chosen;
}

std::vector<int> NonAdaptiveGreedyMc(const FeatureInstance& inst, int budget,
                                     int n_samples, std::uint64_t seed) {
  if (budget < 0 || budget > inst.n) {
    throw Error(ErrorCode::kInvalidInput, "budget outside [0, n]");
  }
  const auto* sampler = std::get_if<SamplerColumnPrior>(&inst.prior);
  if (sampler != nullptr && sampler->sigma == 0.0) {
    return NoiseObliviousGreedy(inst, budget);
  }
  if (n_samples < 1) throw Error(ErrorCode::kInvalidInput, "need samples");
  const int n = inst.n, m = inst.m;
  // cols[j][v]: column v of joint sample j.
  std::vector<std::vector<Column>> cols(n_samples, std::vector<Column>(n));
  for (int j = 0; j < n_samples; ++j) {
    const std::uint64_t stream = MixSeed(seed, j);
    for (int v = 0; v < n; ++v) {
      if (sampler != nullptr) {
        Column c = NoiseVector(stream, v, m);
        for (int i = 0; i < m; ++i) {
          c[i] = sampler->mean(i, v) + sampler->sigma * c[i];
        }
        cols[j][v] = std::move(c);
      } else {
        const auto& points =
            std::get<FiniteColumnPrior>(inst.prior).per_feature[v];
        Rng rng(MixSeed(stream, v));
        const double x = rng.Uniform();
        double acc = 0.0;
        std::size_t pick = points.size() - 1;
        for (std::size_t i = 0; i < points.size(); ++i) {
          acc += points[i].prob;
          if (x < acc) {
            pick = i;
            break;
          }
        }
        cols[j][v] = points[pick].column;
      }
    }
  }
  // Per sample: residual, basis, and for every column r.c, |c|^2, |Q^T c|^2.
  std::vector<std::vector<double>> residual(n_samples, inst.response);
  std::vector<std::vector<Column>> basis(n_samples);
  std::vector<std::vector<double>> rc(n_samples, std::vector<double>(n));
  std::vector<std::vector<double>> cc(n_samples, std::vector<double>(n));
  std::vector<std::vector<double>> proj(n_samples, std::vector<double>(n, 0.0));
  for (int j = 0; j < n_samples; ++j) {
    for (int v = 0; v < n; ++v) {
      rc[j][v] = Dot(residual[j], cols[j][v]);
      cc[j][v] = SqNorm(cols[j][v]);
    }
  }
  std::vector<bool> eligible(n, true);
  std::vector<double> est(n, 0.0);
  std::vector<int> chosen;
  for (int step = 0; step < budget; ++step) {
    for (int v = 0; v < n; ++v) {
      if (!eligible[v]) continue;
      double acc = 0.0;
      for (int j = 0; j < n_samples; ++j) {
        const double den = cc[j][v] - proj[j][v];
        if (cc[j][v] > 0.0 && den > kSpanTolFast * cc[j][v]) {
          acc += rc[j][v] * rc[j][v] / den;
        }
      }
      est[v] = acc / n_samples;
    }
    const int best = ArgmaxLowestIndex(est, eligible);
    eligible[best] = false;
    chosen.push_back(best);
    for (int j = 0; j < n_samples; ++j) {
      Column q = cols[j][best];
      const double c2 = SqNorm(q);
      Orthogonalize(basis[j], q);
      const double qq = SqNorm(q);
      if (c2 == 0.0 || qq <= kSpanTol * c2) continue;
      const double inv = 1.0 / std::sqrt(qq);
      for (double& x : q) x *= inv;
      const double rq = Dot(residual[j], q);
      for (int i = 0; i < m; ++i) residual[j][i] -= rq * q[i];
      for (int v = 0; v < n; ++v) {
        const double t = Dot(q, cols[j][v]);
        proj[j][v] += t * t;
        rc[j][v] -= rq * t;
      }
      basis[j].push_back(std::move(q));
    }
  }
  return chosen;
}

EigenBounds EigenBoundsBruteForce(const FeatureInstance& inst, int ell,
                                  bool normalize, std::int64_t cap) {
  const auto* f = std::get_if<FiniteColumnPrior>(&inst.prior);
  if (f == nullptr) {
    throw Error(ErrorCode::kInvalidInput, "eigen bounds need a finite prior");
  }
  EigenBounds out;
  out.ell = ell;
  for (const auto& points : f->per_feature) {
    for (const ColumnPoint& p : points) {
      if (std::abs(std::sqrt(SqNorm(p.column)) - 1.0) > 1e-6) {
        out.not_normalized = true;
      }
    }
  }
  const int top = std::min(ell, inst.n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::int64_t count = 0;
  for (int size = 1; size <= top; ++size) {
    // Subsets of the given size in lexicographic order.
    std::vector<int> s(size);
    for (int i = 0; i < size; ++i) s[i] = i;
    while (true) {
      std::vector<std::size_t> pick(size, 0);
      while (true) {
        if (++count > cap) {
          throw Error(
              ErrorCode::kBudgetExceeded,
              "eigen bound enumeration exceeds cap " + std::to_string(cap));
        }
        std::vector<Column> cols;
        for (int i = 0; i < size; ++i) {
          Column c = f->per_feature[s[i]][pick[i]].column;
          if (normalize) {
            const double nrm = std::sqrt(SqNorm(c));
            if (nrm > 0.0) {
              for (double& x : c) x /= nrm;
            }
          }
          cols.push_back(std::move(c));
        }
        const auto [a, b] =
            SymEigenExtremes(Gram(DenseMatrix::FromColumns(cols)));
        lo = std::min(lo, a);
        hi = std::max(hi, b);
        int i = 0;
        while (i < size && ++pick[i] == f->per_feature[s[i]].size()) {
          pick[i] = 0;
          ++i;
        }
        if (i == size) break;
      }
      int i = size - 1;
      while (i >= 0 && s[i] == inst.n - size + i) --i;
      if (i < 0) break;
      ++s[i];
      for (int j = i + 1; j < size; ++j) s[j] = s[j - 1] + 1;
    }
  }
  if (count > 0) {
    out.lambda_min = std::max(0.0, lo);
    out.lambda_max = hi;
  }
  return out;
}

double RatioLowerBound(const FeatureInstance& inst, int ell, int k,
                       bool normalize) {
  return EigenBoundsBruteForce(inst, k + ell, normalize).lambda_min;
}

double GapLowerBound(const FeatureInstance& inst, int k, bool normalize) {
  const EigenBounds b = EigenBoundsBruteForce(inst, k, normalize);
  return b.lambda_max > 0.0 ? b.lambda_min / b.lambda_max : 1.0;
}

FeatureInstance GenSynthetic(int n, int m, int sparsity, double sigma,
                             std::uint64_t seed) {
  if (n < 1 || m < 1 || sparsity < 0 || sparsity > n || !(sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "invalid synthetic parameters");
  }
  Rng rng(seed);
  DenseMatrix mean(m, n);
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < n; ++v) mean(i, v) = rng.Uniform();
  }
  for (int v = 0; v < n; ++v) {
    double mu = 0.0;
    for (int i = 0; i < m; ++i) mu += mean(i, v);
    mu /= m;
    double var = 0.0;
    for (int i = 0; i < m; ++i) var += (mean(i, v) - mu) * (mean(i, v) - mu);
    const double sd = std::sqrt(var / m);
    for (int i = 0; i < m; ++i) {
      mean(i, v) = sd > 0.0 ? (mean(i, v) - mu) / sd : 0.0;
    }
  }
  FeatureInstance inst;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;
  inst.hidden = mean;
  Rng noise(MixSeed(seed, 1));
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < n; ++v) {
      inst.hidden(i, v) += sigma * (2.0 * noise.Uniform() - 1.0);
    }
  }
  inst.true_support = RandomPolicy(n, sparsity, MixSeed(seed, 2));
  std::sort(inst.true_support.begin(), inst.true_support.end());
  Rng coef(MixSeed(seed, 3));
  inst.response.assign(m, 0.0);
  for (int v : inst.true_support) {
    const double w = coef.Normal();
    inst.coefficients.push_back(w);
    for (int i = 0; i < m; ++i) inst.response[i] += w * inst.hidden(i, v);
  }
  inst.prior = SamplerColumnPrior{std::move(mean), sigma};
  inst.Validate();
  return inst;
}

FeatureInstance GenRandomFinite(int n, int m, int support, bool normalize,
                                std::uint64_t seed) {
  if (n < 1 || m < 1 || support < 1) {
    throw Error(ErrorCode::kInvalidParams, "invalid finite parameters");
  }
  Rng rng(seed);
  FiniteColumnPrior prior;
  prior.per_feature.resize(n);
  for (int v = 0; v < n; ++v) {
    std::vector<double> w(support);
    double sum = 0.0;
    for (double& x : w) {
      x = 0.1 + rng.Uniform();
      sum += x;
    }
    for (int s = 0; s < support; ++s) {
      Column c(m);
      for (double& x : c) x = rng.Normal();
      if (normalize) {
        const double nrm = std::sqrt(SqNorm(c));
        for (double& x : c) x /= nrm;
      }
      prior.per_feature[v].push_back({std::move(c), w[s] / sum});
    }
  }
  FeatureInstance inst;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;
  inst.response.resize(m);
  for (double& x : inst.response) x = rng.Normal();
  inst.prior = std::move(prior);
  inst.Validate();
  return inst;
}

TabularInstance ToTabular(const FeatureInstance& inst, std::int64_t cap) {
  inst.Validate();
  const auto* f = std::get_if<FiniteColumnPrior>(&inst.prior);
  if (f == nullptr) {
    throw Error(ErrorCode::kInvalidInput, "tabular form needs a finite prior");
  }
  if (inst.n > ElementSet::kMaxElements) {
    throw Error(ErrorCode::kInvalidParams, "more than 64 features");
  }
  std::vector<int> num_states(inst.n);
  std::int64_t total = 1;
  for (int v = 0; v < inst.n; ++v) {
    num_states[v] = static_cast<int>(f->per_feature[v].size());
    total *= num_states[v];
    if (total > cap) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "joint support exceeds cap " + std::to_string(cap));
    }
  }
  std::vector<Realization> support;
  std::vector<double> probs;
  std::vector<int> pick(inst.n, 0);
  while (true) {
    double p = 1.0;
    for (int v = 0; v < inst.n; ++v) p *= f->per_feature[v][pick[v]].prob;
    support.push_back(Realization{pick, 0});
    probs.push_back(p);
    int v = 0;
    while (v < inst.n && ++pick[v] == num_states[v]) {
      pick[v] = 0;
      ++v;
    }
    if (v == inst.n) break;
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  auto shared = std::make_shared<const FeatureInstance>(inst);
  Objective obj = [shared](ElementSet s, const Realization& phi) {
    const auto& pf = std::get<FiniteColumnPrior>(shared->prior);
    std::vector<Column> cols;
    for (ElementId v : s.elements()) {
      cols.push_back(pf.per_feature[v][phi.states[v]].column);
    }
    return R2Value(cols, shared->response);
  };
  return TabularInstance{TabularPrior(StateSpace(num_states),
                                      std::move(support), std::move(probs)),
                         std::move(obj), "feature-selection"};
}

namespace {

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void WriteValues(std::ostream& out, const std::vector<double>& xs) {
  for (double x : xs) out << ' ' << Num(x);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string Word() {
    std::string w;
    if (!(in_ >> w)) Fail("unexpected end of input");
    return w;
  }
  void Expect(const std::string& word) {
    const std::string w = Word();
    if (w != word) Fail("expected '" + word + "', got '" + w + "'");
  }
  double Real() {
    const std::string w = Word();
    double x;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
    if (ec != std::errc() || p != w.data() + w.size()) {
      Fail("bad number '" + w + "'");
    }
    return x;
  }
  std::int64_t Int() {
    const std::string w = Word();
    std::int64_t x;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
    if (ec != std::errc() || p != w.data() + w.size()) {
      Fail("bad integer '" + w + "'");
    }
    return x;
  }
  std::uint64_t UInt() {
    const std::string w = Word();
    std::uint64_t x;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
    if (ec != std::errc() || p != w.data() + w.size()) {
      Fail("bad integer '" + w + "'");
    }
    return x;
  }
  std::vector<double> Reals(std::int64_t count) {
    std::vector<double> xs(count);
    for (double& x : xs) x = Real();
    return xs;
  }
  [[noreturn]] void Fail(const std::string& what) {
    throw Error(ErrorCode::kParseError, "feature instance: " + what);
  }

 private:
  std::istream& in_;
};

}  // namespace

void WriteInstance(const FeatureInstance& inst, std::ostream& out) {
  out << "adasub-features 1\n";
  out << "n " << inst.n << "\nm " << inst.m << "\nseed " << inst.seed << '\n';
  out << "response";
  WriteValues(out, inst.response);
  if (const auto* f = std::get_if<FiniteColumnPrior>(&inst.prior)) {
    out << "prior finite\n";
    for (int v = 0; v < inst.n; ++v) {
      out << "feature " << v << ' ' << f->per_feature[v].size() << '\n';
      for (const ColumnPoint& p : f->per_feature[v]) {
        out << "point " << Num(p.prob);
        WriteValues(out, p.column);
      }
    }
  } else {
    const auto& s = std::get<SamplerColumnPrior>(inst.prior);
    out << "prior sampler\nsigma " << Num(s.sigma) << "\nmean";
    WriteValues(out, s.mean.data());
  }
  out << "true_support " << inst.true_support.size();
  for (int v : inst.true_support) out << ' ' << v;
  out << "\ncoefficients " << inst.coefficients.size();
  WriteValues(out, inst.coefficients);
  out << "hidden " << (inst.hidden.rows() > 0 ? 1 : 0);
  WriteValues(out, inst.hidden.data());
  out << "end\n";
}

FeatureInstance ReadInstance(std::istream& in) {
  Reader r(in);
  r.Expect("adasub-features");
  if (r.Int() != 1) r.Fail("unsupported version");
  FeatureInstance inst;
  r.Expect("n");
  inst.n = static_cast<int>(r.Int());
  r.Expect("m");
  inst.m = static_cast<int>(r.Int());
  if (inst.n < 0 || inst.m < 1) r.Fail("bad dimensions");
  r.Expect("seed");
  inst.seed = r.UInt();
  r.Expect("response");
  inst.response = r.Reals(inst.m);
  r.Expect("prior");
  const std::string kind = r.Word();
  if (kind == "finite") {
    FiniteColumnPrior f;
    f.per_feature.resize(inst.n);
    for (int v = 0; v < inst.n; ++v) {
      r.Expect("feature");
      if (r.Int() != v) r.Fail("features out of order");
      const std::int64_t count = r.Int();
      if (count < 1) r.Fail("empty support");
      for (std::int64_t i = 0; i < count; ++i) {
        r.Expect("point");
        const double p = r.Real();
        f.per_feature[v].push_back({r.Reals(inst.m), p});
      }
    }
    inst.prior = std::move(f);
  } else if (kind == "sampler") {
    r.Expect("sigma");
    const double sigma = r.Real();
    r.Expect("mean");
    std::vector<double> data =
        r.Reals(static_cast<std::int64_t>(inst.m) * inst.n);
    inst.prior =
        SamplerColumnPrior{DenseMatrix(inst.m, inst.n, std::move(data)), sigma};
  } else {
    r.Fail("unknown prior '" + kind + "'");
  }
  r.Expect("true_support");
  const std::int64_t ns = r.Int();
  for (std::int64_t i = 0; i < ns; ++i) {
    inst.true_support.push_back(static_cast<int>(r.Int()));
  }
  r.Expect("coefficients");
  inst.coefficients = r.Reals(r.Int());
  r.Expect("hidden");
  if (r.Int() == 1) {
    inst.hidden = DenseMatrix(
        inst.m, inst.n, r.Reals(static_cast<std::int64_t>(inst.m) * inst.n));
  }
  r.Expect("end");
  inst.Validate();
  return inst;
}

}  // namespace adasub
