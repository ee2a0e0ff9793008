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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

namespace adasub {

namespace {

constexpr int kMaxEnumeratedDegree = 20;

bool Bit(std::uint64_t mask, int j) { return (mask >> j) & 1u; }

}  // namespace

BipartiteGraph::BipartiteGraph(int n_src, int n_sink, std::vector<Edge> edges,
                               std::vector<double> sink_weights)
    : n_src_(n_src),
      n_sink_(n_sink),
      edges_(std::move(edges)),
      weights_(std::move(sink_weights)) {
  if (n_src < 0 || n_sink < 0) {
    throw Error(ErrorCode::kInvalidInput, "negative vertex count");
  }
  if (static_cast<int>(weights_.size()) != n_sink) {
    throw Error(ErrorCode::kInvalidInput, "one weight per sink required");
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "sink weight must be finite and >= 0");
    }
  }
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n_src || e.sink < 0 || e.sink >= n_sink) {
      throw Error(ErrorCode::kInvalidInput, "edge endpoint out of range");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.sink < b.sink;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i] == edges_[i - 1]) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge (" + std::to_string(edges_[i].src) + "," +
                      std::to_string(edges_[i].sink) + ") repeated");
    }
  }
  out_.resize(n_src);
  in_.resize(n_sink);
  out_pos_.resize(edges_.size());
  in_pos_.resize(edges_.size());
  for (int e = 0; e < n_edges(); ++e) {
    out_pos_[e] = static_cast<int>(out_[edges_[e].src].size());
    out_[edges_[e].src].push_back(e);
    in_pos_[e] = static_cast<int>(in_[edges_[e].sink].size());
    in_[edges_[e].sink].push_back(e);
  }
}

int BipartiteGraph::max_out_degree() const {
  int d = 0;
  for (const auto& o : out_) d = std::max(d, static_cast<int>(o.size()));
  return d;
}

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kIc:
      return "ic";
    case ModelKind::kLt:
      return "lt";
    case ModelKind::kExtendedLt:
      return "elt";
    case ModelKind::kTriggering:
      return "triggering";
  }
  return "unknown";
}

ModelKind InfluenceInstance::kind() const {
  return static_cast<ModelKind>(model.index());
}

void InfluenceInstance::Validate() const {
  const int m = graph.n_edges();
  if (const auto* ic = std::get_if<IcModel>(&model)) {
    if (static_cast<int>(ic->q.size()) != m) {
      throw Error(ErrorCode::kInvalidParams, "IC needs one q per edge");
    }
    for (double q : ic->q) {
      if (!(q >= 0.0 && q <= 1.0)) {
        throw Error(ErrorCode::kInvalidParams, "IC q outside [0,1]");
      }
    }
  } else if (const auto* lt = std::get_if<LtModel>(&model)) {
    if (static_cast<int>(lt->b.size()) != m) {
      throw Error(ErrorCode::kInvalidParams, "LT needs one b per edge");
    }
    for (int u = 0; u < graph.n_sink(); ++u) {
      double sum = 0.0;
      for (int e : graph.in_edges(u)) {
        if (!(lt->b[e] >= 0.0)) {
          throw Error(ErrorCode::kInvalidParams, "LT b negative");
        }
        sum += lt->b[e];
      }
      if (sum > 1.0 + kProbTol) {
        throw Error(ErrorCode::kInvalidParams,
                    "LT weights of sink " + std::to_string(u) + " exceed 1");
      }
    }
  } else if (const auto* elt = std::get_if<ExtendedLtModel>(&model)) {
    if (elt->t < 1) throw Error(ErrorCode::kInvalidParams, "ELT t < 1");
  } else {
    const auto& tr = std::get<TriggeringModel>(model);
    if (static_cast<int>(tr.per_sink.size()) != graph.n_sink()) {
      throw Error(ErrorCode::kInvalidParams, "one distribution per sink");
    }
    for (int u = 0; u < graph.n_sink(); ++u) {
      const int deg = graph.in_degree(u);
      double sum = 0.0;
      for (const SinkOutcome& o : tr.per_sink[u]) {
        if (deg < 64 && (o.mask >> deg) != 0) {
          throw Error(ErrorCode::kInvalidParams, "outcome mask out of range");
        }
        if (!(o.prob >= 0.0)) {
          throw Error(ErrorCode::kInvalidParams, "negative probability");
        }
        sum += o.prob;
      }
      if (std::abs(sum - 1.0) > kProbTol) {
        throw Error(
            ErrorCode::kInvalidParams,
            "distribution of sink " + std::to_string(u) + " does not sum to 1");
      }
    }
  }
}

double Spread(const BipartiteGraph& g, const std::vector<int>& sources,
              const std::vector<char>& alive) {
  std::vector<bool> hit(g.n_sink(), false);
  double total = 0.0;
  for (int v : sources) {
    for (int e : g.out_edges(v)) {
      const int u = g.edge(e).sink;
      if (alive[e] && !hit[u]) {
        hit[u] = true;
        total += g.weight(u);
      }
    }
  }
  return total;
}

std::vector<SinkOutcome> SinkOutcomes(const InfluenceInstance& inst, int u) {
  const BipartiteGraph& g = inst.graph;
  const std::vector<int>& in = g.in_edges(u);
  const int deg = static_cast<int>(in.size());
  std::vector<SinkOutcome> out;
  if (deg == 0) {
    out.push_back({0, 1.0});
    return out;
  }
  if (const auto* tr = std::get_if<TriggeringModel>(&inst.model)) {
    std::map<std::uint64_t, double> merged;
    for (const SinkOutcome& o : tr->per_sink[u]) merged[o.mask] += o.prob;
    for (const auto& [mask, p] : merged) {
      if (p > 0.0) out.push_back({mask, p});
    }
    return out;
  }
  if (const auto* lt = std::get_if<LtModel>(&inst.model)) {
    double sum = 0.0;
    for (int e : in) sum += lt->b[e];
    if (1.0 - sum > kProbTol) out.push_back({0, 1.0 - sum});
    for (int j = 0; j < deg; ++j) {
      if (lt->b[in[j]] > 0.0)
        out.push_back({std::uint64_t{1} << j, lt->b[in[j]]});
    }
    return out;
  }
  if (deg > kMaxEnumeratedDegree) {
    throw Error(ErrorCode::kBudgetExceeded,
                "in-degree " + std::to_string(deg) + " too large to enumerate");
  }
  const std::uint64_t full = (std::uint64_t{1} << deg) - 1;
  if (const auto* ic = std::get_if<IcModel>(&inst.model)) {
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
      double p = 1.0;
      for (int j = 0; j < deg; ++j) {
        const double q = ic->q[in[j]];
        p *= Bit(mask, j) ? q : 1.0 - q;
      }
      if (p > 0.0) out.push_back({mask, p});
    }
    return out;
  }
  // Extended LT: P(L = A) = sum_{J subset A} (-1)^{|A|-|J|} (|J|/deg)^t,
  // zero for |A| > t.
  const int t = std::get<ExtendedLtModel>(inst.model).t;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    const int size = __builtin_popcountll(mask);
    if (size > t) continue;
    double p = 0.0;
    for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
      const int js = __builtin_popcountll(sub);
      const double term = std::pow(static_cast<double>(js) / deg, t);
      p += ((size - js) % 2 == 0) ? term : -term;
      if (sub == 0) break;
    }
    if (p > 1e-15) out.push_back({mask, p});
  }
  return out;
}

std::vector<double> SinkPosterior(const InfluenceInstance& inst, int u,
                                  const std::vector<std::int8_t>& observed) {
  const BipartiteGraph& g = inst.graph;
  const std::vector<int>& in = g.in_edges(u);
  const int deg = static_cast<int>(in.size());
  if (static_cast<int>(observed.size()) != deg) {
    throw Error(ErrorCode::kInvalidInput, "observation length mismatch");
  }
  std::vector<double> post(deg, 0.0);
  int n_alive = 0;
  for (int j = 0; j < deg; ++j) {
    if (observed[j] >= 0) post[j] = observed[j];
    if (observed[j] == 1) ++n_alive;
  }
  auto inconsistent = [u]() {
    return Error(
        ErrorCode::kInconsistentObservation,
        "observation at sink " + std::to_string(u) + " has probability 0");
  };
  if (const auto* ic = std::get_if<IcModel>(&inst.model)) {
    for (int j = 0; j < deg; ++j) {
      const double q = ic->q[in[j]];
      if ((observed[j] == 1 && q <= 0.0) || (observed[j] == 0 && q >= 1.0)) {
        throw inconsistent();
      }
      if (observed[j] < 0) post[j] = q;
    }
    return post;
  }
  if (const auto* lt = std::get_if<LtModel>(&inst.model)) {
    if (n_alive > 1) throw inconsistent();
    if (n_alive == 1) {
      for (int j = 0; j < deg; ++j) {
        if (observed[j] == 1 && lt->b[in[j]] <= 0.0) throw inconsistent();
      }
      return post;
    }
    double dead = 0.0;
    for (int j = 0; j < deg; ++j) {
      if (observed[j] == 0) dead += lt->b[in[j]];
    }
    const double rest = 1.0 - dead;
    if (rest <= kProbTol) throw inconsistent();
    for (int j = 0; j < deg; ++j) {
      if (observed[j] < 0) post[j] = std::min(1.0, lt->b[in[j]] / rest);
    }
    return post;
  }
  if (const auto* elt = std::get_if<ExtendedLtModel>(&inst.model)) {
    // Given the dead set D, the t samples are uniform over the r = deg - |D|
    // remaining edges. With observed-alive set A:
    //   P(A subset L) = sum_{J subset A} (-1)^{|J|} ((r - |J|)/r)^t.
    const int t = elt->t;
    int r = 0;
    std::vector<int> alive_pos;
    for (int j = 0; j < deg; ++j) {
      if (observed[j] != 0) ++r;
      if (observed[j] == 1) alive_pos.push_back(j);
    }
    if (r == 0 || n_alive > t) throw inconsistent();
    if (n_alive > 20) {
      throw Error(ErrorCode::kBudgetExceeded, "too many alive observations");
    }
    auto contains_all = [&](int extra) {
      const int a = n_alive + (extra >= 0 ? 1 : 0);
      double s = 0.0;
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << a); ++sub) {
        const int js = __builtin_popcountll(sub);
        const double term = std::pow(static_cast<double>(r - js) / r, t);
        s += (js % 2 == 0) ? term : -term;
      }
      return s;
    };
    const double base = n_alive == 0 ? 1.0 : contains_all(-1);
    if (base <= 1e-15) throw inconsistent();
    const double single =
        n_alive == 0 ? 1.0 - std::pow(static_cast<double>(r - 1) / r, t) : 0.0;
    for (int j = 0; j < deg; ++j) {
      if (observed[j] >= 0) continue;
      post[j] =
          n_alive == 0 ? single : std::clamp(contains_all(j) / base, 0.0, 1.0);
    }
    return post;
  }
  const auto& tr = std::get<TriggeringModel>(inst.model);
  double total = 0.0;
  std::vector<double> alive(deg, 0.0);
  for (const SinkOutcome& o : tr.per_sink[u]) {
    bool ok = true;
    for (int j = 0; j < deg && ok; ++j) {
      if (observed[j] >= 0 && Bit(o.mask, j) != (observed[j] == 1)) ok = false;
    }
    if (!ok || o.prob <= 0.0) continue;
    total += o.prob;
    for (int j = 0; j < deg; ++j) {
      if (Bit(o.mask, j)) alive[j] += o.prob;
    }
  }
  if (!(total > 0.0)) throw inconsistent();
  for (int j = 0; j < deg; ++j) {
    if (observed[j] < 0) post[j] = alive[j] / total;
  }
  return post;
}

EdgeObservations ObservationsFromHistory(const InfluenceInstance& inst,
                                         const PartialRealization& psi) {
  const BipartiteGraph& g = inst.graph;
  EdgeObservations obs(g.n_edges(), -1);
  for (const Observation& o : psi.entries()) {
    if (o.element < 0 || o.element >= g.n_src()) {
      throw Error(ErrorCode::kInvalidInput, "source id out of range");
    }
    const std::vector<int>& out = g.out_edges(o.element);
    for (std::size_t j = 0; j < out.size(); ++j) {
      obs[out[j]] = Bit(static_cast<std::uint64_t>(o.state), j) ? 1 : 0;
    }
  }
  return obs;
}

namespace {

std::vector<std::int8_t> SinkObservations(const BipartiteGraph& g, int u,
                                          const EdgeObservations& obs) {
  std::vector<std::int8_t> local;
  local.reserve(g.in_degree(u));
  for (int e : g.in_edges(u)) local.push_back(obs[e]);
  return local;
}

bool Activated(const BipartiteGraph& g, int u, const EdgeObservations& obs) {
  for (int e : g.in_edges(u)) {
    if (obs[e] == 1) return true;
  }
  return false;
}

}  // namespace

ExpectedGain AdaptiveGain(const InfluenceInstance& inst, int v,
                          const EdgeObservations& obs) {
  const BipartiteGraph& g = inst.graph;
  double gain = 0.0;
  for (int e : g.out_edges(v)) {
    if (obs[e] >= 0) return ExpectedGain{0.0, 0, 0.0};
  }
  for (int e : g.out_edges(v)) {
    const int u = g.edge(e).sink;
    if (Activated(g, u, obs)) continue;
    const std::vector<double> post =
        SinkPosterior(inst, u, SinkObservations(g, u, obs));
    gain += g.weight(u) * post[g.in_position(e)];
  }
  return ExpectedGain{gain, 0, 0.0};
}

ExpectedGain AdaptiveGain(const InfluenceInstance& inst, int v,
                          const PartialRealization& psi) {
  if (psi.Contains(v)) return ExpectedGain{0.0, 0, 0.0};
  return AdaptiveGain(inst, v, ObservationsFromHistory(inst, psi));
}

double ExpectedSpreadNonAdaptive(const InfluenceInstance& inst,
                                 const std::vector<int>& sources) {
  const BipartiteGraph& g = inst.graph;
  std::vector<bool> chosen(g.n_src(), false);
  for (int v : sources) chosen.at(v) = true;
  double total = 0.0;
  for (int u = 0; u < g.n_sink(); ++u) {
    const std::vector<int>& in = g.in_edges(u);
    const int deg = static_cast<int>(in.size());
    if (deg == 0) continue;
    double p = 0.0;
    if (const auto* ic = std::get_if<IcModel>(&inst.model)) {
      double none = 1.0;
      for (int e : in) {
        if (chosen[g.edge(e).src]) none *= 1.0 - ic->q[e];
      }
      p = 1.0 - none;
    } else if (const auto* lt = std::get_if<LtModel>(&inst.model)) {
      for (int e : in) {
        if (chosen[g.edge(e).src]) p += lt->b[e];
      }
    } else if (const auto* elt = std::get_if<ExtendedLtModel>(&inst.model)) {
      int c = 0;
      for (int e : in) c += chosen[g.edge(e).src] ? 1 : 0;
      p = 1.0 - std::pow(static_cast<double>(deg - c) / deg, elt->t);
    } else {
      std::uint64_t smask = 0;
      for (int j = 0; j < deg; ++j) {
        if (chosen[g.edge(in[j]).src]) smask |= std::uint64_t{1} << j;
      }
      for (const SinkOutcome& o : SinkOutcomes(inst, u)) {
        if (o.mask & smask) p += o.prob;
      }
    }
    total += g.weight(u) * p;
  }
  return total;
}

StateCode SourceState(const BipartiteGraph& g, int v,
                      const std::vector<char>& alive) {
  StateCode s = 0;
  const std::vector<int>& out = g.out_edges(v);
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (alive[out[j]] && static_cast<int>(j) < kMaxCodedEdges) s |= 1 << j;
  }
  return s;
}

TabularInstance ToTabular(const InfluenceInstance& inst, std::int64_t cap) {
  inst.Validate();
  const BipartiteGraph& g = inst.graph;
  if (g.n_src() > ElementSet::kMaxElements) {
    throw Error(ErrorCode::kInvalidParams, "more than 64 sources");
  }
  if (g.max_out_degree() > 15) {
    throw Error(ErrorCode::kInvalidParams, "out-degree above 15");
  }
  std::vector<int> sinks;
  std::vector<std::vector<SinkOutcome>> outcomes;
  std::int64_t total = 1;
  for (int u = 0; u < g.n_sink(); ++u) {
    if (g.in_degree(u) == 0) continue;
    sinks.push_back(u);
    outcomes.push_back(SinkOutcomes(inst, u));
    total *= static_cast<std::int64_t>(outcomes.back().size());
    if (total > cap) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "joint support exceeds cap " + std::to_string(cap));
    }
  }
  std::vector<int> num_states(g.n_src());
  for (int v = 0; v < g.n_src(); ++v) num_states[v] = 1 << g.out_degree(v);
  std::vector<Realization> support;
  std::vector<double> probs;
  std::vector<std::size_t> pick(sinks.size(), 0);
  while (true) {
    std::vector<char> alive(g.n_edges(), 0);
    double p = 1.0;
    for (std::size_t i = 0; i < sinks.size(); ++i) {
      const SinkOutcome& o = outcomes[i][pick[i]];
      p *= o.prob;
      const std::vector<int>& in = g.in_edges(sinks[i]);
      for (std::size_t j = 0; j < in.size(); ++j) {
        if (Bit(o.mask, static_cast<int>(j))) alive[in[j]] = 1;
      }
    }
    Realization r;
    r.states.resize(g.n_src());
    for (int v = 0; v < g.n_src(); ++v) r.states[v] = SourceState(g, v, alive);
    support.push_back(std::move(r));
    probs.push_back(p);
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == outcomes[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == pick.size()) break;
  }
  // Rounding in the products is renormalized away.
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= sum;

  auto graph = std::make_shared<const BipartiteGraph>(g);
  Objective f = [graph](ElementSet s, const Realization& phi) {
    std::vector<bool> hit(graph->n_sink(), false);
    double total_w = 0.0;
    for (ElementId v : s.elements()) {
      const std::vector<int>& out = graph->out_edges(v);
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (!Bit(static_cast<std::uint64_t>(phi.states[v]), j)) continue;
        const int u = graph->edge(out[j]).sink;
        if (!hit[u]) {
          hit[u] = true;
          total_w += graph->weight(u);
        }
      }
    }
    return total_w;
  };
  return TabularInstance{TabularPrior(StateSpace(num_states),
                                      std::move(support), std::move(probs)),
                         std::move(f),
                         "influence-" + ModelKindName(inst.kind())};
}

std::vector<char> SampleEdgeRealization(const InfluenceInstance& inst,
                                        Rng& rng) {
  const BipartiteGraph& g = inst.graph;
  std::vector<char> alive(g.n_edges(), 0);
  for (int u = 0; u < g.n_sink(); ++u) {
    const std::vector<int>& in = g.in_edges(u);
    const int deg = static_cast<int>(in.size());
    if (deg == 0) continue;
    if (const auto* ic = std::get_if<IcModel>(&inst.model)) {
      for (int e : in) alive[e] = rng.Bernoulli(ic->q[e]) ? 1 : 0;
    } else if (const auto* lt = std::get_if<LtModel>(&inst.model)) {
      const double x = rng.Uniform();
      double acc = 0.0;
      for (int e : in) {
        acc += lt->b[e];
        if (x < acc) {
          alive[e] = 1;
          break;
        }
      }
    } else if (const auto* elt = std::get_if<ExtendedLtModel>(&inst.model)) {
      for (int s = 0; s < elt->t; ++s) alive[in[rng.UniformInt(deg)]] = 1;
    } else {
      const auto& dist = std::get<TriggeringModel>(inst.model).per_sink[u];
      const double x = rng.Uniform();
      double acc = 0.0;
      std::uint64_t mask = dist.empty() ? 0 : dist.back().mask;
      for (const SinkOutcome& o : dist) {
        acc += o.prob;
        if (x < acc) {
          mask = o.mask;
          break;
        }
      }
      for (int j = 0; j < deg; ++j) alive[in[j]] = Bit(mask, j) ? 1 : 0;
    }
  }
  return alive;
}

InfluenceSession::InfluenceSession(const InfluenceInstance& inst,
                                   std::vector<char> alive)
    : inst_(inst),
      alive_(std::move(alive)),
      obs_(inst.graph.n_edges(), -1),
      activated_(inst.graph.n_sink(), false),
      selected_(inst.graph.n_src(), false),
      posterior_(inst.graph.n_sink()),
      posterior_valid_(inst.graph.n_sink(), false) {
  if (static_cast<int>(alive_.size()) != inst.graph.n_edges()) {
    throw Error(ErrorCode::kInvalidInput, "realization length mismatch");
  }
}

const std::vector<double>& InfluenceSession::Posterior(int u) {
  if (!posterior_valid_[u]) {
    posterior_[u] =
        SinkPosterior(inst_, u, SinkObservations(inst_.graph, u, obs_));
    posterior_valid_[u] = true;
  }
  return posterior_[u];
}

ExpectedGain InfluenceSession::Gain(ElementId v) {
  if (selected_.at(v)) return ExpectedGain{0.0, 0, 0.0};
  const BipartiteGraph& g = inst_.graph;
  double gain = 0.0;
  for (int e : g.out_edges(v)) {
    const int u = g.edge(e).sink;
    if (activated_[u]) continue;
    gain += g.weight(u) * Posterior(u)[g.in_position(e)];
  }
  return ExpectedGain{gain, 0, 0.0};
}

StateCode InfluenceSession::Select(ElementId v) {
  const BipartiteGraph& g = inst_.graph;
  selected_.at(v) = true;
  for (int e : g.out_edges(v)) {
    const int u = g.edge(e).sink;
    obs_[e] = alive_[e] ? 1 : 0;
    posterior_valid_[u] = false;
    if (alive_[e]) activated_[u] = true;
  }
  return SourceState(g, v, alive_);
}

namespace {

InfluenceInstance WithModel(BipartiteGraph g, ModelKind kind, int t) {
  std::vector<double> inv(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    inv[e] = 1.0 / g.in_degree(g.edge(e).sink);
  }
  InfluenceInstance inst{std::move(g), IcModel{}};
  switch (kind) {
    case ModelKind::kIc:
      inst.model = IcModel{inv};
      break;
    case ModelKind::kLt:
      inst.model = LtModel{inv};
      break;
    case ModelKind::kExtendedLt:
      inst.model = ExtendedLtModel{t};
      break;
    case ModelKind::kTriggering:
      throw Error(ErrorCode::kInvalidParams,
                  "triggering model needs explicit distributions");
  }
  inst.Validate();
  return inst;
}

}  // namespace

InfluenceInstance GenErdosRenyi(int n_src, int n_sink, double p_edge,
                                ModelKind kind, int t, std::uint64_t seed,
                                std::uint64_t weight_seed) {
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams, "edge probability outside [0,1]");
  }
  std::vector<Edge> edges;
  const std::int64_t pairs = static_cast<std::int64_t>(n_src) * n_sink;
  if (p_edge >= 1.0) {
    for (std::int64_t i = 0; i < pairs; ++i) {
      edges.push_back(
          {static_cast<int>(i / n_sink), static_cast<int>(i % n_sink)});
    }
  } else if (p_edge > 0.0) {
    Rng rng(seed);
    const double log_q = std::log1p(-p_edge);
    std::int64_t i = -1;
    while (true) {
      const double x = rng.Uniform();
      const double skip = std::floor(std::log1p(-x) / log_q);
      if (skip >= static_cast<double>(pairs)) break;
      i += 1 + static_cast<std::int64_t>(skip);
      if (i >= pairs) break;
      edges.push_back(
          {static_cast<int>(i / n_sink), static_cast<int>(i % n_sink)});
    }
  }
  Rng wrng(weight_seed);
  std::vector<double> weights(n_sink);
  for (double& w : weights) w = wrng.Uniform();
  return WithModel(
      BipartiteGraph(n_src, n_sink, std::move(edges), std::move(weights)), kind,
      t);
}

InfluenceInstance GenStar(int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidParams, "star needs k >= 1");
  std::vector<Edge> edges;
  for (int v = 0; v < k; ++v) edges.push_back({v, 0});
  return WithModel(BipartiteGraph(k, 1, std::move(edges), {1.0}),
                   ModelKind::kLt, 1);
}

InfluenceInstance GenRandomSmall(ModelKind kind, int n_src, int n_sink,
                                 std::uint64_t seed, double edge_prob) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int v = 0; v < n_src; ++v) {
    for (int u = 0; u < n_sink; ++u) {
      if (rng.Bernoulli(edge_prob)) edges.push_back({v, u});
    }
  }
  std::vector<double> weights(n_sink);
  for (double& w : weights) w = 1.0 - rng.Uniform();
  BipartiteGraph g(n_src, n_sink, std::move(edges), std::move(weights));
  InfluenceInstance inst{g, IcModel{}};
  switch (kind) {
    case ModelKind::kIc: {
      std::vector<double> q(g.n_edges());
      for (double& x : q) x = rng.Uniform();
      inst.model = IcModel{q};
      break;
    }
    case ModelKind::kLt: {
      std::vector<double> b(g.n_edges(), 0.0);
      for (int u = 0; u < g.n_sink(); ++u) {
        std::vector<double> raw;
        double sum = rng.Uniform();  // Residual "no live edge" mass.
        for (std::size_t j = 0; j < g.in_edges(u).size(); ++j) {
          raw.push_back(rng.Uniform());
          sum += raw.back();
        }
        for (std::size_t j = 0; j < raw.size(); ++j) {
          b[g.in_edges(u)[j]] = raw[j] / sum;
        }
      }
      inst.model = LtModel{b};
      break;
    }
    case ModelKind::kExtendedLt:
      inst.model = ExtendedLtModel{1 + static_cast<int>(rng.UniformInt(3))};
      break;
    case ModelKind::kTriggering: {
      TriggeringModel tr;
      tr.per_sink.resize(g.n_sink());
      for (int u = 0; u < g.n_sink(); ++u) {
        const std::uint64_t count = std::uint64_t{1} << g.in_degree(u);
        std::vector<double> raw(count);
        double sum = 0.0;
        for (double& x : raw) {
          // Roughly half the subsets get no mass.
          x = rng.Bernoulli(0.5) ? rng.Uniform() : 0.0;
          sum += x;
        }
        if (sum == 0.0) {
          raw[count - 1] = 1.0;
          sum = 1.0;
        }
        for (std::uint64_t mask = 0; mask < count; ++mask) {
          if (raw[mask] > 0.0)
            tr.per_sink[u].push_back({mask, raw[mask] / sum});
        }
      }
      inst.model = tr;
      break;
    }
  }
  inst.Validate();
  return inst;
}

namespace {

bool ParseInt(std::string_view s, int* out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && p == end && *out >= 0;
}

bool ParseDouble(std::string_view s, double* out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && p == end && std::isfinite(*out);
}

}  // namespace

EdgeList ParseEdgeList(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::map<int, double> sink_weight;
  std::map<std::pair<int, int>, double> edges;
  int n_src = 0, n_sink = 0;
  auto fail = [&line_no](const std::string& what) {
    return Error(ErrorCode::kParseError,
                 "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto b = rest.find_first_not_of(" \t");
      if (b == std::string_view::npos) break;
      rest.remove_prefix(b);
      const auto e = rest.find_first_of(" \t");
      fields.push_back(rest.substr(0, e));
      if (e == std::string_view::npos) break;
      rest.remove_prefix(e);
    }
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields[0] == "u") {
      int u;
      double w;
      if (fields.size() != 3 || !ParseInt(fields[1], &u) ||
          !ParseDouble(fields[2], &w) || w < 0.0) {
        throw fail("expected 'u <sink-id> <weight>'");
      }
      if (!sink_weight.emplace(u, w).second) {
        throw fail("sink " + std::to_string(u) + " declared twice");
      }
      n_sink = std::max(n_sink, u + 1);
    } else if (fields[0] == "e") {
      int v, u;
      double param;
      if (fields.size() != 4 || !ParseInt(fields[1], &v) ||
          !ParseInt(fields[2], &u) || !ParseDouble(fields[3], &param)) {
        throw fail("expected 'e <src-id> <sink-id> <param>'");
      }
      if (!edges.emplace(std::make_pair(v, u), param).second) {
        throw Error(ErrorCode::kDuplicateEdge,
                    "line " + std::to_string(line_no) + ": edge (" +
                        std::to_string(v) + "," + std::to_string(u) +
                        ") repeated");
      }
      n_src = std::max(n_src, v + 1);
      n_sink = std::max(n_sink, u + 1);
    } else {
      throw fail("unknown record '" + std::string(fields[0]) + "'");
    }
  }
  std::vector<double> weights(n_sink, 1.0);
  for (const auto& [u, w] : sink_weight) weights[u] = w;
  std::vector<Edge> list;
  for (const auto& [key, param] : edges)
    list.push_back({key.first, key.second});
  EdgeList out{BipartiteGraph(n_src, n_sink, list, weights), {}};
  for (const Edge& e : out.graph.edges()) {
    out.params.push_back(edges.at({e.src, e.sink}));
  }
  return out;
}

EdgeList LoadEdgeList(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseEdgeList(buf.str());
}

InfluenceInstance MakeInstance(const EdgeList& list, ModelKind kind, int t) {
  InfluenceInstance inst{list.graph, IcModel{}};
  switch (kind) {
    case ModelKind::kIc:
      inst.model = IcModel{list.params};
      break;
    case ModelKind::kLt:
      inst.model = LtModel{list.params};
      break;
    case ModelKind::kExtendedLt:
      inst.model = ExtendedLtModel{t};
      break;
    case ModelKind::kTriggering:
      throw Error(ErrorCode::kInvalidParams,
                  "edge lists do not carry triggering distributions");
  }
  inst.Validate();
  return inst;
}

std::vector<int> DegreeBaseline(const BipartiteGraph& g, int k) {
  if (k < 0 || k > g.n_src()) {
    throw Error(ErrorCode::kInvalidInput, "k outside [0, n_src]");
  }
  std::vector<int> order(g.n_src());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&g](int a, int b) {
    return g.out_degree(a) > g.out_degree(b);
  });
  order.resize(k);
  return order;
}

double IcGapLowerBound(double q_max, int d, int k) {
  if (!(q_max >= 0.0 && q_max <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "q_max outside [0,1]");
  }
  const int e = std::min(k, d) - 1;
  return e <= 0 ? 1.0 : std::pow(1.0 - q_max, e);
}

}  // namespace adasub
