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

#ifndef ADASUB_INFMAX_H_
#define ADASUB_INFMAX_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "adasub/core.h"
#include "adasub/policies.h"
#include "adasub/rng.h"

namespace adasub {

struct Edge {
  int src;
  int sink;
  bool operator==(const Edge& o) const = default;
};

// Directed bipartite graph from sources to sinks. Edges are kept sorted by
// (src, sink); out_edges(v) is ordered by sink and in_edges(u) by source.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  // Throws kDuplicateEdge on repeated edges and kInvalidInput on ids out of
  // range or weights that are negative or not finite.
  BipartiteGraph(int n_src, int n_sink, std::vector<Edge> edges,
                 std::vector<double> sink_weights);

  int n_src() const { return n_src_; }
  int n_sink() const { return n_sink_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  double weight(int u) const { return weights_[u]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int u) const { return in_[u]; }
  int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(int u) const { return static_cast<int>(in_[u].size()); }
  // Position of edge e within out_edges(src) and in_edges(sink).
  int out_position(int e) const { return out_pos_[e]; }
  int in_position(int e) const { return in_pos_[e]; }
  int max_out_degree() const;

 private:
  int n_src_ = 0;
  int n_sink_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> out_pos_, in_pos_;
};

// Independent cascade: edge e is alive with probability q[e].
struct IcModel {
  std::vector<double> q;
};
// Linear threshold: at most one live in-edge per sink, edge e with
// probability b[e]; the remainder is "no live edge".
struct LtModel {
  std::vector<double> b;
};
// Each sink samples t in-edges uniformly with replacement; sampled edges
// are live.
struct ExtendedLtModel {
  int t = 1;
};
// Explicit per-sink distribution over live subsets of in_edges(u), given as
// bitmasks over in-edge positions.
struct SinkOutcome {
  std::uint64_t mask;
  double prob;
};
struct TriggeringModel {
  std::vector<std::vector<SinkOutcome>> per_sink;
};

using EdgeModel =
    std::variant<IcModel, LtModel, ExtendedLtModel, TriggeringModel>;

enum class ModelKind { kIc, kLt, kExtendedLt, kTriggering };
std::string ModelKindName(ModelKind kind);

// Graph plus edge-state model. Selecting source v reveals the states of all
// edges in out_edges(v); v's state code has bit j set when out_edges(v)[j]
// is alive. The objective is the total weight of sinks with a live edge from
// the selected sources.
struct InfluenceInstance {
  BipartiteGraph graph;
  EdgeModel model;

  ModelKind kind() const;
  // Throws kInvalidParams when the model does not fit the graph.
  void Validate() const;
};

// Per-edge observation: -1 unobserved, 0 dead, 1 alive.
using EdgeObservations = std::vector<std::int8_t>;

// Total weight of sinks with a live edge from `sources`.
double Spread(const BipartiteGraph& g, const std::vector<int>& sources,
              const std::vector<char>& alive);

// Live in-edge subsets of sink u with positive probability.
std::vector<SinkOutcome> SinkOutcomes(const InfluenceInstance& inst, int u);

// Alive probability of every in-edge of u (by in-edge position) given the
// observed states of some of them; observed edges get 0 or 1. Throws
// kInconsistentObservation when the observation has probability 0.
std::vector<double> SinkPosterior(const InfluenceInstance& inst, int u,
                                  const std::vector<std::int8_t>& observed);

// Edge observations induced by a history over sources.
EdgeObservations ObservationsFromHistory(const InfluenceInstance& inst,
                                         const PartialRealization& psi);

// Delta(v | obs) in closed form. Zero when v's edges are already observed.
ExpectedGain AdaptiveGain(const InfluenceInstance& inst, int v,
                          const EdgeObservations& obs);
ExpectedGain AdaptiveGain(const InfluenceInstance& inst, int v,
                          const PartialRealization& psi);

// E f(S) without observations.
double ExpectedSpreadNonAdaptive(const InfluenceInstance& inst,
                                 const std::vector<int>& sources);

// Tabular form: the joint support is the product of per-sink outcome lists.
// Throws kBudgetExceeded when the product exceeds `cap` points, and
// kInvalidParams for more than 64 sources or out-degree above 15.
TabularInstance ToTabular(const InfluenceInstance& inst,
                          std::int64_t cap = 1'000'000);

// Edge aliveness drawn from the model, sink by sink.
std::vector<char> SampleEdgeRealization(const InfluenceInstance& inst,
                                        Rng& rng);

// Source state code of v under an edge realization. Only the first
// kMaxCodedEdges out-edges are coded; ToTabular rejects larger out-degrees.
inline constexpr int kMaxCodedEdges = 30;
StateCode SourceState(const BipartiteGraph& g, int v,
                      const std::vector<char>& alive);

// Adaptive greedy oracle observing a fixed edge realization.
class InfluenceSession : public GreedyOracle {
 public:
  InfluenceSession(const InfluenceInstance& inst, std::vector<char> alive);
  int num_elements() const override { return inst_.graph.n_src(); }
  ExpectedGain Gain(ElementId v) override;
  StateCode Select(ElementId v) override;
  const EdgeObservations& observations() const { return obs_; }

 private:
  const std::vector<double>& Posterior(int u);

  const InfluenceInstance& inst_;
  std::vector<char> alive_;
  EdgeObservations obs_;
  std::vector<bool> activated_;
  std::vector<bool> selected_;
  std::vector<std::vector<double>> posterior_;
  std::vector<bool> posterior_valid_;
};

// Each source-sink pair is an edge independently with probability p_edge
// (geometric skipping). Sink weights are uniform on [0,1] from
// `weight_seed`. IC and LT edge parameters are 1/in-degree of the sink.
InfluenceInstance GenErdosRenyi(int n_src, int n_sink, double p_edge,
                                ModelKind kind, int t, std::uint64_t seed,
                                std::uint64_t weight_seed);

// k sources, one sink of weight 1, LT with b = 1/k on every edge.
InfluenceInstance GenStar(int k);

// Small random instance for exhaustive checks: every pair is an edge with
// probability `edge_prob`, sink weights uniform on (0,1], and random model
// parameters (triggering distributions with random masses, LT weights with a
// random residual, IC probabilities uniform on [0,1], ELT t in 1..3).
InfluenceInstance GenRandomSmall(ModelKind kind, int n_src, int n_sink,
                                 std::uint64_t seed, double edge_prob = 0.6);

struct EdgeList {
  BipartiteGraph graph;
  // Parameter of each edge in graph.edges() order.
  std::vector<double> params;
};

// Parses the edge-list text format:
//   # comment
//   u <sink-id> <weight>
//   e <src-id> <sink-id> <param>
// Throws kParseError (with the line number), kDuplicateEdge, kIoError.
EdgeList ParseEdgeList(const std::string& text);
EdgeList LoadEdgeList(const std::string& path);
// Instance from a parsed edge list; params are q for IC and b for LT.
InfluenceInstance MakeInstance(const EdgeList& list, ModelKind kind, int t);

// Sources by out-degree, descending, ties by index; first k.
std::vector<int> DegreeBaseline(const BipartiteGraph& g, int k);

// (1 - q_max)^(min(k, d) - 1).
double IcGapLowerBound(double q_max, int d, int k);

}  // namespace adasub

#endif  // ADASUB_INFMAX_H_
