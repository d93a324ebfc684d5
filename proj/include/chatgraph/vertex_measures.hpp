#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chatgraph/graph.hpp"

namespace chatgraph {

/// Free parameters of the parameterized measures.
///
/// Alpha and power centrality use an attenuation of `alpha_scale / B` and
/// `power_scale / B`, where B is the largest in- or out-strength of the view.
/// B bounds the spectral radius from above, so both series converge.
struct MeasureConfig {
  double pagerank_damping = 0.85;
  double alpha_scale = 0.5;
  double power_scale = 0.25;
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
  std::uint64_t community_seed = 1;
  CostMode cost_mode = CostMode::Reciprocal;
  std::size_t clique_vertex_limit = 512;

  void validate() const;
};

// Each measure comes as a whole-graph vector (index = VertexId) and a
// single-vertex form. Single-vertex forms throw Error on an unknown vertex.
// Direction follows the view: see GraphView.

/// Out-degree in the view divided by n - 1; 0 when n = 1.
std::vector<double> degree_centrality(const GraphView& view);
double degree_centrality(const GraphView& view, VertexId v);

std::vector<double> strength_centrality(const GraphView& view);
double strength_centrality(const GraphView& view, VertexId v);

/// Clustering coefficient on an undirected view. Weighted views give the
/// Barrat coefficient. Degree < 2 gives 0.
std::vector<double> local_transitivity(const GraphView& view);
double local_transitivity(const GraphView& view, VertexId v);

/// Burt's constraint. Isolates get 0 (and `degenerate` set when requested).
std::vector<double> burts_constraint(const GraphView& view);
double burts_constraint(const GraphView& view, VertexId v,
                        bool* degenerate = nullptr);

/// Unnormalized shortest-path betweenness (Brandes). Undirected views count
/// each unordered pair once.
std::vector<double> betweenness(const GraphView& view);
double betweenness(const GraphView& view, VertexId v);

/// (r - 1) / (sum of distances to the r - 1 reachable vertices); 0 for
/// vertices that reach nobody.
std::vector<double> closeness(const GraphView& view);
double closeness(const GraphView& view, VertexId v);

/// Largest distance to a reachable vertex; 0 for vertices that reach nobody.
std::vector<double> eccentricity(const GraphView& view);
double eccentricity(const GraphView& view, VertexId v);

/// Cut vertices of the undirected skeleton of the graph.
std::vector<bool> articulation_points(const ConversationalGraph& graph);
bool is_articulation_point(const ConversationalGraph& graph, VertexId v);

/// k-core index using view out-degree (in-degree on an In view).
std::vector<std::size_t> coreness(const GraphView& view);
std::size_t coreness(const GraphView& view, VertexId v);

// Spectral measures. The iterative ones throw ConvergenceError when they
// exhaust `config.max_iterations`; unsupported view variants throw Error.

/// Principal eigenvector of the adjacency (incoming sums on directed views),
/// scaled to max 1. Acyclic directed views give all zeros; edgeless views
/// give all ones.
std::vector<double> eigenvector_centrality(const GraphView& view,
                                           const MeasureConfig& config = {});

struct HitsScores {
  std::vector<double> hub;
  std::vector<double> authority;
};
/// HITS hub and authority scores, each scaled to max 1. Directed views only.
HitsScores hits(const GraphView& view, const MeasureConfig& config = {});

/// Solution of x = a * A^T x + 1. Directed views only.
std::vector<double> alpha_centrality(const GraphView& view,
                                     const MeasureConfig& config = {});

/// Bonacich power centrality (I - bA)^-1 A 1, rescaled so that the sum of
/// squares equals n. Unweighted directed views only.
std::vector<double> power_centrality(const GraphView& view,
                                     const MeasureConfig& config = {});

/// PageRank with uniform teleport and uniform redistribution of dangling
/// mass; sums to 1.
std::vector<double> pagerank(const GraphView& view,
                             const MeasureConfig& config = {});

/// Diagonal of exp(A). Unweighted undirected views only.
std::vector<double> subgraph_centrality(const GraphView& view);

/// Every spectral measure defined for the view's variant, evaluated at v.
std::map<std::string, double> spectral_centralities(
    const GraphView& view, VertexId v, const MeasureConfig& config = {});

}  // namespace chatgraph
