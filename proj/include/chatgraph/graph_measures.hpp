#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chatgraph/graph.hpp"

namespace chatgraph {

/// A value that may come from an undefined case (reported as 0).
struct Flagged {
  double value = 0.0;
  bool degenerate = false;
};

struct BasicStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;
};
BasicStats basic_stats(const ConversationalGraph& graph);

/// 3 * triangles / connected triples of the undirected unweighted skeleton.
double global_transitivity(const ConversationalGraph& graph);

/// Fraction of directed edges whose reverse also exists. Throws Error on an
/// undirected graph.
Flagged reciprocity(const ConversationalGraph& graph);

/// Degree assortativity. The directed form correlates the source's
/// out-degree with the target's in-degree over all edges.
Flagged assortativity(const ConversationalGraph& graph, bool directed);

struct ComponentCounts {
  std::size_t weak = 0;
  std::size_t strong = 0;
};
ComponentCounts components(const ConversationalGraph& graph);

struct Connectivity {
  std::size_t adhesion = 0;  // edge connectivity
  std::size_t cohesion = 0;  // vertex connectivity
};
/// Directed connectivity on a directed graph, undirected otherwise. Graphs
/// that are not (strongly) connected or have fewer than 2 vertices give 0;
/// complete graphs give cohesion n - 1.
Connectivity connectivity(const ConversationalGraph& graph);

std::size_t articulation_point_count(const ConversationalGraph& graph);

struct DistanceStats {
  double diameter = 0.0;
  double radius = 0.0;
  double average_distance = 0.0;
  bool degenerate = false;
};
/// Over reachable ordered pairs only. The radius is the smallest
/// eccentricity among vertices that reach at least one other vertex.
DistanceStats distance_stats(const GraphView& view);

/// Maximal cliques of size >= 2 in the undirected skeleton. Throws Error
/// when the graph has more than `vertex_limit` vertices.
std::size_t clique_count(const ConversationalGraph& graph,
                         std::size_t vertex_limit = 512);

double average_over_vertices(std::span<const double> values);

}  // namespace chatgraph
