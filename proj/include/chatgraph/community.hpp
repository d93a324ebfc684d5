#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chatgraph/graph.hpp"

namespace chatgraph {

struct Partition {
  std::vector<std::size_t> assignment;  // vertex -> community id
  std::size_t community_count = 0;
};

/// Louvain-style greedy modularity maximization on the undirected form of
/// the view. `seed` fixes the vertex visiting order; equal gains go to the
/// lowest community id. Community ids are contiguous, numbered by first
/// member.
Partition detect_communities(const GraphView& view, std::uint64_t seed);

/// Newman modularity of `partition` on the undirected form of the view;
/// 0 when the view has no edges.
double modularity(const GraphView& view, const Partition& partition);

/// Community-relative position of one vertex. Degrees count arcs of the view
/// (in-arcs on an In view, out-arcs on an Out view).
struct VertexRoles {
  double within_module_degree = 0.0;  // z-score of internal degree
  double participation = 0.0;
  double external_intensity = 0.0;  // z-score of external degree
  double diversity = 0.0;
  double heterogeneity = 0.0;  // z-score of the spread of external links
};

std::vector<VertexRoles> vertex_roles(const GraphView& view,
                                      const Partition& partition);
VertexRoles vertex_roles(const GraphView& view, const Partition& partition,
                         VertexId v);

}  // namespace chatgraph
