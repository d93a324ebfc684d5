#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chatgraph/graph.hpp"

namespace chatgraph {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Relative tolerance under which two weighted path lengths count as tied.
inline constexpr double kPathTieTolerance = 1e-12;

inline bool same_length(double a, double b) {
  return std::abs(a - b) <= kPathTieTolerance * std::max(1.0, std::max(a, b));
}

/// Distances from `source` along out-arcs of the view. Unweighted views use
/// BFS, weighted ones Dijkstra over `view.cost`.
std::vector<double> distances_from(const GraphView& view, VertexId source);

/// Row-major n x n distance matrix, kUnreachable where no path exists.
std::vector<std::vector<double>> all_distances(const GraphView& view);

}  // namespace chatgraph
