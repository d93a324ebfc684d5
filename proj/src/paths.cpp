#include "chatgraph/paths.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <queue>

namespace chatgraph {

std::vector<double> distances_from(const GraphView& view, VertexId source) {
  const std::size_t n = view.vertex_count();
  std::vector<double> dist(n, kUnreachable);
  dist[source] = 0.0;
  if (!view.weighted()) {
    std::deque<VertexId> queue{source};
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      for (const Arc& a : view.out(u)) {
        if (dist[a.to] == kUnreachable) {
          dist[a.to] = dist[u] + 1.0;
          queue.push_back(a.to);
        }
      }
    }
    return dist;
  }
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const Arc& a : view.out(u)) {
      double nd = d + view.cost(a);
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        heap.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

std::vector<std::vector<double>> all_distances(const GraphView& view) {
  std::vector<std::vector<double>> out;
  out.reserve(view.vertex_count());
  for (VertexId v = 0; v < view.vertex_count(); ++v) {
    out.push_back(distances_from(view, v));
  }
  return out;
}

}  // namespace chatgraph
