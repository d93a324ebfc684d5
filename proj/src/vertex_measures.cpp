#include "chatgraph/vertex_measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <unordered_map>

#include "chatgraph/error.hpp"
#include "chatgraph/paths.hpp"

namespace chatgraph {

namespace {

void check_vertex(std::size_t n, VertexId v) {
  if (v >= n) throw Error("unknown vertex id " + std::to_string(v));
}

template <typename T>
T at_vertex(const std::vector<T>& values, VertexId v) {
  check_vertex(values.size(), v);
  return values[v];
}

}  // namespace

void MeasureConfig::validate() const {
  if (!(pagerank_damping > 0.0 && pagerank_damping < 1.0)) {
    throw Error("pagerank damping must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) throw Error("iteration tolerance must be positive");
  if (max_iterations == 0) throw Error("max_iterations must be positive");
}

std::vector<double> degree_centrality(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (VertexId v = 0; v < n; ++v) {
    out[v] = static_cast<double>(view.out(v).size()) / static_cast<double>(n - 1);
  }
  return out;
}

double degree_centrality(const GraphView& view, VertexId v) {
  check_vertex(view.vertex_count(), v);
  const std::size_t n = view.vertex_count();
  return n < 2 ? 0.0
               : static_cast<double>(view.out(v).size()) /
                     static_cast<double>(n - 1);
}

std::vector<double> strength_centrality(const GraphView& view) {
  std::vector<double> out(view.vertex_count(), 0.0);
  for (VertexId v = 0; v < out.size(); ++v) {
    for (const Arc& a : view.out(v)) out[v] += a.weight;
  }
  return out;
}

double strength_centrality(const GraphView& view, VertexId v) {
  check_vertex(view.vertex_count(), v);
  double s = 0.0;
  for (const Arc& a : view.out(v)) s += a.weight;
  return s;
}

double local_transitivity(const GraphView& view, VertexId v) {
  check_vertex(view.vertex_count(), v);
  if (view.directed()) throw Error("local transitivity needs an undirected view");
  auto nbrs = view.out(v);
  const std::size_t k = nbrs.size();
  if (k < 2) return 0.0;
  double strength = 0.0;
  for (const Arc& a : nbrs) strength += a.weight;
  double closed = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (view.weight(nbrs[i].to, nbrs[j].to) > 0.0) {
        // Ordered pairs (i, j) and (j, i) each contribute (w_i + w_j) / 2.
        closed += nbrs[i].weight + nbrs[j].weight;
      }
    }
  }
  return closed / (strength * static_cast<double>(k - 1));
}

std::vector<double> local_transitivity(const GraphView& view) {
  std::vector<double> out(view.vertex_count());
  for (VertexId v = 0; v < out.size(); ++v) out[v] = local_transitivity(view, v);
  return out;
}

namespace {

// Symmetrized tie strengths: w(v->u) + w(u->v) on directed views.
std::vector<std::unordered_map<VertexId, double>> mutual_ties(
    const GraphView& view) {
  std::vector<std::unordered_map<VertexId, double>> ties(view.vertex_count());
  for (VertexId v = 0; v < ties.size(); ++v) {
    for (const Arc& a : view.out(v)) ties[v][a.to] += a.weight;
    if (view.directed()) {
      for (const Arc& a : view.in(v)) ties[v][a.to] += a.weight;
    }
  }
  return ties;
}

double constraint_of(const std::vector<std::unordered_map<VertexId, double>>& ties,
                     const std::vector<double>& totals, VertexId v) {
  auto p = [&](VertexId a, VertexId b) {
    auto it = ties[a].find(b);
    return it == ties[a].end() ? 0.0 : it->second / totals[a];
  };
  // Visit neighbours in id order so the floating-point sum is reproducible.
  std::vector<VertexId> nbrs;
  for (const auto& [u, w] : ties[v]) nbrs.push_back(u);
  std::sort(nbrs.begin(), nbrs.end());
  double c = 0.0;
  for (VertexId j : nbrs) {
    double indirect = 0.0;
    for (VertexId q : nbrs) {
      if (q != j) indirect += p(v, q) * p(q, j);
    }
    double term = p(v, j) + indirect;
    c += term * term;
  }
  return c;
}

}  // namespace

std::vector<double> burts_constraint(const GraphView& view) {
  auto ties = mutual_ties(view);
  std::vector<double> totals(ties.size(), 0.0);
  for (VertexId v = 0; v < ties.size(); ++v) {
    for (const auto& [u, w] : ties[v]) totals[v] += w;
  }
  std::vector<double> out(ties.size(), 0.0);
  for (VertexId v = 0; v < ties.size(); ++v) {
    if (!ties[v].empty()) out[v] = constraint_of(ties, totals, v);
  }
  return out;
}

double burts_constraint(const GraphView& view, VertexId v, bool* degenerate) {
  check_vertex(view.vertex_count(), v);
  bool isolate = view.out(v).empty() && view.in(v).empty();
  if (degenerate != nullptr) *degenerate = isolate;
  return burts_constraint(view)[v];
}

std::vector<double> betweenness(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  std::vector<double> score(n, 0.0);
  std::vector<double> sigma(n), delta(n), dist(n);
  std::vector<std::vector<VertexId>> preds(n);
  std::vector<VertexId> order;
  order.reserve(n);

  for (VertexId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), kUnreachable);
    for (auto& p : preds) p.clear();
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0.0;

    if (!view.weighted()) {
      std::deque<VertexId> queue{s};
      while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (const Arc& a : view.out(u)) {
          if (dist[a.to] == kUnreachable) {
            dist[a.to] = dist[u] + 1.0;
            queue.push_back(a.to);
          }
          if (dist[a.to] == dist[u] + 1.0) {
            sigma[a.to] += sigma[u];
            preds[a.to].push_back(u);
          }
        }
      }
    } else {
      using Item = std::pair<double, VertexId>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      std::vector<bool> settled(n, false);
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d > dist[u]) continue;
        settled[u] = true;
        order.push_back(u);
        for (const Arc& a : view.out(u)) {
          if (settled[a.to]) continue;
          double nd = dist[u] + view.cost(a);
          if (dist[a.to] != kUnreachable && same_length(nd, dist[a.to])) {
            sigma[a.to] += sigma[u];
            preds[a.to].push_back(u);
          } else if (nd < dist[a.to]) {
            dist[a.to] = nd;
            sigma[a.to] = sigma[u];
            preds[a.to].assign(1, u);
            heap.emplace(nd, a.to);
          }
        }
      }
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      VertexId w = *it;
      for (VertexId u : preds[w]) {
        delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) score[w] += delta[w];
    }
  }
  if (!view.directed()) {
    for (double& x : score) x /= 2.0;
  }
  return score;
}

double betweenness(const GraphView& view, VertexId v) {
  return at_vertex(betweenness(view), v);
}

double closeness(const GraphView& view, VertexId v) {
  check_vertex(view.vertex_count(), v);
  auto dist = distances_from(view, v);
  double total = 0.0;
  std::size_t reached = 0;
  for (VertexId u = 0; u < dist.size(); ++u) {
    if (u == v || dist[u] == kUnreachable) continue;
    total += dist[u];
    ++reached;
  }
  return reached == 0 ? 0.0 : static_cast<double>(reached) / total;
}

std::vector<double> closeness(const GraphView& view) {
  std::vector<double> out(view.vertex_count());
  for (VertexId v = 0; v < out.size(); ++v) out[v] = closeness(view, v);
  return out;
}

double eccentricity(const GraphView& view, VertexId v) {
  check_vertex(view.vertex_count(), v);
  double ecc = 0.0;
  for (double d : distances_from(view, v)) {
    if (d != kUnreachable) ecc = std::max(ecc, d);
  }
  return ecc;
}

std::vector<double> eccentricity(const GraphView& view) {
  std::vector<double> out(view.vertex_count());
  for (VertexId v = 0; v < out.size(); ++v) out[v] = eccentricity(view, v);
  return out;
}

std::vector<bool> articulation_points(const ConversationalGraph& graph) {
  GraphView g(graph, false, Direction::Undirected);
  const std::size_t n = g.vertex_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> cut(n, false);
  int timer = 0;

  std::function<void(VertexId, int)> dfs = [&](VertexId u, int parent) {
    disc[u] = low[u] = timer++;
    int children = 0;
    for (const Arc& a : g.out(u)) {
      VertexId w = a.to;
      if (disc[w] < 0) {
        ++children;
        dfs(w, static_cast<int>(u));
        low[u] = std::min(low[u], low[w]);
        if (parent >= 0 && low[w] >= disc[u]) cut[u] = true;
      } else if (static_cast<int>(w) != parent) {
        low[u] = std::min(low[u], disc[w]);
      }
    }
    if (parent < 0 && children > 1) cut[u] = true;
  };
  for (VertexId v = 0; v < n; ++v) {
    if (disc[v] < 0) dfs(v, -1);
  }
  return cut;
}

bool is_articulation_point(const ConversationalGraph& graph, VertexId v) {
  check_vertex(graph.vertex_count(), v);
  return articulation_points(graph)[v];
}

std::vector<std::size_t> coreness(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  std::vector<std::size_t> deg(n), core(n, 0);
  std::vector<bool> removed(n, false);
  for (VertexId v = 0; v < n; ++v) deg[v] = view.out(v).size();
  std::size_t k = 0;
  for (std::size_t step = 0; step < n; ++step) {
    VertexId best = 0;
    std::size_t best_deg = SIZE_MAX;
    for (VertexId v = 0; v < n; ++v) {
      if (!removed[v] && deg[v] < best_deg) {
        best = v;
        best_deg = deg[v];
      }
    }
    k = std::max(k, best_deg);
    core[best] = k;
    removed[best] = true;
    for (const Arc& a : view.in(best)) {
      if (!removed[a.to]) --deg[a.to];
    }
  }
  return core;
}

std::size_t coreness(const GraphView& view, VertexId v) {
  return at_vertex(coreness(view), v);
}

}  // namespace chatgraph
