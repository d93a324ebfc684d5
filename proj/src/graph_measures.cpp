#include "chatgraph/graph_measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>

#include "chatgraph/error.hpp"
#include "chatgraph/paths.hpp"
#include "chatgraph/vertex_measures.hpp"

namespace chatgraph {

BasicStats basic_stats(const ConversationalGraph& graph) {
  BasicStats s;
  s.vertex_count = graph.vertex_count();
  s.edge_count = graph.edge_count();
  if (s.vertex_count > 1) {
    double n = static_cast<double>(s.vertex_count);
    double possible = graph.directed() ? n * (n - 1.0) : n * (n - 1.0) / 2.0;
    s.density = static_cast<double>(s.edge_count) / possible;
  }
  return s;
}

double global_transitivity(const ConversationalGraph& graph) {
  GraphView g(graph, false, Direction::Undirected);
  double triangles3 = 0.0;  // each triangle is seen once per corner
  double triples = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto nbrs = g.out(v);
    double k = static_cast<double>(nbrs.size());
    triples += k * (k - 1.0) / 2.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (g.weight(nbrs[i].to, nbrs[j].to) > 0.0) triangles3 += 1.0;
  }
  return triples == 0.0 ? 0.0 : triangles3 / triples;
}

Flagged reciprocity(const ConversationalGraph& graph) {
  if (!graph.directed()) throw Error("reciprocity needs a directed graph");
  if (graph.edge_count() == 0) return {0.0, true};
  std::size_t mutual = 0;
  for (const auto& [key, w] : graph.edges()) {
    if (graph.edges().count({key.second, key.first}) != 0) ++mutual;
  }
  return {static_cast<double>(mutual) / static_cast<double>(graph.edge_count()),
          false};
}

Flagged assortativity(const ConversationalGraph& graph, bool directed) {
  std::vector<double> xs, ys;
  if (directed && graph.directed()) {
    GraphView g(graph, false, Direction::Directed);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      for (const Arc& a : g.out(u)) {
        xs.push_back(static_cast<double>(g.out(u).size()));
        ys.push_back(static_cast<double>(g.in(a.to).size()));
      }
    }
  } else {
    GraphView g(graph, false, Direction::Undirected);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      for (const Arc& a : g.out(u)) {
        xs.push_back(static_cast<double>(g.out(u).size()));
        ys.push_back(static_cast<double>(g.out(a.to).size()));
      }
    }
  }
  if (xs.empty()) return {0.0, true};
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 1e-12 * m || syy <= 1e-12 * m) return {0.0, true};
  return {sxy / std::sqrt(sxx * syy), false};
}

namespace {

std::size_t weak_count(const GraphView& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    seen[s] = true;
    stack.assign(1, s);
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      auto visit = [&](const Arc& a) {
        if (!seen[a.to]) {
          seen[a.to] = true;
          stack.push_back(a.to);
        }
      };
      for (const Arc& a : g.out(u)) visit(a);
      for (const Arc& a : g.in(u)) visit(a);
    }
  }
  return count;
}

std::size_t strong_count(const GraphView& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  int next = 0;
  std::size_t count = 0;
  std::function<void(VertexId)> connect = [&](VertexId v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const Arc& a : g.out(v)) {
      if (index[a.to] < 0) {
        connect(a.to);
        low[v] = std::min(low[v], low[a.to]);
      } else if (on_stack[a.to]) {
        low[v] = std::min(low[v], index[a.to]);
      }
    }
    if (low[v] == index[v]) {
      ++count;
      VertexId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
      } while (w != v);
    }
  };
  for (VertexId v = 0; v < n; ++v)
    if (index[v] < 0) connect(v);
  return count;
}

// Unit-capacity max-flow with early exit once `limit` units are found.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : head_(n, -1) {}

  void add_arc(std::size_t from, std::size_t to, int cap) {
    arcs_.push_back({to, cap, head_[from]});
    head_[from] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({from, 0, head_[to]});
    head_[to] = static_cast<int>(arcs_.size()) - 1;
  }

  std::size_t max_flow(std::size_t s, std::size_t t, std::size_t limit) {
    for (std::size_t i = 0; i < arcs_.size(); ++i) arcs_[i].flow = 0;
    std::size_t flow = 0;
    std::vector<int> via(head_.size());
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -2);
      via[s] = -1;
      std::deque<std::size_t> queue{s};
      while (!queue.empty() && via[t] == -2) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (int e = head_[u]; e >= 0; e = arcs_[e].next) {
          const auto& arc = arcs_[e];
          if (arc.cap - arc.flow > 0 && via[arc.to] == -2) {
            via[arc.to] = e;
            queue.push_back(arc.to);
          }
        }
      }
      if (via[t] == -2) break;
      for (std::size_t v = t; v != s;) {
        int e = via[v];
        arcs_[e].flow += 1;
        arcs_[e ^ 1].flow -= 1;
        v = arcs_[e ^ 1].to;
      }
      ++flow;
    }
    return flow;
  }

 private:
  struct FlowArc {
    std::size_t to;
    int cap;
    int next;
    int flow = 0;
  };
  std::vector<int> head_;
  std::vector<FlowArc> arcs_;
};

}  // namespace

ComponentCounts components(const ConversationalGraph& graph) {
  GraphView g(graph, false,
              graph.directed() ? Direction::Directed : Direction::Undirected);
  ComponentCounts c;
  c.weak = weak_count(g);
  c.strong = graph.directed() ? strong_count(g) : c.weak;
  return c;
}

Connectivity connectivity(const ConversationalGraph& graph) {
  GraphView g(graph, false,
              graph.directed() ? Direction::Directed : Direction::Undirected);
  const std::size_t n = g.vertex_count();
  Connectivity result;
  if (n < 2 || strong_count(g) != 1) return result;

  std::size_t min_degree = SIZE_MAX;
  for (VertexId v = 0; v < n; ++v) {
    min_degree = std::min({min_degree, g.out(v).size(), g.in(v).size()});
  }

  // Edge connectivity: every minimum cut separates vertex 0 from some t.
  FlowNetwork edges(n);
  for (VertexId u = 0; u < n; ++u)
    for (const Arc& a : g.out(u)) edges.add_arc(u, a.to, 1);
  std::size_t adhesion = min_degree;
  for (VertexId t = 1; t < n && adhesion > 0; ++t) {
    adhesion = std::min(adhesion, edges.max_flow(0, t, adhesion));
    adhesion = std::min(adhesion, edges.max_flow(t, 0, adhesion));
  }
  result.adhesion = adhesion;

  // Vertex connectivity over split vertices v_in = 2v, v_out = 2v + 1. Some
  // vertex among the first kappa + 1 lies outside any minimum separator.
  FlowNetwork split(2 * n);
  const int big = static_cast<int>(n);
  for (VertexId v = 0; v < n; ++v) split.add_arc(2 * v, 2 * v + 1, 1);
  for (VertexId u = 0; u < n; ++u)
    for (const Arc& a : g.out(u)) split.add_arc(2 * u + 1, 2 * a.to, big);
  std::size_t cohesion = n - 1;
  auto local = [&](VertexId s, VertexId t) {
    if (g.weight(s, t) > 0.0) return;
    cohesion = std::min(cohesion, split.max_flow(2 * s + 1, 2 * t, cohesion));
  };
  for (VertexId i = 0; i < n && i <= cohesion; ++i) {
    for (VertexId j = 0; j < n; ++j) {
      if (j == i) continue;
      local(i, j);
      local(j, i);
    }
  }
  result.cohesion = cohesion;
  return result;
}

std::size_t articulation_point_count(const ConversationalGraph& graph) {
  auto cut = articulation_points(graph);
  return static_cast<std::size_t>(std::count(cut.begin(), cut.end(), true));
}

DistanceStats distance_stats(const GraphView& view) {
  DistanceStats s;
  double total = 0.0;
  std::size_t pairs = 0;
  double radius = kUnreachable;
  for (VertexId v = 0; v < view.vertex_count(); ++v) {
    auto dist = distances_from(view, v);
    double ecc = 0.0;
    bool reaches = false;
    for (VertexId u = 0; u < dist.size(); ++u) {
      if (u == v || dist[u] == kUnreachable) continue;
      reaches = true;
      ecc = std::max(ecc, dist[u]);
      total += dist[u];
      ++pairs;
    }
    if (reaches) {
      s.diameter = std::max(s.diameter, ecc);
      radius = std::min(radius, ecc);
    }
  }
  if (pairs == 0) {
    s.degenerate = true;
    return s;
  }
  s.radius = radius;
  s.average_distance = total / static_cast<double>(pairs);
  return s;
}

namespace {

class CliqueCounter {
 public:
  explicit CliqueCounter(const GraphView& g) : n_(g.vertex_count()) {
    words_ = (n_ + 63) / 64;
    adj_.assign(n_, Bits(words_, 0));
    for (VertexId v = 0; v < n_; ++v)
      for (const Arc& a : g.out(v)) set(adj_[v], a.to);
  }

  std::size_t count() {
    Bits p(words_, 0), x(words_, 0);
    for (std::size_t v = 0; v < n_; ++v) set(p, v);
    found_ = 0;
    expand(p, x, 0);
    return found_;
  }

 private:
  using Bits = std::vector<std::uint64_t>;

  static void set(Bits& b, std::size_t i) { b[i / 64] |= (1ULL << (i % 64)); }
  static void clear(Bits& b, std::size_t i) { b[i / 64] &= ~(1ULL << (i % 64)); }

  static std::size_t popcount_and(const Bits& a, const Bits& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += __builtin_popcountll(a[i] & b[i]);
    return c;
  }
  static bool empty(const Bits& b) {
    return std::all_of(b.begin(), b.end(), [](std::uint64_t w) { return w == 0; });
  }

  void expand(Bits& p, Bits& x, std::size_t depth) {
    if (empty(p)) {
      if (empty(x) && depth >= 2) ++found_;
      return;
    }
    // Pivot: vertex of P u X with most neighbours in P.
    std::size_t pivot = 0, best = 0;
    bool have = false;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = p[w] | x[w];
      while (bits) {
        std::size_t u = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        std::size_t c = popcount_and(adj_[u], p);
        if (!have || c > best) {
          pivot = u;
          best = c;
          have = true;
        }
      }
    }
    Bits candidates(words_);
    for (std::size_t w = 0; w < words_; ++w) candidates[w] = p[w] & ~adj_[pivot][w];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = candidates[w];
      while (bits) {
        std::size_t v = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        Bits np(words_), nx(words_);
        for (std::size_t i = 0; i < words_; ++i) {
          np[i] = p[i] & adj_[v][i];
          nx[i] = x[i] & adj_[v][i];
        }
        expand(np, nx, depth + 1);
        clear(p, v);
        set(x, v);
      }
    }
  }

  std::size_t n_;
  std::size_t words_;
  std::vector<Bits> adj_;
  std::size_t found_ = 0;
};

}  // namespace

std::size_t clique_count(const ConversationalGraph& graph, std::size_t vertex_limit) {
  if (graph.vertex_count() > vertex_limit) {
    throw Error("clique count refused: " + std::to_string(graph.vertex_count()) +
                " vertices exceed the limit of " + std::to_string(vertex_limit));
  }
  GraphView g(graph, false, Direction::Undirected);
  return CliqueCounter(g).count();
}

double average_over_vertices(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace chatgraph
