#include "chatgraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chatgraph/error.hpp"
#include "chatgraph/rng.hpp"

namespace chatgraph {

namespace {

// Weighted undirected graph with self-loops, used between Louvain levels.
struct Level {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self;                                       // loop weight
  std::size_t size() const { return adj.size(); }
};

Level level_from_view(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  Level level;
  level.adj.resize(n);
  level.self.assign(n, 0.0);
  std::vector<std::map<std::size_t, double>> merged(n);
  for (VertexId v = 0; v < n; ++v) {
    for (const Arc& a : view.out(v)) {
      merged[v][a.to] += a.weight;
      if (view.directed()) merged[a.to][v] += a.weight;
    }
  }
  // Same merge rule as an undirected view: an unweighted pair counts once.
  if (!view.weighted())
    for (auto& row : merged)
      for (auto& [u, w] : row) w = 1.0;
  for (std::size_t v = 0; v < n; ++v)
    level.adj[v].assign(merged[v].begin(), merged[v].end());
  return level;
}

// One local-moving phase. Returns true if any vertex changed community.
bool local_moves(const Level& g, std::vector<std::size_t>& comm,
                 const std::vector<std::size_t>& order, double two_m) {
  const std::size_t n = g.size();
  std::vector<double> degree(n, 0.0), total(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = 2.0 * g.self[v];
    for (const auto& [u, w] : g.adj[v]) degree[v] += w;
    total[comm[v]] += degree[v];
  }
  bool changed_any = false;
  std::vector<double> links(n, 0.0);
  std::vector<std::size_t> touched;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t v : order) {
      const std::size_t own = comm[v];
      touched.clear();
      for (const auto& [u, w] : g.adj[v]) {
        if (links[comm[u]] == 0.0) touched.push_back(comm[u]);
        links[comm[u]] += w;
      }
      total[own] -= degree[v];
      const double own_links = links[own];
      double best_gain = own_links - total[own] * degree[v] / two_m;
      std::size_t best = own;
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        double gain = links[c] - total[c] * degree[v] / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      total[best] += degree[v];
      comm[v] = best;
      for (std::size_t c : touched) links[c] = 0.0;
      if (best != own) {
        moved = true;
        changed_any = true;
      }
    }
  }
  return changed_any;
}

std::size_t renumber(std::vector<std::size_t>& comm) {
  std::vector<std::size_t> map(comm.size(), SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : comm) {
    if (map[c] == SIZE_MAX) map[c] = next++;
    c = map[c];
  }
  return next;
}

Level aggregate(const Level& g, const std::vector<std::size_t>& comm,
                std::size_t count) {
  Level out;
  out.adj.resize(count);
  out.self.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> merged(count);
  for (std::size_t v = 0; v < g.size(); ++v) {
    out.self[comm[v]] += g.self[v];
    for (const auto& [u, w] : g.adj[v]) {
      if (comm[u] == comm[v]) {
        out.self[comm[v]] += w / 2.0;  // each internal edge is seen twice
      } else {
        merged[comm[v]][comm[u]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c)
    out.adj[c].assign(merged[c].begin(), merged[c].end());
  return out;
}

}  // namespace

Partition detect_communities(const GraphView& view, std::uint64_t seed) {
  const std::size_t n = view.vertex_count();
  Partition result;
  result.assignment.resize(n);
  std::iota(result.assignment.begin(), result.assignment.end(), 0);
  result.community_count = n;
  if (n == 0) return result;

  Level g = level_from_view(view);
  double two_m = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const auto& [u, w] : g.adj[v]) two_m += w;
  if (two_m == 0.0) return result;

  Rng rng(seed);
  while (true) {
    std::vector<std::size_t> comm(g.size());
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    if (!local_moves(g, comm, order, two_m)) break;
    std::size_t count = renumber(comm);
    for (auto& c : result.assignment) c = comm[c];
    g = aggregate(g, comm, count);
    if (count == 1) break;
  }
  result.community_count = renumber(result.assignment);
  return result;
}

double modularity(const GraphView& view, const Partition& partition) {
  const std::size_t n = view.vertex_count();
  if (partition.assignment.size() != n) {
    throw Error("partition covers " + std::to_string(partition.assignment.size()) +
                " vertices, graph has " + std::to_string(n));
  }
  Level g = level_from_view(view);
  double two_m = 0.0;
  std::size_t count = 0;
  for (auto c : partition.assignment) count = std::max(count, c + 1);
  std::vector<double> internal(count, 0.0), total(count, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [u, w] : g.adj[v]) {
      two_m += w;
      total[partition.assignment[v]] += w;
      if (partition.assignment[u] == partition.assignment[v])
        internal[partition.assignment[v]] += w;
    }
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    q += internal[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

namespace {

void zscore_within(const std::vector<double>& values,
                   const std::vector<std::size_t>& comm, std::size_t count,
                   std::vector<double>& out) {
  std::vector<double> sum(count, 0.0), sq(count, 0.0), size(count, 0.0);
  for (std::size_t v = 0; v < values.size(); ++v) {
    sum[comm[v]] += values[v];
    size[comm[v]] += 1.0;
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    double mean = sum[comm[v]] / size[comm[v]];
    sq[comm[v]] += (values[v] - mean) * (values[v] - mean);
  }
  out.assign(values.size(), 0.0);
  for (std::size_t v = 0; v < values.size(); ++v) {
    std::size_t c = comm[v];
    double sd = std::sqrt(sq[c] / size[c]);
    if (size[c] < 2.0 || sd <= 1e-12) continue;
    out[v] = (values[v] - sum[c] / size[c]) / sd;
  }
}

}  // namespace

std::vector<VertexRoles> vertex_roles(const GraphView& view,
                                      const Partition& partition) {
  const std::size_t n = view.vertex_count();
  if (partition.assignment.size() != n) {
    throw Error("partition does not match the graph");
  }
  const auto& comm = partition.assignment;
  std::size_t count = 0;
  for (auto c : comm) count = std::max(count, c + 1);

  std::vector<double> internal(n, 0.0), external(n, 0.0), spread(n, 0.0);
  std::vector<VertexRoles> roles(n);
  std::vector<double> per(count, 0.0);
  for (VertexId v = 0; v < n; ++v) {
    std::fill(per.begin(), per.end(), 0.0);
    double k = 0.0;
    for (const Arc& a : view.out(v)) {
      per[comm[a.to]] += 1.0;
      k += 1.0;
    }
    internal[v] = per[comm[v]];
    external[v] = k - internal[v];
    if (k > 0.0) {
      double s = 0.0;
      for (double x : per) s += (x / k) * (x / k);
      roles[v].participation = 1.0 - s;
    }
    if (count > 1) {
      std::size_t touched = 0;
      double mean = external[v] / static_cast<double>(count - 1);
      double var = 0.0;
      for (std::size_t c = 0; c < count; ++c) {
        if (c == comm[v]) continue;
        if (per[c] > 0.0) ++touched;
        var += (per[c] - mean) * (per[c] - mean);
      }
      roles[v].diversity =
          static_cast<double>(touched) / static_cast<double>(count - 1);
      spread[v] = std::sqrt(var / static_cast<double>(count - 1));
    }
  }
  std::vector<double> z;
  zscore_within(internal, comm, count, z);
  for (VertexId v = 0; v < n; ++v) roles[v].within_module_degree = z[v];
  zscore_within(external, comm, count, z);
  for (VertexId v = 0; v < n; ++v) roles[v].external_intensity = z[v];
  zscore_within(spread, comm, count, z);
  for (VertexId v = 0; v < n; ++v) roles[v].heterogeneity = z[v];
  return roles;
}

VertexRoles vertex_roles(const GraphView& view, const Partition& partition,
                         VertexId v) {
  if (v >= view.vertex_count()) throw Error("unknown vertex id " + std::to_string(v));
  return vertex_roles(view, partition)[v];
}

}  // namespace chatgraph
