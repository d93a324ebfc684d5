#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "chatgraph/error.hpp"
#include "chatgraph/vertex_measures.hpp"

namespace chatgraph {

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool scale_to_max(std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return false;
  for (double& v : x) v /= m;
  return true;
}

bool has_cycle(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  std::vector<std::size_t> indeg(n, 0);
  for (VertexId v = 0; v < n; ++v) indeg[v] = view.in(v).size();
  std::vector<VertexId> stack;
  for (VertexId v = 0; v < n; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  std::size_t seen = 0;
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    ++seen;
    for (const Arc& a : view.out(u)) {
      if (--indeg[a.to] == 0) stack.push_back(a.to);
    }
  }
  return seen < n;
}

double strength_bound(const GraphView& view) {
  double bound = 0.0;
  for (VertexId v = 0; v < view.vertex_count(); ++v) {
    double out = 0.0, in = 0.0;
    for (const Arc& a : view.out(v)) out += a.weight;
    for (const Arc& a : view.in(v)) in += a.weight;
    bound = std::max({bound, out, in});
  }
  return bound;
}

std::vector<std::size_t> strong_labels(const GraphView& view, std::size_t& count) {
  const std::size_t n = view.vertex_count();
  std::vector<VertexId> order;
  std::vector<bool> seen(n, false);
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<VertexId, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto arcs = view.out(v);
      if (next < arcs.size()) {
        VertexId w = arcs[next++].to;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, kNone);
  count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (label[*it] != kNone) continue;
    std::vector<VertexId> stack{*it};
    label[*it] = count;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const Arc& a : view.in(v)) {
        if (label[a.to] == kNone) {
          label[a.to] = count;
          stack.push_back(a.to);
        }
      }
    }
    ++count;
  }
  return label;
}

// Two strong components sharing the largest Perron root make the iteration
// matrix defective, so power iteration only creeps towards its limit. The
// eigenvector is still unique there and comes out of the null space directly.
std::optional<std::vector<double>> defective_perron_vector(const GraphView& view) {
  const std::size_t n = view.vertex_count();
  std::size_t count = 0;
  const auto label = strong_labels(view, count);
  std::vector<std::vector<VertexId>> members(count);
  for (VertexId v = 0; v < n; ++v) members[label[v]].push_back(v);

  std::vector<double> roots(count, 0.0);
  for (std::size_t c = 0; c < count; ++c) {
    const auto& vs = members[c];
    if (vs.size() < 2) continue;
    std::vector<std::size_t> local(n, 0);
    for (std::size_t i = 0; i < vs.size(); ++i) local[vs[i]] = i;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(vs.size(), vs.size());
    for (VertexId v : vs)
      for (const Arc& a : view.out(v))
        if (label[a.to] == c) block(local[v], local[a.to]) += a.weight;
    roots[c] = Eigen::EigenSolver<Eigen::MatrixXd>(block, false).eigenvalues().cwiseAbs().maxCoeff();
  }
  const double rho = *std::max_element(roots.begin(), roots.end());
  if (rho <= 0.0) return std::nullopt;
  const auto tied = std::count_if(roots.begin(), roots.end(),
                                  [&](double r) { return r >= rho * (1.0 - 1e-9); });
  if (tied < 2) return std::nullopt;

  Eigen::MatrixXd m = -rho * Eigen::MatrixXd::Identity(n, n);
  for (VertexId u = 0; u < n; ++u)
    for (const Arc& a : view.out(u)) m(a.to, u) += a.weight;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (n >= 2 && sigma(n - 2) <= 1e-6 * rho) return std::nullopt;
  Eigen::VectorXd v = svd.matrixV().col(n - 1);
  if (v.sum() < 0) v = -v;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::abs(v(i)) < 1e-12 ? 0.0 : v(i);
  if (*std::min_element(x.begin(), x.end()) < 0.0) return std::nullopt;
  scale_to_max(x);
  return x;
}

void require_directed(const GraphView& view, const char* what) {
  if (view.mode() != Direction::Directed) {
    throw Error(std::string(what) + " is only defined on a directed view");
  }
}

}  // namespace

std::vector<double> eigenvector_centrality(const GraphView& view,
                                           const MeasureConfig& config) {
  config.validate();
  const std::size_t n = view.vertex_count();
  if (view.edge_count() == 0) return std::vector<double>(n, n > 0 ? 1.0 : 0.0);
  if (view.directed() && !has_cycle(view)) return std::vector<double>(n, 0.0);

  // Iterating with A^T + I keeps the eigenvectors and makes the Perron root
  // strictly dominant on bipartite and periodic structure.
  std::vector<double> x(n, 1.0), next(n);
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (VertexId v = 0; v < n; ++v) {
      double s = x[v];
      for (const Arc& a : view.in(v)) s += a.weight * x[a.to];
      next[v] = s;
    }
    scale_to_max(next);
    if (max_abs_diff(next, x) < config.tolerance) {
      x.swap(next);
      return x;
    }
    x.swap(next);
  }
  if (auto exact = defective_perron_vector(view)) return *exact;
  throw ConvergenceError("eigenvector centrality", config.max_iterations);
}

HitsScores hits(const GraphView& view, const MeasureConfig& config) {
  config.validate();
  require_directed(view, "HITS");
  const std::size_t n = view.vertex_count();
  HitsScores scores{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (view.edge_count() == 0) return scores;

  std::vector<double> auth(n, 1.0), hub(n), next(n);
  auto hubs_from = [&](const std::vector<double>& a, std::vector<double>& h) {
    for (VertexId u = 0; u < n; ++u) {
      double s = 0.0;
      for (const Arc& arc : view.out(u)) s += arc.weight * a[arc.to];
      h[u] = s;
    }
  };
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    hubs_from(auth, hub);
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const Arc& arc : view.in(v)) s += arc.weight * hub[arc.to];
      next[v] = s;
    }
    scale_to_max(next);
    if (max_abs_diff(next, auth) < config.tolerance) {
      scores.authority = next;
      hubs_from(next, scores.hub);
      scale_to_max(scores.hub);
      return scores;
    }
    auth.swap(next);
  }
  throw ConvergenceError("HITS", config.max_iterations);
}

std::vector<double> alpha_centrality(const GraphView& view,
                                     const MeasureConfig& config) {
  config.validate();
  require_directed(view, "alpha centrality");
  const std::size_t n = view.vertex_count();
  std::vector<double> x(n, 1.0), next(n);
  const double bound = strength_bound(view);
  if (bound == 0.0) return x;
  const double alpha = config.alpha_scale / bound;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const Arc& a : view.in(v)) s += a.weight * x[a.to];
      next[v] = alpha * s + 1.0;
    }
    double diff = max_abs_diff(next, x);
    x.swap(next);
    if (diff < config.tolerance) return x;
  }
  throw ConvergenceError("alpha centrality", config.max_iterations);
}

std::vector<double> power_centrality(const GraphView& view,
                                     const MeasureConfig& config) {
  config.validate();
  require_directed(view, "power centrality");
  if (view.weighted()) throw Error("power centrality needs an unweighted view");
  const std::size_t n = view.vertex_count();
  std::vector<double> c(n, 0.0), next(n), base(n);
  const double bound = strength_bound(view);
  if (bound == 0.0) return c;
  const double beta = config.power_scale / bound;
  for (VertexId v = 0; v < n; ++v) base[v] = static_cast<double>(view.out(v).size());
  c = base;
  bool converged = false;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const Arc& a : view.out(v)) s += a.weight * c[a.to];
      next[v] = base[v] + beta * s;
    }
    double diff = max_abs_diff(next, c);
    c.swap(next);
    if (diff < config.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("power centrality", config.max_iterations);
  double sq = 0.0;
  for (double v : c) sq += v * v;
  const double scale = std::sqrt(static_cast<double>(n) / sq);
  for (double& v : c) v *= scale;
  return c;
}

std::vector<double> pagerank(const GraphView& view, const MeasureConfig& config) {
  config.validate();
  const std::size_t n = view.vertex_count();
  if (n == 0) return {};
  const double d = config.pagerank_damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> out_strength(n, 0.0);
  for (VertexId v = 0; v < n; ++v)
    for (const Arc& a : view.out(v)) out_strength[v] += a.weight;

  std::vector<double> x(n, inv_n), next(n);
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    double dangling = 0.0;
    for (VertexId v = 0; v < n; ++v)
      if (out_strength[v] == 0.0) dangling += x[v];
    const double shared = (1.0 - d) * inv_n + d * dangling * inv_n;
    for (VertexId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const Arc& a : view.in(v)) s += a.weight / out_strength[a.to] * x[a.to];
      next[v] = shared + d * s;
    }
    double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= total;
    double diff = 0.0;
    for (VertexId v = 0; v < n; ++v) diff += std::abs(next[v] - x[v]);
    x.swap(next);
    if (diff < config.tolerance) return x;
  }
  throw ConvergenceError("pagerank", config.max_iterations);
}

std::vector<double> subgraph_centrality(const GraphView& view) {
  if (view.directed() || view.weighted()) {
    throw Error("subgraph centrality needs an unweighted undirected view");
  }
  const auto n = static_cast<Eigen::Index>(view.vertex_count());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (VertexId v = 0; v < view.vertex_count(); ++v)
    for (const Arc& a : view.out(v)) adj(v, a.to) = a.weight;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
  const Eigen::VectorXd expl = solver.eigenvalues().array().exp();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  std::vector<double> out(view.vertex_count());
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = (vecs.row(i).array().square() * expl.transpose().array()).sum();
  }
  return out;
}

std::map<std::string, double> spectral_centralities(const GraphView& view,
                                                    VertexId v,
                                                    const MeasureConfig& config) {
  if (v >= view.vertex_count()) throw Error("unknown vertex id " + std::to_string(v));
  std::map<std::string, double> out;
  out["eigenvector"] = eigenvector_centrality(view, config)[v];
  out["pagerank"] = pagerank(view, config)[v];
  if (view.mode() == Direction::Directed) {
    auto h = hits(view, config);
    out["hub"] = h.hub[v];
    out["authority"] = h.authority[v];
    out["alpha"] = alpha_centrality(view, config)[v];
    if (!view.weighted()) out["power"] = power_centrality(view, config)[v];
  }
  if (view.mode() == Direction::Undirected && !view.weighted()) {
    out["subgraph"] = subgraph_centrality(view)[v];
  }
  return out;
}

}  // namespace chatgraph
