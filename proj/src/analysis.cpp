#include "chatgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "chatgraph/error.hpp"
#include "chatgraph/parallel.hpp"

namespace chatgraph {

namespace {

std::vector<double> column(const Dataset& data, std::size_t c) {
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = data.at(i, c);
  return out;
}

double variance(const std::vector<double>& x) {
  double m = 0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

std::vector<double> distances(const CorrelationMatrix& corr) {
  const std::size_t n = corr.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d[i * n + j] = 1.0 - std::abs(corr.at(i, j));
  return d;
}

}  // namespace

std::vector<std::size_t> constant_features(const Dataset& data, double tolerance) {
  if (data.rows() == 0) throw Error("no rows to inspect");
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (variance(column(data, c)) <= tolerance) out.push_back(c);
  }
  return out;
}

CorrelationMatrix pearson_matrix(const Dataset& data, std::size_t workers) {
  if (data.rows() < 2) throw Error("correlation needs at least 2 rows");
  const std::size_t n = data.cols();
  const std::size_t m = data.rows();
  CorrelationMatrix corr;
  corr.names = data.feature_names();
  corr.r.assign(n * n, 0.0);
  corr.constant.assign(n, false);
  std::vector<std::vector<double>> centered(n);
  std::vector<double> norm(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> x = column(data, c);
    corr.constant[c] = variance(x) <= kConstantFeatureTolerance;
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(m);
    for (double& v : x) v -= mean;
    double s = 0;
    for (double v : x) s += v * v;
    norm[c] = std::sqrt(s);
    centered[c] = std::move(x);
  }
  parallel_for(n, workers, [&](std::size_t i) {
    corr.r[i * n + i] = 1.0;
    if (corr.constant[i]) return;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (corr.constant[j]) continue;
      double s = 0;
      for (std::size_t k = 0; k < m; ++k) s += centered[i][k] * centered[j][k];
      double r = s / (norm[i] * norm[j]);
      r = std::clamp(r, -1.0, 1.0);
      corr.r[i * n + j] = r;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) corr.r[j * n + i] = corr.r[i * n + j];
  return corr;
}

std::vector<std::size_t> cut_dendrogram(const std::vector<Merge>& dendrogram, std::size_t n,
                                        std::size_t k) {
  if (k < 1 || k > n) throw Error("cut size out of range");
  // union-find over the first n - k merges
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s + k < n; ++s) {
    parent[find(dendrogram[s].left)] = n + s;
    parent[find(dendrogram[s].right)] = n + s;
  }
  std::vector<std::size_t> out(n);
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = find(i);
    auto it = ids.emplace(root, ids.size()).first;
    out[i] = it->second;
  }
  return out;
}

double mean_silhouette(const std::vector<double>& d, std::size_t n,
                       const std::vector<std::size_t>& assignment) {
  std::size_t k = 0;
  for (auto a : assignment) k = std::max(k, a + 1);
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignment) ++sizes[a];
  double total = 0;
  std::vector<double> sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[assignment[i]] <= 1) continue;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum[assignment[j]] += d[i * n + j];
    }
    const double a = sum[assignment[i]] / static_cast<double>(sizes[assignment[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != assignment[i]) b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0 && std::isfinite(b)) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

ClusterResult cluster_features(const CorrelationMatrix& corr) {
  const std::size_t n = corr.size();
  if (n < 3) throw Error("clustering needs at least 3 features");
  const std::vector<double> d = distances(corr);

  ClusterResult result;
  std::vector<double> dist = d;  // cluster-to-cluster average distances
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> size(n, 1), label(n);
  std::iota(label.begin(), label.end(), 0);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (alive[j] && dist[i * n + j] < best) {
          best = dist[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    Merge m;
    m.left = std::min(label[bi], label[bj]);
    m.right = std::max(label[bi], label[bj]);
    m.height = best;
    m.size = size[bi] + size[bj];
    result.dendrogram.push_back(m);
    for (std::size_t h = 0; h < n; ++h) {
      if (!alive[h] || h == bi || h == bj) continue;
      const double v = (static_cast<double>(size[bi]) * dist[bi * n + h] +
                        static_cast<double>(size[bj]) * dist[bj * n + h]) /
                       static_cast<double>(m.size);
      dist[bi * n + h] = dist[h * n + bi] = v;
    }
    alive[bj] = false;
    size[bi] = m.size;
    label[bi] = n + step;
  }

  result.silhouette.assign(n, 0.0);
  std::size_t best_k = 2;
  for (std::size_t k = 2; k + 1 <= n; ++k) {
    result.silhouette[k] = mean_silhouette(d, n, cut_dendrogram(result.dendrogram, n, k));
    if (result.silhouette[k] > result.silhouette[best_k] + kSilhouetteTieTolerance) {
      best_k = k;
    }
  }
  result.k = best_k;
  result.assignment = cut_dendrogram(result.dendrogram, n, best_k);
  result.witness_below = best_k > 2 ? result.silhouette[best_k - 1] : result.silhouette[best_k];
  result.witness_above =
      best_k + 1 < n ? result.silhouette[best_k + 1] : result.silhouette[best_k];
  result.witness_holds =
      result.silhouette[best_k] + kSilhouetteTieTolerance >= result.witness_below &&
      result.silhouette[best_k] + kSilhouetteTieTolerance >= result.witness_above;
  return result;
}

void write_cluster_report(std::ostream& out, const CorrelationMatrix& corr,
                          const ClusterResult& result) {
  const std::size_t n = corr.size();
  out << "# average linkage on 1 - |pearson r|; cut maximizes mean silhouette over k in [2, "
      << n - 1 << "], smaller k on ties within " << format_double(kSilhouetteTieTolerance)
      << '\n';
  out << "features\t" << n << '\n';
  std::size_t constants = 0;
  for (bool c : corr.constant) constants += c;
  out << "constant_features\t" << constants << '\n';
  for (std::size_t i = 0; i < n; ++i)
    if (corr.constant[i]) out << "constant\t" << corr.names[i] << '\n';
  out << "clusters\t" << result.k << '\n';
  out << "silhouette\t" << format_double(result.silhouette[result.k]) << '\n';
  out << "witness\tk-1=" << format_double(result.witness_below)
      << "\tk+1=" << format_double(result.witness_above) << '\t'
      << (result.witness_holds ? "holds" : "fails") << '\n';
  for (std::size_t c = 0; c < result.k; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (result.assignment[i] == c) members.push_back(i);
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        sum += std::abs(corr.at(members[a], members[b]));
        ++pairs;
      }
    out << "\ncluster\t" << c << "\tsize=" << members.size()
        << "\tmean_abs_r=" << (pairs ? format_double(sum / static_cast<double>(pairs)) : "1")
        << '\n';
    for (std::size_t i : members) out << "  " << corr.names[i] << '\n';
  }
}

}  // namespace chatgraph
