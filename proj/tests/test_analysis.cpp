#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "chatgraph/analysis.hpp"
#include "chatgraph/error.hpp"
#include "chatgraph/rng.hpp"

using namespace chatgraph;

namespace {

Dataset columns(const std::vector<std::vector<double>>& cols) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j) names.push_back("f" + std::to_string(j));
  Dataset d(names);
  for (std::size_t i = 0; i < cols.front().size(); ++i) {
    std::vector<double> row;
    for (const auto& c : cols) row.push_back(c[i]);
    d.add_row("r" + std::to_string(i), static_cast<int>(i % 2), row);
  }
  return d;
}

double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

std::vector<double> noise(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1, 1);
  return v;
}

/// `blocks` groups of `per_block` near-duplicate columns plus `extra` noise columns.
Dataset blocks(Rng& rng, std::size_t rows, std::size_t blocks, std::size_t per_block,
               std::size_t extra) {
  std::vector<std::vector<double>> cols;
  for (std::size_t b = 0; b < blocks; ++b) {
    auto base = noise(rng, rows);
    for (std::size_t k = 0; k < per_block; ++k) {
      auto c = base;
      double scale = (k % 2 == 0 ? 1.0 : -2.0);
      for (double& x : c) x = scale * x + 1e-3 * rng.uniform(-1, 1);
      cols.push_back(c);
    }
  }
  for (std::size_t e = 0; e < extra; ++e) cols.push_back(noise(rng, rows));
  return columns(cols);
}

}  // namespace

TEST_CASE("correlation basics") {
  Rng rng(1);
  auto x = noise(rng, 20);
  auto neg = x;
  for (double& v : neg) v = -3 * v + 1;
  auto m = pearson_matrix(columns({x, neg}));
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(0, 1) == doctest::Approx(-1.0));
  CHECK(m.at(1, 0) == m.at(0, 1));
  CHECK_THROWS_AS(pearson_matrix(columns({{1.0}, {2.0}})), Error);
}

TEST_CASE("correlation matches the direct formula") {
  Rng rng(2);
  std::vector<std::vector<double>> cols{noise(rng, 5), noise(rng, 5), noise(rng, 5)};
  auto m = pearson_matrix(columns(cols));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(m.at(i, j) - (i == j ? 1.0 : direct_pearson(cols[i], cols[j]))) <= 1e-12);
}

TEST_CASE("correlation matrix invariants") {
  Rng rng(3);
  Dataset d = blocks(rng, 40, 3, 3, 4);
  auto m = pearson_matrix(d, 4);
  auto serial = pearson_matrix(d, 1);
  CHECK(m.r == serial.r);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.at(i, i) == 1.0);
    for (std::size_t j = 0; j < m.size(); ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(std::abs(m.at(i, j)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("constant features") {
  Rng rng(4);
  auto x = noise(rng, 10);
  std::vector<double> flat(10, 3.0);
  std::vector<double> tiny(10, 1.0);
  tiny[3] += 1e-15;  // variance about 1e-31
  Dataset d = columns({x, flat, tiny});
  CHECK(constant_features(d) == std::vector<std::size_t>{1, 2});
  auto m = pearson_matrix(d);
  CHECK(m.constant[1]);
  CHECK(m.at(0, 1) == 0.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(constant_features(columns({x, noise(rng, 10)})).empty());
}

TEST_CASE("two blocks are recovered") {
  Rng rng(5);
  Dataset d = blocks(rng, 60, 2, 3, 0);
  auto r = cluster_features(pearson_matrix(d));
  CHECK(r.k == 2);
  CHECK(r.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(r.witness_holds);
}

TEST_CASE("dendrogram heights never decrease") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d = blocks(rng, 30, 2 + rng.below(3), 2, 3);
    auto r = cluster_features(pearson_matrix(d));
    CHECK(r.dendrogram.size() == d.cols() - 1);
    for (std::size_t i = 1; i < r.dendrogram.size(); ++i)
      CHECK(r.dendrogram[i].height >= r.dendrogram[i - 1].height - 1e-12);
    CHECK(r.dendrogram.back().size == d.cols());
    CHECK(r.witness_holds);
    for (std::size_t k = 2; k + 1 <= d.cols(); ++k)
      CHECK(r.silhouette[k] <= r.silhouette[r.k] + kSilhouetteTieTolerance);
  }
}

TEST_CASE("exact duplicates stay together at every cut") {
  Rng rng(7);
  auto a = noise(rng, 25);
  auto r = cluster_features(pearson_matrix(columns({a, a, noise(rng, 25)})));
  for (std::size_t k = 1; k <= 2; ++k) {
    auto cut = cut_dendrogram(r.dendrogram, 3, k);
    CHECK(cut[0] == cut[1]);
  }
  CHECK(r.k == 2);
}

TEST_CASE("uncorrelated features fall back to the smallest tied cut") {
  // Identity correlation: every cut has the same silhouette, 0.
  CorrelationMatrix m;
  m.names = {"a", "b", "c", "d", "e"};
  m.r.assign(25, 0.0);
  for (std::size_t i = 0; i < 5; ++i) m.r[i * 5 + i] = 1.0;
  m.constant.assign(5, false);
  auto r = cluster_features(m);
  CHECK(r.k == 2);
  for (std::size_t k = 2; k <= 4; ++k) CHECK(std::abs(r.silhouette[k]) < 1e-12);
}

TEST_CASE("cuts and silhouettes") {
  std::vector<Merge> dendro{{0, 1, 0.1, 2}, {2, 3, 0.2, 2}, {4, 5, 0.9, 4}};
  CHECK(cut_dendrogram(dendro, 4, 4) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(cut_dendrogram(dendro, 4, 2) == std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(cut_dendrogram(dendro, 4, 1) == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK_THROWS_AS(cut_dendrogram(dendro, 4, 5), Error);
  // Two tight pairs far apart.
  std::vector<double> dist{0, 0.1, 1, 1,  0.1, 0, 1, 1,  1, 1, 0, 0.1,  1, 1, 0.1, 0};
  CHECK(mean_silhouette(dist, 4, {0, 0, 1, 1}) == doctest::Approx(0.9));
  CHECK(mean_silhouette(dist, 4, {0, 1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(cluster_features(pearson_matrix(columns({{1, 2, 3}, {3, 1, 2}}))), Error);
}
