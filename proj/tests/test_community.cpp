#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "chatgraph/community.hpp"
#include "chatgraph/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chatgraph;
using support::graph;

namespace {

const auto U = Direction::Undirected;

/// Best modularity over every set partition of the vertices.
double best_modularity(const oracle::Matrix& sym, std::vector<std::size_t>* best_comm) {
  const std::size_t n = sym.size();
  std::vector<std::size_t> comm(n, 0);
  double best = -1.0;
  std::function<void(std::size_t, std::size_t)> place = [&](std::size_t v, std::size_t used) {
    if (v == n) {
      double q = oracle::modularity(sym, comm);
      if (q > best + 1e-12) {
        best = q;
        if (best_comm != nullptr) *best_comm = comm;
      }
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      comm[v] = c;
      place(v + 1, std::max(used, c + 1));
    }
  };
  place(0, 0);
  return best;
}

ConversationalGraph bridged_triangles() {
  return graph(false, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "e"}, {"e", "f"}, {"f", "d"},
                       {"c", "d"}});
}

}  // namespace

TEST_CASE("two triangles joined by a bridge split at the bridge") {
  auto g = bridged_triangles();
  GraphView v(g, false, U);
  auto p = detect_communities(v, 1);
  CHECK(p.community_count == 2);
  CHECK(p.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  double best = best_modularity(oracle::weights(g, false, U), nullptr);
  CHECK(modularity(v, p) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("complete and empty graphs") {
  auto k5 = support::complete(5, false);
  CHECK(detect_communities(GraphView(k5, false, U), 1).community_count == 1);
  ConversationalGraph empty(false);
  for (int i = 0; i < 4; ++i) empty.add_vertex("v" + std::to_string(i));
  auto p = detect_communities(GraphView(empty, false, U), 1);
  CHECK(p.community_count == 4);
  CHECK(modularity(GraphView(empty, false, U), p) == 0.0);
}

TEST_CASE("modularity values") {
  auto two = graph(false, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "e"}, {"e", "f"}, {"f", "d"}});
  GraphView v(two, false, U);
  CHECK(modularity(v, Partition{{0, 0, 0, 1, 1, 1}, 2}) == doctest::Approx(0.5));
  CHECK(modularity(v, Partition{{0, 0, 0, 0, 0, 0}, 1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(modularity(v, Partition{{0, 0}, 1}), Error);
}

TEST_CASE("modularity matches the direct formula for random partitions") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const bool directed = trial % 2 == 0;
    const std::size_t n = 2 + rng.below(9);
    auto g = oracle::random_graph(rng, n, directed, 0.4, false);
    for (bool weighted : {false, true}) {
      Direction mode = directed ? Direction::Directed : U;
      GraphView v(g, weighted, mode);
      Partition p;
      p.assignment.resize(n);
      for (auto& c : p.assignment) c = rng.below(3);
      p.community_count = 3;
      auto w = oracle::weights(g, weighted, U);
      CHECK(modularity(v, p) == doctest::Approx(oracle::modularity(w, p.assignment)).epsilon(1e-12));
    }
  }
}

TEST_CASE("detected partitions never beat the exhaustive optimum") {
  Rng rng(5);
  int optimal = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    auto g = oracle::random_graph(rng, n, false, 0.5, false);
    GraphView v(g, true, U);
    auto p = detect_communities(v, 7);
    double q = modularity(v, p);
    double best = best_modularity(oracle::weights(g, true, U), nullptr);
    CHECK(q <= best + 1e-12);
    if (q >= best - 1e-9) ++optimal;
    // Community ids are contiguous and numbered by first member.
    std::size_t next = 0;
    for (auto c : p.assignment) {
      CHECK(c <= next);
      if (c == next) ++next;
    }
    CHECK(next == p.community_count);
  }
  CHECK(optimal >= 50);
}

TEST_CASE("detection is deterministic for a seed") {
  Rng rng(9);
  auto g = oracle::random_graph(rng, 30, true, 0.1, false);
  GraphView v(g, true, Direction::Directed);
  CHECK(detect_communities(v, 3).assignment == detect_communities(v, 3).assignment);
}

TEST_CASE("vertex roles") {
  SUBCASE("single community") {
    auto g = bridged_triangles();
    GraphView v(g, false, U);
    Partition one{std::vector<std::size_t>(6, 0), 1};
    for (const auto& r : vertex_roles(v, one)) {
      CHECK(r.participation == 0.0);
      CHECK(r.diversity == 0.0);
    }
  }
  SUBCASE("edges split evenly across two of three communities") {
    // x sits alone; its two edges go to communities 1 and 2.
    auto g = graph(false, {{"x", "a"}, {"x", "b"}, {"b", "c"}});
    GraphView v(g, false, U);
    Partition p{{0, 1, 2, 2}, 3};
    auto r = vertex_roles(v, p, 0);
    CHECK(r.participation == doctest::Approx(0.5));
    CHECK(r.diversity == doctest::Approx(1.0));
    CHECK_THROWS_AS(vertex_roles(v, p, 4), Error);
  }
  SUBCASE("regular communities have zero within-module degree") {
    auto g = graph(false, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "e"}, {"e", "f"}, {"f", "d"}});
    GraphView v(g, false, U);
    for (const auto& r : vertex_roles(v, Partition{{0, 0, 0, 1, 1, 1}, 2}))
      CHECK(r.within_module_degree == 0.0);
  }
}

TEST_CASE("role invariants on random graphs") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_graph(rng, 12, true, 0.25, false);
    for (Direction mode : {U, Direction::In, Direction::Out}) {
      GraphView v(g, false, mode);
      auto p = detect_communities(GraphView(g, false, U), 1);
      auto roles = vertex_roles(v, p);
      const double c = static_cast<double>(p.community_count);
      std::vector<double> zsum(p.community_count, 0.0);
      for (std::size_t i = 0; i < roles.size(); ++i) {
        CHECK(roles[i].participation >= -1e-12);
        CHECK(roles[i].participation <= 1.0 - 1.0 / c + 1e-12);
        CHECK(roles[i].diversity >= 0.0);
        CHECK(roles[i].diversity <= 1.0);
        zsum[p.assignment[i]] += roles[i].within_module_degree;
      }
      for (double s : zsum) CHECK(std::abs(s) < 1e-9);
    }
  }
}
