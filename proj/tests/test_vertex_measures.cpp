#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chatgraph/error.hpp"
#include "chatgraph/paths.hpp"
#include "chatgraph/vertex_measures.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace chatgraph;
using support::graph;

namespace {

const auto U = Direction::Undirected;

ConversationalGraph path3() { return graph(false, {{"a", "b"}, {"b", "c"}}); }
ConversationalGraph triangle() { return graph(false, {{"a", "b"}, {"b", "c"}, {"a", "c"}}); }
ConversationalGraph star(int leaves) {
  ConversationalGraph g(false);
  for (int i = 0; i < leaves; ++i) g.add_weight("c", "l" + std::to_string(i), 1.0);
  return g;
}

}  // namespace

TEST_CASE("degree centrality") {
  GraphView s(star(3), false, U);
  CHECK(degree_centrality(s, 0) == 1.0);
  CHECK(degree_centrality(s, 1) == doctest::Approx(1.0 / 3.0));

  auto d = graph(true, {{"a", "b"}});
  CHECK(degree_centrality(GraphView(d, false, Direction::In), 1) == 1.0);
  CHECK(degree_centrality(GraphView(d, false, Direction::Out), 1) == 0.0);

  ConversationalGraph one;
  one.add_vertex("x");
  CHECK(degree_centrality(GraphView(one, false, U), 0) == 0.0);
  CHECK_THROWS_AS(degree_centrality(s, 9), Error);
}

TEST_CASE("strength centrality") {
  auto g = graph(false, {{"a", "b", 0.6}, {"a", "c", 0.4}}, {"z"});
  GraphView v(g, true, U);
  CHECK(strength_centrality(v, 0) == doctest::Approx(1.0));
  CHECK(strength_centrality(v, 3) == 0.0);
  auto d = graph(true, {{"a", "b", 2.0}, {"b", "a", 3.0}});
  CHECK(strength_centrality(GraphView(d, true, Direction::Out), 0) == 2.0);
  CHECK(strength_centrality(GraphView(d, true, Direction::In), 0) == 3.0);
}

TEST_CASE("local transitivity") {
  for (VertexId v = 0; v < 3; ++v) CHECK(local_transitivity(GraphView(triangle(), false, U), v) == 1.0);
  CHECK(local_transitivity(GraphView(path3(), false, U), 1) == 0.0);
  CHECK(local_transitivity(GraphView(path3(), false, U), 0) == 0.0);
  auto w = graph(false, {{"a", "b", 1.0}, {"b", "c", 1.0}, {"a", "c", 2.0}});
  for (VertexId v = 0; v < 3; ++v) CHECK(local_transitivity(GraphView(w, true, U), v) == doctest::Approx(1.0));
  auto d = graph(true, {{"a", "b"}});
  CHECK_THROWS_AS(local_transitivity(GraphView(d, false, Direction::Directed), 0), Error);
}

TEST_CASE("burt's constraint") {
  auto dyad = graph(false, {{"a", "b"}});
  CHECK(burts_constraint(GraphView(dyad, false, U), 0) == doctest::Approx(1.0));
  for (int k : {2, 3, 5}) CHECK(burts_constraint(GraphView(star(k), false, U), 0) == doctest::Approx(1.0 / k));
  CHECK(burts_constraint(GraphView(triangle(), false, U), 0) == doctest::Approx(1.125));
  auto g = graph(false, {{"a", "b"}}, {"z"});
  bool degenerate = false;
  CHECK(burts_constraint(GraphView(g, false, U), 2, &degenerate) == 0.0);
  CHECK(degenerate);
}

TEST_CASE("betweenness, closeness and eccentricity on small shapes") {
  GraphView p(path3(), false, U);
  CHECK(betweenness(p, 1) == 1.0);
  CHECK(betweenness(p, 0) == 0.0);
  GraphView k4(support::complete(4, false), false, U);
  for (VertexId v = 0; v < 4; ++v) {
    CHECK(betweenness(k4, v) == 0.0);
    CHECK(eccentricity(k4, v) == 1.0);
  }
  CHECK(closeness(p, 1) == 1.0);
  CHECK(closeness(p, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(eccentricity(p, 1) == 1.0);
  CHECK(eccentricity(p, 0) == 2.0);

  auto iso = graph(false, {{"a", "b"}, {"b", "c"}}, {"z"});
  CHECK(closeness(GraphView(iso, false, U), 3) == 0.0);
  CHECK(eccentricity(GraphView(iso, false, U), 3) == 0.0);

  auto chain = graph(true, {{"a", "b"}, {"b", "c"}});
  CHECK(eccentricity(GraphView(chain, false, Direction::Out), 0) == 2.0);
  CHECK(eccentricity(GraphView(chain, false, Direction::In), 0) == 0.0);
}

TEST_CASE("articulation points and coreness") {
  CHECK(is_articulation_point(path3(), 1));
  CHECK_FALSE(is_articulation_point(path3(), 0));
  for (VertexId v = 0; v < 3; ++v) {
    CHECK_FALSE(is_articulation_point(triangle(), v));
    CHECK(coreness(GraphView(triangle(), false, U), v) == 2);
  }
  GraphView s(star(4), false, U);
  for (VertexId v = 0; v < 5; ++v) CHECK(coreness(s, v) == 1);

  auto k4p = support::complete(4, false);
  k4p.add_weight("k0", "pendant", 1.0);
  GraphView g(k4p, false, U);
  CHECK(coreness(g, 4) == 1);
  for (VertexId v = 0; v < 4; ++v) CHECK(coreness(g, v) == 3);
}

TEST_CASE("weighted paths use reciprocal costs") {
  auto g = graph(false, {{"a", "b", 4.0}, {"b", "c", 1.0}, {"a", "c", 0.5}});
  GraphView v(g, true, U);
  auto d = distances_from(v, 0);
  CHECK(d[1] == doctest::Approx(0.25));
  CHECK(d[2] == doctest::Approx(1.25));
  CHECK(betweenness(v, 1) == doctest::Approx(1.0));
}

TEST_CASE("vertex measures agree with brute-force oracles on random graphs") {
  Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const bool directed = trial % 2 == 0;
    const std::size_t n = 1 + rng.below(7);
    auto g = oracle::random_graph(rng, n, directed, rng.uniform(0.2, 0.8), trial % 3 == 0);
    for (bool weighted : {false, true}) {
      std::vector<Direction> modes{U};
      if (directed) modes = {U, Direction::Directed, Direction::In, Direction::Out};
      for (Direction mode : modes) {
        GraphView view(g, weighted, mode);
        auto w = oracle::weights(g, weighted, mode);
        auto dist = oracle::floyd_warshall(w, weighted);
        auto bc = betweenness(view);
        auto want_bc = oracle::betweenness(w, weighted, mode == U);
        auto core = coreness(view);
        auto want_core = oracle::coreness(oracle::weights(g, false, mode));
        for (VertexId v = 0; v < n; ++v) {
          CAPTURE(trial);
          CAPTURE(v);
          CHECK(bc[v] == doctest::Approx(want_bc[v]).epsilon(1e-9));
          double sum = 0.0, ecc = 0.0, reached = 0.0;
          for (VertexId u = 0; u < n; ++u) {
            if (u == v || dist[v][u] == oracle::kInf) continue;
            sum += dist[v][u];
            ecc = std::max(ecc, dist[v][u]);
            reached += 1.0;
          }
          CHECK(closeness(view, v) == doctest::Approx(reached == 0 ? 0.0 : reached / sum).epsilon(1e-9));
          CHECK(eccentricity(view, v) == doctest::Approx(ecc).epsilon(1e-9));
          CHECK(core[v] == want_core[v]);
          CHECK(core[v] <= view.out(v).size());
          double dc = degree_centrality(view, v);
          CHECK(dc >= 0.0);
          CHECK(dc <= 1.0);
          if (mode == U) {
            CHECK(local_transitivity(view, v) == doctest::Approx(oracle::barrat(w, v)).epsilon(1e-9));
            CHECK(burts_constraint(view, v) == doctest::Approx(oracle::constraint(w, v)).epsilon(1e-9));
          }
        }
      }
    }
    auto sym = oracle::weights(g, false, U);
    auto cut = articulation_points(g);
    std::size_t count = 0;
    for (bool c : cut) count += c ? 1 : 0;
    CHECK(count == oracle::articulation_points(sym));
  }
}

TEST_CASE("directed burt's constraint uses mutual ties") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = oracle::random_graph(rng, 6, true, 0.4, false);
    GraphView view(g, true, Direction::Directed);
    auto w = oracle::weights(g, true, Direction::Directed);
    oracle::Matrix t(6, std::vector<double>(6, 0.0));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) t[i][j] = w[i][j] + w[j][i];
    for (VertexId v = 0; v < 6; ++v)
      CHECK(burts_constraint(view, v) == doctest::Approx(oracle::constraint(t, v)).epsilon(1e-9));
  }
}

TEST_CASE("config validation") {
  MeasureConfig c;
  c.pagerank_damping = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = MeasureConfig{};
  c.tolerance = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}
