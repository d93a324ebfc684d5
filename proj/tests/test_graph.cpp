#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "chatgraph/error.hpp"
#include "chatgraph/graph.hpp"
#include "oracles.hpp"

using namespace chatgraph;

TEST_CASE("weights accumulate") {
  ConversationalGraph g;
  g.add_weight("a", "b", 0.6);
  CHECK(g.weight(0, 1) == doctest::Approx(0.6));
  g.add_weight("a", "b", 0.4);
  CHECK(g.weight(0, 1) == doctest::Approx(1.0));
  CHECK(g.weight(1, 0) == 0.0);
  CHECK(g.edge_count() == 1);
  CHECK_THROWS_AS(g.add_weight("a", "a", 0.5), Error);
  CHECK_THROWS_AS(g.add_weight("a", "b", 0.0), Error);
}

TEST_CASE("undirected graphs store one edge per pair") {
  ConversationalGraph g(false);
  g.add_weight("a", "b", 1.0);
  g.add_weight("b", "a", 2.0);
  CHECK(g.edge_count() == 1);
  CHECK(g.weight(0, 1) == 3.0);
  CHECK(g.weight(1, 0) == 3.0);
}

TEST_CASE("views") {
  ConversationalGraph g;
  g.add_weight("a", "b", 2.0);
  g.add_weight("b", "a", 3.0);
  g.add_weight("b", "c", 1.5);

  GraphView u(g, true, Direction::Undirected);
  CHECK(u.edge_count() == 2);
  CHECK(u.weight(0, 1) == 5.0);
  CHECK(u.weight(1, 0) == 5.0);
  CHECK(u.weight(2, 1) == 1.5);

  GraphView d(g, false, Direction::Directed);
  CHECK(d.weight(0, 1) == 1.0);
  CHECK(d.weight(1, 0) == 1.0);
  CHECK(d.weight(2, 1) == 0.0);

  GraphView in(g, true, Direction::In);
  CHECK(in.weight(2, 1) == 1.5);
  CHECK(in.weight(1, 2) == 0.0);
  CHECK(in.out(2).size() == 1);

  GraphView w(g, true, Direction::Directed);
  CHECK(w.cost(w.out(0)[0]) == doctest::Approx(0.5));
  GraphView raw(g, true, Direction::Directed, CostMode::Raw);
  CHECK(raw.cost(raw.out(0)[0]) == 2.0);

  ConversationalGraph ug(false);
  ug.add_weight("a", "b", 1.0);
  CHECK_THROWS_AS(GraphView(ug, true, Direction::In), Error);
  CHECK_THROWS_AS(GraphView(ug, true, Direction::Directed), Error);
}

TEST_CASE("undirected view weight is the sum of both directions") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_graph(rng, 6, true, 0.5, false);
    GraphView u(g, true, Direction::Undirected);
    for (VertexId a = 0; a < 6; ++a)
      for (VertexId b = 0; b < 6; ++b)
        if (a != b) CHECK(u.weight(a, b) == doctest::Approx(g.weight(a, b) + g.weight(b, a)));
  }
}

TEST_CASE("edge list dump") {
  ConversationalGraph g;
  g.add_vertex("lonely");
  g.add_weight("a", "b", 0.25);
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "a\tb\t0.25\nlonely\n");
}
