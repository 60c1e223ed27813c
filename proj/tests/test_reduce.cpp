#include <doctest.h>

#include "efg/reduce.hpp"
#include "helpers.hpp"

using namespace efg;
using namespace efg::test;

TEST_CASE("T1 consumes a single-successor node and reroutes its edges") {
  auto doc = dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e [kind=event]; TOP -> x -> e -> BOT; })");
  const auto &g = doc.graph;
  NodeId x = g.at("x");
  REQUIRE(single_successor_applicable(g, x));
  auto h = apply_t1(g, x);
  CHECK_FALSE(h.contains(x));
  CHECK(edge_names(h) == std::set<std::string>{"TOP->e", "e->BOT"});
  CHECK_THROWS_AS(apply_t1(g, g.at("e")), Error);
  CHECK_THROWS_AS(apply_t1(g, g.entry()), Error);
  CHECK_THROWS_AS(apply_t3(g, x), Error); // plain, not a branch
}

TEST_CASE("T1 keeps the label of the incoming edge") {
  auto doc = dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e [kind=event]; TOP -> c; c -> x [label="T"]; c -> e [label="F"];
    x -> BOT; e -> BOT; })");
  auto h = apply_t1(doc.graph, doc.graph.at("x"));
  CHECK(edge_names(h).contains("c->BOT[T]"));
}

TEST_CASE("T2 drops a self-loop, only on non-colored nodes") {
  auto doc = dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e [kind=event]; TOP -> c; c -> c [label="T"]; c -> e [label="F"];
    e -> e; e -> BOT; })");
  const auto &g = doc.graph;
  CHECK(t2_applicable(g, g.at("c")));
  CHECK_FALSE(t2_applicable(g, g.at("e")));
  CHECK_FALSE(single_successor_applicable(g, g.at("c")));
  auto h = apply_t2(g, g.at("c"));
  CHECK_FALSE(h.has_self_loop(g.at("c")));
  CHECK(single_successor_applicable(h, g.at("c")));
  CHECK(apply_t3(h, g.at("c")).node_count() == 3);
  CHECK_THROWS_AS(apply_t2(g, g.at("e")), Error);
}

TEST_CASE("graph without colored nodes reduces to TOP -> BOT") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig c = small(seed);
    c.events = {0, 0};
    c.loop_probability = 0;
    auto r = reduce_to_t_irreducible(generate_cfg(c));
    CHECK(node_names(r.graph) == std::set<std::string>{"TOP", "BOT"});
    CHECK(edge_names(r.graph).size() == 1);
  }
}

TEST_CASE("fixture counts T3 steps for its branches") {
  auto doc = fixture("rng_read.dot");
  auto r = reduce_to_t_irreducible(doc.graph);
  CHECK(is_t_irreducible(r.graph));
  // c4 and c5 fold once their arms are gone; c2, c3 stay in a cycle.
  CHECK(r.record.count(TransformationKind::T3) == 2);
  CHECK(r.graph.contains(doc.graph.at("c2")));
  CHECK(r.graph.contains(doc.graph.at("c3")));
  CHECK_FALSE(r.graph.contains(doc.graph.at("c4")));
}

TEST_CASE("reduction is idempotent and replayable") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto g = generate_cfg(small(seed));
    auto r = reduce_to_t_irreducible(g);
    CHECK(is_t_irreducible(r.graph));
    auto again = reduce_to_t_irreducible(r.graph);
    CHECK(again.record.steps.empty());
    CHECK(again.graph == r.graph);
    CHECK(replay(g, r.record) == r.graph);
  }
}

TEST_CASE("replay rejects a record that does not fit") {
  auto doc = fixture("rng_read.dot");
  auto r = reduce_to_t_irreducible(doc.graph);
  ReductionRecord bad = r.record;
  bad.steps.push_back(bad.steps.front());
  CHECK_THROWS_AS(replay(doc.graph, bad), Error);
}

TEST_CASE("reduction order does not matter") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig c = small(seed);
    c.nodes = {1, 12};
    auto g = generate_cfg(c);
    auto reference = reduce_to_t_irreducible(g).graph;
    for (std::uint64_t order = 0; order < 10; ++order) {
      auto other = reduce_to_t_irreducible(g, ReduceOptions{order}).graph;
      CHECK(other == reference);
    }
  }
}

TEST_CASE("long chains reduce without deep recursion") {
  ColoredDirectedGraph g;
  NodeId prev = g.add_node("TOP", NodeKind::Entry);
  NodeId bot = g.add_node("BOT", NodeKind::Exit);
  for (int i = 0; i < 200000; ++i) {
    NodeId n = g.add_node("x" + std::to_string(i), NodeKind::Plain);
    g.add_edge(prev, n);
    prev = n;
  }
  g.add_edge(prev, bot);
  auto r = reduce_to_t_irreducible(g);
  CHECK(r.graph.node_count() == 2);
  CHECK(r.record.count(TransformationKind::T1) == 200000);
}
