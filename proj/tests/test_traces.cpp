#include <doctest.h>

#include "efg/efg.hpp"
#include "efg/traces.hpp"
#include "helpers.hpp"

using namespace efg;
using namespace efg::test;

namespace {

const char *kLoop = R"(digraph { TOP [kind=entry]; BOT [kind=exit];
  e [kind=event]; TOP -> c; c -> e [label="T"]; c -> BOT [label="F"];
  e -> c; })";

} // namespace

TEST_CASE("bounded path enumeration respects the edge budget") {
  auto doc = dot(kLoop);
  CHECK(enumerate_bounded_paths(doc.graph, 1).size() == 2);
  CHECK(enumerate_bounded_paths(doc.graph, 2).size() == 3);
  CHECK(enumerate_bounded_paths(doc.graph, 3).size() == 4);
  auto paths = enumerate_bounded_paths(doc.graph, 1);
  // forks are taken in node id order: BOT (1) before e (2)
  CHECK(paths[0].nodes.size() == 3);
  CHECK(paths[1].nodes.size() == 5);
}

TEST_CASE("enumeration ceiling") {
  auto doc = dot(kLoop);
  try {
    enumerate_bounded_paths(doc.graph, 3, OracleLimits{2});
    FAIL("expected OracleTooLarge");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::OracleTooLarge);
  }
}

TEST_CASE("projection and rendering") {
  auto doc = dot(kLoop);
  const auto &g = doc.graph;
  NodeMask all(g.id_bound(), 1);
  auto paths = enumerate_bounded_paths(g, 1);
  CHECK(render(g, project_to_event_trace(g, paths[0], all)) == "TOP c[F] BOT");
  CHECK(render(g, project_to_event_trace(g, paths[1], all)) ==
        "TOP c[T] e c[F] BOT");
  NodeMask events_only = relevant_mask(g, {});
  CHECK(render(g, project_to_event_trace(g, paths[1], events_only)) ==
        "TOP e BOT");
}

TEST_CASE("relevant_mask rejects unknown nodes") {
  auto doc = dot(kLoop);
  CHECK_THROWS_AS(relevant_mask(doc.graph, {NodeId{99}}), Error);
}

TEST_CASE("classes of the loop-free fixture") {
  auto doc = fixture("rng_read.dot");
  auto classes = equivalence_classes(doc.graph, 1);
  REQUIRE(classes.size() == 2);
  CHECK(render(doc.graph, classes[0].trace) == "TOP e1 c1[F] e2 BOT");
  CHECK(render(doc.graph, classes[1].trace) == "TOP e1 c1[T] BOT");
  // several CFG walks fall into the F class
  CHECK(classes[0].member_count > 1);
  CHECK(classes[1].member_count == 1);
}

TEST_CASE("event-free detours back to a branch leave the trace alone") {
  auto doc = dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e [kind=event]; TOP -> c; c -> x [label="T"]; x -> c;
    c -> e [label="F"]; c -> BOT [label="L2"]; e -> BOT; })");
  auto r = verify_bijection(doc.graph, 2);
  CHECK(r.ok);
  CHECK(r.efg_traces ==
        std::vector<std::string>{"TOP c[F] e BOT", "TOP c[L2] BOT"});
}

TEST_CASE("labels become merged where the EFG merged them") {
  auto doc = dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e [kind=event]; TOP -> c; c -> a [label="T"]; c -> b [label="F"];
    c -> e [label="L2"]; a -> BOT; b -> BOT; e -> c; })");
  auto built = build_efg(doc.graph);
  const Edge *merged = built.efg.find_edge(doc.graph.at("c"), doc.graph.exit());
  REQUIRE(merged != nullptr);
  CHECK(merged->label == Label{"merged"});
  auto r = verify_bijection(doc.graph, 1);
  CHECK(r.ok);
  CHECK(r.efg_traces ==
        std::vector<std::string>{"TOP c[L2] e c[merged] BOT",
                                 "TOP c[merged] BOT"});
}

TEST_CASE("bijection on fixtures and random graphs") {
  for (const char *f : {"rng_read.dot", "loop_event.dot", "trylock.dot",
                        "scc_gap.dot"})
    for (unsigned k : {1u, 2u, 3u}) {
      INFO(f << " k=" << k);
      CHECK(verify_bijection(fixture(f).graph, k).ok);
    }
  for (std::uint64_t seed = 0; seed < 300; ++seed)
    for (unsigned k : {1u, 2u}) {
      auto r = verify_bijection(generate_cfg(small(seed)), k);
      INFO("seed " << seed << " k=" << k);
      CHECK(r.missing_in_efg.empty());
      CHECK(r.missing_in_cfg.empty());
    }
}

TEST_CASE("walk_projected counts transitions per automaton state") {
  auto doc = dot(kLoop);
  const auto &g = doc.graph;
  NodeMask all(g.id_bound(), 1);
  ProjectedWalkOptions options;
  options.k = 1;
  std::vector<std::string> seen;
  walk_projected(g, all, options, [&](const EventTrace &t, std::uint8_t) {
    seen.push_back(render(g, t));
  });
  CHECK(seen.size() == 2);

  // With a toggling automaton the second lap is a new transition.
  options.step = [&](std::uint8_t s, NodeId n) -> std::uint8_t {
    return n == g.at("e") ? s ^ 1 : s;
  };
  seen.clear();
  walk_projected(g, all, options, [&](const EventTrace &t, std::uint8_t) {
    seen.push_back(render(g, t));
  });
  CHECK(seen.size() == 3);
}
