#include <doctest.h>

#include "efg/efg.hpp"
#include "efg/stats.hpp"
#include "helpers.hpp"

using namespace efg;
using namespace efg::test;

TEST_CASE("generator is deterministic per seed") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto a = generate_document(small(seed));
    auto b = generate_document(small(seed));
    CHECK(a.graph == b.graph);
    CHECK(a.specs == b.specs);
  }
  CHECK_FALSE(generate_cfg(small(1)) == generate_cfg(small(2)));
}

TEST_CASE("generated graphs are well formed and honour the config") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenConfig c = small(seed);
    c.max_back_edges = 3;
    auto doc = generate_document(c);
    const auto &g = doc.graph;
    CHECK_NOTHROW(g.validate());
    CHECK(g.node_count() >= 3);
    CHECK(g.node_count() <= 12);
    CHECK(g.colored().size() <= 3);
    for (NodeId n : g.nodes()) {
      if (g.kind(n) == NodeKind::Branch) {
        CHECK(g.out_degree(n) >= 2);
        for (const Edge &e : g.out_edges(n))
          CHECK(e.label.has_value());
      }
      if (g.kind(n) == NodeKind::Plain)
        CHECK(g.out_degree(n) == 1);
    }
    if (!g.colored().empty()) {
      REQUIRE(doc.specs.size() == 1);
      bool has_first = false;
      for (auto &[_, role] : doc.specs[0].events)
        has_first = has_first || role == EventRole::First;
      CHECK(has_first);
    }
    // ingest accepts what the generator emits
    CHECK_NOTHROW(parse_dot(emit_dot(doc)));
  }
}

TEST_CASE("one node and no events is a plain chain") {
  GenConfig c;
  c.nodes = {1, 1};
  c.events = {0, 0};
  c.loop_probability = 0;
  auto g = generate_cfg(c);
  CHECK(node_names(g) == std::set<std::string>{"TOP", "n1", "BOT"});
  CHECK(edge_names(g) == std::set<std::string>{"TOP->n1", "n1->BOT"});
}

TEST_CASE("a single node may loop on itself") {
  GenConfig c;
  c.nodes = {1, 1};
  c.events = {0, 0};
  c.loop_probability = 1;
  auto g = generate_cfg(c);
  CHECK(edge_names(g) == std::set<std::string>{"TOP->n1", "n1->BOT[T]",
                                               "n1->n1[loop]"});
}

TEST_CASE("impossible configs") {
  auto expect_config_error = [](GenConfig c) {
    try {
      generate_cfg(c);
      FAIL("expected ConfigError");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::ConfigError);
    }
  };
  GenConfig c;
  c.nodes = {5, 3};
  expect_config_error(c);
  c = {};
  c.events = {4, 4};
  c.nodes = {1, 3};
  expect_config_error(c);
  c = {};
  c.branch_probability = 1.5;
  expect_config_error(c);
  c = {};
  c.loop_probability = -0.1;
  expect_config_error(c);
}

TEST_CASE("ladder graphs for timing") {
  auto g = generate_ladder(10'000, 7);
  CHECK_NOTHROW(g.validate());
  CHECK(g.node_count() > 9'000);
  CHECK(g.node_count() <= 10'000);
  auto r = build_efg(g);
  CHECK(r.efg.node_count() < g.node_count());
}

TEST_CASE("reduction percentage") {
  CHECK(reduction_percentage(1101, 8) == doctest::Approx(99.3));
  CHECK(reduction_percentage(1513, 11) == doctest::Approx(99.3));
  CHECK(reduction_percentage(317, 4) == doctest::Approx(98.7));
  CHECK(reduction_percentage(5, 1) == doctest::Approx(80.0));
  CHECK(reduction_percentage(10, 10) == 0.0);
  CHECK(reduction_percentage(0, 0) == 0.0);
}

TEST_CASE("stats of the loop-free fixture") {
  auto doc = fixture("rng_read.dot");
  auto s = compute_stats(doc.graph, build_efg(doc.graph).efg, "rng");
  CHECK(s.nodes_before == 24);
  CHECK(s.nodes_after == 5);
  CHECK(s.edges_after == 5);
  CHECK(s.branch_before == 5);
  CHECK(s.branch_after == 1);
  CHECK(s.branch_percentage() == doctest::Approx(80.0));

  auto same = compute_stats(doc.graph, doc.graph);
  CHECK(same.node_percentage() == 0.0);
  CHECK(same.edge_percentage() == 0.0);
  CHECK(same.branch_percentage() == 0.0);
}

TEST_CASE("bucket boundaries") {
  auto h = size_histogram({0, 5, 6, 10, 11, 30, 31, 50, 51, 1000});
  CHECK(h.counts == std::array<std::size_t, 5>{2, 2, 2, 2, 2});
  auto b = branch_histogram({0, 1, 5, 6, 10, 11, 30, 31});
  CHECK(b.counts == std::array<std::size_t, 5>{1, 2, 2, 2, 1});
  CHECK(h.labels[0] == "<=5");
  CHECK(b.labels[4] == ">30");
}

TEST_CASE("table rendering") {
  auto corpus = summarize({GraphStats{"f", 1101, 8, 1513, 11, 317, 4}});
  auto text = render_table(corpus);
  CHECK(text.find("f") != std::string::npos);
  CHECK(text.find("99.3") != std::string::npos);
  CHECK(text.find("98.7") != std::string::npos);
  CHECK(corpus.nodes_after.counts[1] == 1);
}
