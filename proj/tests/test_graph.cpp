#include <doctest.h>

#include "efg/graph.hpp"

using namespace efg;

namespace {

struct Diamond {
  ColoredDirectedGraph g;
  NodeId top, bot, c, a, b, e;

  Diamond() {
    top = g.add_node("TOP", NodeKind::Entry);
    bot = g.add_node("BOT", NodeKind::Exit);
    c = g.add_node("c", NodeKind::Branch);
    a = g.add_node("a", NodeKind::Plain);
    b = g.add_node("b", NodeKind::Plain);
    e = g.add_node("e", NodeKind::Event);
    g.set_colored(e, true);
    g.add_edge(top, c);
    g.add_edge(c, a, "T");
    g.add_edge(c, b, "F");
    g.add_edge(a, e);
    g.add_edge(b, e);
    g.add_edge(e, bot);
  }
};

} // namespace

TEST_CASE("nodes and edges") {
  Diamond d;
  CHECK(d.g.node_count() == 6);
  CHECK(d.g.edge_count() == 6);
  CHECK(d.g.entry() == d.top);
  CHECK(d.g.exit() == d.bot);
  CHECK(d.g.is_protected(d.top));
  CHECK_FALSE(d.g.is_protected(d.c));
  CHECK(d.g.is_colored(d.e));
  CHECK(d.g.colored() == std::vector<NodeId>{d.e});
  CHECK(d.g.out_degree(d.c) == 2);
  CHECK(d.g.in_degree(d.e) == 2);
  CHECK(d.g.find_edge(d.c, d.a)->label == Label{"T"});
  CHECK(d.g.find_edge(d.a, d.c) == nullptr);
  CHECK(d.g.at("a") == d.a);
  CHECK_FALSE(d.g.find("zz").has_value());
  CHECK_THROWS_AS(d.g.at("zz"), Error);
  CHECK_NOTHROW(d.g.validate());

  auto edges = d.g.edges();
  REQUIRE(edges.size() == 6);
  CHECK(std::is_sorted(edges.begin(), edges.end(),
                       [](const Edge &x, const Edge &y) {
                         return std::pair(x.from, x.to) <
                                std::pair(y.from, y.to);
                       }));
}

TEST_CASE("second entry or exit is rejected") {
  ColoredDirectedGraph g;
  g.add_node("TOP", NodeKind::Entry);
  CHECK_THROWS_AS(g.add_node("TOP2", NodeKind::Entry), Error);
  g.add_node("BOT", NodeKind::Exit);
  CHECK_THROWS_AS(g.add_node("BOT2", NodeKind::Exit), Error);
}

TEST_CASE("adding an existing edge merges labels") {
  Diamond d;
  CHECK_FALSE(d.g.add_edge(d.c, d.a, "T"));
  CHECK(d.g.find_edge(d.c, d.a)->label == Label{"T"});
  CHECK_FALSE(d.g.add_edge(d.c, d.a, "F"));
  CHECK(d.g.find_edge(d.c, d.a)->label == Label{std::string(kMergedLabel)});
  CHECK(d.g.edge_count() == 6);
}

TEST_CASE("merge_labels") {
  CHECK(merge_labels(Label{"T"}, Label{"T"}) == Label{"T"});
  CHECK(merge_labels(Label{"T"}, Label{"F"}) == Label{"merged"});
  CHECK(merge_labels(std::nullopt, std::nullopt) == std::nullopt);
  CHECK(merge_labels(Label{"T"}, std::nullopt) == Label{"merged"});
}

TEST_CASE("removing nodes and edges") {
  Diamond d;
  d.g.remove_edge(d.c, d.b);
  CHECK(d.g.out_degree(d.c) == 1);
  CHECK_THROWS_AS(d.g.remove_edge(d.c, d.b), Error);
  d.g.remove_node(d.b);
  CHECK_FALSE(d.g.contains(d.b));
  CHECK(d.g.node_count() == 5);
  CHECK(d.g.predecessors(d.e) == std::vector<NodeId>{d.a});
  CHECK_THROWS_AS(d.g.remove_node(d.top), Error);
  CHECK_THROWS_AS(d.g.out_edges(d.b), Error);
  CHECK_THROWS_AS(d.g.add_edge(d.a, d.b), Error);
}

TEST_CASE("predecessors include a self-loop") {
  Diamond d;
  d.g.add_edge(d.a, d.a);
  auto preds = d.g.predecessors(d.a);
  CHECK(preds == std::vector<NodeId>{d.c, d.a});
  CHECK(d.g.has_self_loop(d.a));
}

TEST_CASE("validate finds malformed graphs") {
  SUBCASE("no exit") {
    ColoredDirectedGraph g;
    g.add_node("TOP", NodeKind::Entry);
    CHECK_THROWS_AS(g.validate(), Error);
  }
  SUBCASE("unreachable node") {
    Diamond d;
    d.g.add_node("lost", NodeKind::Plain);
    CHECK_THROWS_AS(d.g.validate(), Error);
  }
  SUBCASE("node that cannot reach the exit") {
    Diamond d;
    NodeId sink = d.g.add_node("sink", NodeKind::Plain);
    d.g.add_edge(d.a, sink);
    CHECK_THROWS_AS(d.g.validate(), Error);
  }
  SUBCASE("edge into the entry") {
    Diamond d;
    d.g.add_edge(d.a, d.top);
    CHECK_THROWS_AS(d.g.validate(), Error);
  }
  SUBCASE("colored exit") {
    Diamond d;
    CHECK_THROWS_AS(d.g.set_colored(d.bot, true), Error);
  }
}

TEST_CASE("successors and boundary of subgraphs") {
  Diamond d;
  CHECK(successors_of_node(d.g, d.c) == std::vector<NodeId>{d.a, d.b});
  CHECK(successors_of_subgraph(d.g, Subgraph{{d.c, d.a}}) ==
        std::vector<NodeId>{d.b, d.e});
  CHECK(boundary(d.g, Subgraph{{d.c, d.a}}) == std::vector<NodeId>{d.c, d.a});
  CHECK(successors_of_subgraph(d.g, Subgraph{{d.c, d.a, d.b}}) ==
        std::vector<NodeId>{d.e});
  CHECK(boundary(d.g, Subgraph{{d.c, d.a, d.b}}) ==
        std::vector<NodeId>{d.a, d.b});
  CHECK_THROWS_AS(successors_of_subgraph(d.g, Subgraph{}), Error);

  d.g.add_edge(d.a, d.a);
  CHECK(successors_of_node(d.g, d.a) == std::vector<NodeId>{d.e});
}

TEST_CASE("single-node subgraph agrees with node successors") {
  Diamond d;
  for (NodeId n : d.g.nodes())
    CHECK(successors_of_subgraph(d.g, Subgraph{{n}}) ==
          successors_of_node(d.g, n));
}

TEST_CASE("structural equality ignores anchors") {
  Diamond x, y;
  CHECK(x.g == y.g);
  Anchor a{x.c, x.a, Label{"T"}};
  ColoredDirectedGraph z = x.g;
  z.remove_edge(x.c, x.a);
  z.add_edge(x.c, x.a, "T", std::span<const Anchor>(&a, 1));
  CHECK(z == y.g);
  z.set_colored(x.a, true);
  CHECK_FALSE(z == y.g);
}

TEST_CASE("diagnostic formatting") {
  Diagnostic d{"E011", "second entry node 'x'", 3, 7};
  CHECK(d.format("f.dot") == "f.dot:3:7: error[E011]: second entry node 'x'");
}

TEST_CASE("copies are independent") {
  Diamond d;
  ColoredDirectedGraph copy = d.g;
  CHECK(copy == d.g);
  copy.remove_node(d.a);
  copy.add_node("z", NodeKind::Plain);
  CHECK(d.g.contains(d.a));
  CHECK(d.g.find_edge(d.c, d.a) != nullptr);
  CHECK_FALSE(d.g.find("z"));
  CHECK_FALSE(copy.contains(d.a));
  CHECK(copy.find("z"));

  ColoredDirectedGraph moved = std::move(copy);
  CHECK(moved.find("z"));
  CHECK(copy.id_bound() == 0);
  CHECK_FALSE(copy.contains(d.a));
}

TEST_CASE("small vector") {
  SmallVector<std::string, 2> v;
  for (int i = 0; i < 5; ++i)
    v.push_back(std::to_string(i));
  REQUIRE(v.size() == 5);
  v.erase(v.begin() + 1);
  CHECK(std::vector<std::string>(v.begin(), v.end()) ==
        std::vector<std::string>{"0", "2", "3", "4"});
  auto copy = v;
  auto moved = std::move(v);
  CHECK(v.empty());
  CHECK(moved.size() == 4);
  CHECK(copy[3] == "4");
  copy.pop_back();
  copy.pop_back();
  copy.pop_back();
  SmallVector<std::string, 2> small = copy;
  auto stolen = std::move(small);
  CHECK(stolen.size() == 1);
  CHECK(stolen[0] == "0");
  stolen.release();
  CHECK(stolen.empty());
}

TEST_CASE("chunked vector keeps elements in place") {
  ChunkedVector<int, 2> v;
  int *first = &v.emplace_back();
  *first = 7;
  for (int i = 1; i < 10; ++i)
    v.emplace_back() = i;
  CHECK(&v[0] == first);
  CHECK(v.size() == 10);
  auto copy = v;
  copy[9] = 0;
  CHECK(v[9] == 9);
  CHECK(copy[0] == 7);
}
