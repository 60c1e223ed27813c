#include <doctest.h>

#include "efg/checker.hpp"
#include "efg/efg.hpp"
#include "helpers.hpp"

using namespace efg;
using namespace efg::test;

namespace {

struct Checked {
  GraphDocument doc;
  ColoredDirectedGraph efg;
  Verdict verdict;
};

Checked check_doc(GraphDocument doc, unsigned k = 1) {
  const EventSpec &spec = doc.specs.front();
  auto efg = build_efg(color_for(doc.graph, spec)).efg;
  auto v = check_two_event(efg, spec, k);
  return {std::move(doc), std::move(efg), std::move(v)};
}

std::vector<std::string> traces(const ColoredDirectedGraph &g,
                                const Verdict &v) {
  std::vector<std::string> out;
  for (const auto &w : v.witnesses)
    out.push_back(render(g, w.trace));
  return out;
}

} // namespace

TEST_CASE("automaton transitions") {
  using enum HoldState;
  CHECK(advance(NoneHeld, EventRole::First) == Held);
  CHECK(advance(Held, EventRole::First) == Held);
  CHECK(advance(Escaped, EventRole::First) == Escaped);
  CHECK(advance(NoneHeld, EventRole::Second) == NoneHeld);
  CHECK(advance(Held, EventRole::Second) == NoneHeld);
  CHECK(advance(Escaped, EventRole::Second) == NoneHeld);
  CHECK(advance(NoneHeld, EventRole::Flow) == NoneHeld);
  CHECK(advance(Held, EventRole::Flow) == Escaped);
  CHECK(advance(Escaped, EventRole::Flow) == Escaped);
}

TEST_CASE("loop-free fixture has one violating trace") {
  auto c = check_doc(fixture("rng_read.dot"));
  CHECK(c.verdict.object_id == "rng_mutex");
  CHECK(c.verdict.status == VerdictStatus::Violation);
  REQUIRE(c.verdict.witnesses.size() == 1);
  const auto &w = c.verdict.witnesses[0];
  CHECK(render(c.efg, w.trace) == "TOP e1 c1[T] BOT");
  CHECK(w.exit_state == HoldState::Held);
  REQUIRE(w.conditions.size() == 1);
  CHECK(c.efg.name(w.conditions[0].node) == "c1");
  CHECK(w.conditions[0].taken_label == Label{"T"});

  auto oracle = check_on_cfg_oracle(c.doc.graph, c.doc.specs.front());
  CHECK(oracle.status == c.verdict.status);
}

TEST_CASE("lock always followed by unlock is safe") {
  auto c = check_doc(dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e1 [kind=event, event_role=first, object="m"];
    e2 [kind=event, event_role=second, object="m"];
    TOP -> e1; e1 -> c1; c1 -> e2 [label="T"]; c1 -> x [label="F"];
    x -> e2; e2 -> BOT; })"));
  CHECK(c.verdict.status == VerdictStatus::Safe);
  CHECK(c.verdict.witnesses.empty());
}

TEST_CASE("handing the object away escapes") {
  auto c = check_doc(dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e1 [kind=event, event_role=first, object="m"];
    f [kind=event, event_role=flow, object="m"];
    e2 [kind=event, event_role=second, object="m"];
    TOP -> e1 -> c; c -> f [label="T"]; c -> e2 [label="F"];
    f -> BOT; e2 -> BOT; })"));
  CHECK(c.verdict.status == VerdictStatus::Escapes);
  CHECK(traces(c.efg, c.verdict) == std::vector<std::string>{"TOP e1 c[T] f BOT"});
  CHECK(c.verdict.witnesses[0].exit_state == HoldState::Escaped);
}

TEST_CASE("violation outranks escapes and both witness kinds are listed") {
  auto c = check_doc(dot(R"(digraph { TOP [kind=entry]; BOT [kind=exit];
    e1 [kind=event, event_role=first, object="m"];
    f [kind=event, event_role=flow, object="m"];
    TOP -> e1 -> c; c -> f [label="T"]; c -> BOT [label="F"]; f -> BOT; })"));
  CHECK(c.verdict.status == VerdictStatus::Violation);
  CHECK(traces(c.efg, c.verdict) ==
        std::vector<std::string>{"TOP e1 c[F] BOT", "TOP e1 c[T] f BOT"});
}

TEST_CASE("trylock shape reports the failed-lock branch") {
  auto c = check_doc(fixture("trylock.dot"));
  CHECK(c.verdict.status == VerdictStatus::Violation);
  CHECK(traces(c.efg, c.verdict) ==
        std::vector<std::string>{"TOP c2[F] e1 cL[F] c3[F] BOT",
                                 "TOP c2[F] e1 cL[T] BOT"});
  const auto &failed = c.verdict.witnesses[1];
  REQUIRE(failed.conditions.size() == 2);
  CHECK(c.efg.name(failed.conditions[1].node) == "cL");
  CHECK(failed.conditions[1].taken_label == Label{"T"});

  auto oracle = check_on_cfg_oracle(c.doc.graph, c.doc.specs.front());
  auto colored = color_for(c.doc.graph, c.doc.specs.front());
  CHECK(traces(colored, oracle) == traces(c.efg, c.verdict));
}

TEST_CASE("spec errors") {
  auto doc = fixture("rng_read.dot");
  EventSpec none{"m", {{doc.graph.at("e2"), EventRole::Second}}};
  EventSpec unknown{"m", {{NodeId{999}, EventRole::First}}};
  EventSpec terminal{"m", {{doc.graph.entry(), EventRole::First}}};
  for (const EventSpec *s : {&none, &unknown, &terminal}) {
    try {
      check_on_cfg_oracle(doc.graph, *s);
      FAIL("expected SpecMismatch");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::SpecMismatch);
    }
    CHECK_THROWS_AS(check_two_event(doc.graph, *s), Error);
  }
}

TEST_CASE("color_for colors exactly the spec events") {
  auto doc = fixture("rng_read.dot");
  EventSpec only_lock{"m", {{doc.graph.at("e1"), EventRole::First}}};
  auto g = color_for(doc.graph, only_lock);
  CHECK(g.colored() == std::vector<NodeId>{doc.graph.at("e1")});
}

TEST_CASE("witnesses are walks of the EFG and their conditions match") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenConfig cfg = small(seed);
    cfg.events = {1, 3};
    auto c = check_doc(generate_document(cfg), 1 + seed % 2);
    for (const auto &w : c.verdict.witnesses) {
      const auto &items = w.trace.items;
      REQUIRE(items.size() >= 2);
      CHECK(items.front().node == c.efg.entry());
      CHECK(items.back().node == c.efg.exit());
      std::vector<Condition> expected;
      for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        const Edge *e = c.efg.find_edge(items[i].node, items[i + 1].node);
        REQUIRE(e != nullptr);
        if (items[i].role == TraceRole::RelevantBranch) {
          CHECK(items[i].taken_label == e->label);
          expected.push_back({items[i].node, items[i].taken_label});
        }
      }
      CHECK(w.conditions == expected);
    }
  }
}

TEST_CASE("EFG verdicts agree with the CFG oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenConfig cfg = small(seed);
    cfg.events = {1, 3};
    auto doc = generate_document(cfg);
    const auto &spec = doc.specs.front();
    auto colored = color_for(doc.graph, spec);
    auto efg = build_efg(colored).efg;
    for (unsigned k : {1u, 2u}) {
      auto v = check_two_event(efg, spec, k);
      auto o = check_on_cfg_oracle(doc.graph, spec, k);
      INFO("seed " << seed << " k=" << k);
      CHECK(v.status == o.status);
      CHECK(traces(efg, v) == traces(colored, o));
    }
  }
}
