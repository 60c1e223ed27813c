#include "efg/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>

#include "efg/efg.hpp"

namespace efg {

std::string_view to_string(EventRole role) {
  switch (role) {
  case EventRole::First:
    return "first";
  case EventRole::Second:
    return "second";
  case EventRole::Flow:
    return "flow";
  }
  return "?";
}

std::string_view to_string(HoldState state) {
  switch (state) {
  case HoldState::NoneHeld:
    return "none_held";
  case HoldState::Held:
    return "held";
  case HoldState::Escaped:
    return "escaped";
  }
  return "?";
}

std::string_view to_string(VerdictStatus status) {
  switch (status) {
  case VerdictStatus::Safe:
    return "SAFE";
  case VerdictStatus::Violation:
    return "VIOLATION";
  case VerdictStatus::Escapes:
    return "ESCAPES";
  }
  return "?";
}

HoldState advance(HoldState state, EventRole role) {
  switch (role) {
  case EventRole::First:
    return state == HoldState::Escaped ? HoldState::Escaped : HoldState::Held;
  case EventRole::Second:
    return HoldState::NoneHeld;
  case EventRole::Flow:
    return state == HoldState::Held ? HoldState::Escaped : state;
  }
  return state;
}

void validate_spec(const ColoredDirectedGraph &g, const EventSpec &spec) {
  bool has_first = false;
  for (const auto &[node, role] : spec.events) {
    if (!g.contains(node))
      throw Error(ErrorCode::SpecMismatch,
                  "event spec for '" + spec.object_id + "' names node " +
                      std::to_string(node.value) + " which is not in the graph");
    if (g.is_protected(node))
      throw Error(ErrorCode::SpecMismatch,
                  "event spec for '" + spec.object_id +
                      "' names the entry or exit node");
    has_first = has_first || role == EventRole::First;
  }
  if (!has_first)
    throw Error(ErrorCode::SpecMismatch,
                "event spec for '" + spec.object_id + "' has no first event");
}

ColoredDirectedGraph color_for(const ColoredDirectedGraph &g,
                               const EventSpec &spec) {
  validate_spec(g, spec);
  ColoredDirectedGraph out = g;
  for (NodeId n : out.nodes())
    if (!out.is_protected(n))
      out.set_colored(n, spec.events.contains(n));
  return out;
}

std::vector<Condition> conditions_of(const EventTrace &trace) {
  std::vector<Condition> out;
  for (const auto &item : trace.items)
    if (item.role == TraceRole::RelevantBranch)
      out.push_back({item.node, item.taken_label});
  return out;
}

namespace {

constexpr std::size_t kStates = 3;

bool is_bad(HoldState s) { return s != HoldState::NoneHeld; }

VerdictStatus status_from(bool held, bool escaped) {
  if (held)
    return VerdictStatus::Violation;
  if (escaped)
    return VerdictStatus::Escapes;
  return VerdictStatus::Safe;
}

std::function<std::uint8_t(std::uint8_t, NodeId)>
stepper(const EventSpec &spec) {
  return [&spec](std::uint8_t state, NodeId n) -> std::uint8_t {
    auto it = spec.events.find(n);
    if (it == spec.events.end())
      return state;
    return static_cast<std::uint8_t>(
        advance(static_cast<HoldState>(state), it->second));
  };
}

void sort_witnesses(const ColoredDirectedGraph &g,
                    std::vector<Witness> &witnesses) {
  std::vector<std::pair<std::string, Witness>> keyed;
  for (auto &w : witnesses)
    keyed.emplace_back(render(g, w.trace), std::move(w));
  std::sort(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first)
      return a.first < b.first;
    return a.second.exit_state < b.second.exit_state;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto &a, const auto &b) {
                            return a.first == b.first &&
                                   a.second.exit_state == b.second.exit_state;
                          }),
              keyed.end());
  witnesses.clear();
  for (auto &[_, w] : keyed)
    witnesses.push_back(std::move(w));
}

class WitnessSearch {
public:
  WitnessSearch(const ColoredDirectedGraph &efg, const EventSpec &spec,
                unsigned k, const OracleLimits &limits)
      : g_(efg), k_(k), limits_(limits), step_(stepper(spec)) {
    const std::size_t bound = g_.id_bound();
    for (NodeId n : g_.nodes()) {
      auto out = g_.out_edges(n);
      adj_.resize(bound);
      for (const Edge &e : out)
        adj_[n.value].push_back(&e);
      std::sort(adj_[n.value].begin(), adj_[n.value].end(),
                [](const Edge *a, const Edge *b) { return a->to < b->to; });
    }
    adj_.resize(bound);
    forward();
    backward();
  }

  bool reaches_exit_in(HoldState s) const {
    return reach_[index(g_.exit(), static_cast<std::uint8_t>(s))];
  }

  std::vector<Witness> witnesses() {
    std::vector<Witness> out;
    NodeId entry = g_.entry();
    std::uint8_t s = step_(0, entry);
    if (!live_[index(entry, s)])
      return out;
    trace_.items.push_back({entry, TraceRole::Entry, std::nullopt});
    search(entry, s, out);
    return out;
  }

private:
  std::size_t index(NodeId n, std::uint8_t s) const {
    return n.value * kStates + s;
  }

  void forward() {
    reach_.assign(g_.id_bound() * kStates, 0);
    std::deque<std::pair<NodeId, std::uint8_t>> queue;
    auto visit = [&](NodeId n, std::uint8_t s) {
      if (!reach_[index(n, s)]) {
        reach_[index(n, s)] = 1;
        queue.emplace_back(n, s);
      }
    };
    visit(g_.entry(), step_(0, g_.entry()));
    while (!queue.empty()) {
      auto [u, s] = queue.front();
      queue.pop_front();
      for (const Edge *e : adj_[u.value])
        visit(e->to, step_(s, e->to));
    }
  }

  // live = reachable from the entry and able to reach a bad exit pair.
  void backward() {
    std::vector<std::vector<std::size_t>> reverse(g_.id_bound() * kStates);
    for (NodeId u : g_.nodes())
      for (std::uint8_t s = 0; s < kStates; ++s) {
        if (!reach_[index(u, s)])
          continue;
        for (const Edge *e : adj_[u.value])
          reverse[index(e->to, step_(s, e->to))].push_back(index(u, s));
      }
    live_.assign(g_.id_bound() * kStates, 0);
    std::deque<std::size_t> queue;
    for (HoldState bad : {HoldState::Held, HoldState::Escaped}) {
      auto i = index(g_.exit(), static_cast<std::uint8_t>(bad));
      if (reach_[i]) {
        live_[i] = 1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      auto i = queue.front();
      queue.pop_front();
      for (auto p : reverse[i])
        if (!live_[p]) {
          live_[p] = 1;
          queue.push_back(p);
        }
    }
  }

  void search(NodeId u, std::uint8_t s, std::vector<Witness> &out) {
    if (++expansions_ > limits_.max_paths * 64 + 1'000'000)
      overflow();
    for (const Edge *e : adj_[u.value]) {
      NodeId v = e->to;
      std::uint8_t next = step_(s, v);
      if (!live_[index(v, next)])
        continue;
      std::uint64_t key = (std::uint64_t{e->from.value} << 34) ^
                          (std::uint64_t{v.value} << 2) ^ s;
      unsigned &used = uses_[key];
      if (used >= k_)
        continue;
      ++used;
      TraceItem &last = trace_.items.back();
      if (last.role == TraceRole::RelevantBranch)
        last.taken_label = e->label;
      TraceRole role = v == g_.exit()     ? TraceRole::Exit
                       : g_.is_colored(v) ? TraceRole::Event
                                          : TraceRole::RelevantBranch;
      trace_.items.push_back({v, role, std::nullopt});
      if (v == g_.exit()) {
        if (out.size() == limits_.max_paths)
          overflow();
        out.push_back(Witness{trace_, conditions_of(trace_),
                              static_cast<HoldState>(next)});
      } else {
        search(v, next, out);
      }
      trace_.items.pop_back();
      trace_.items.back().taken_label.reset();
      --uses_[key];
    }
  }

  [[noreturn]] void overflow() const {
    throw Error(ErrorCode::OracleTooLarge,
                "witness enumeration exceeded the ceiling of " +
                    std::to_string(limits_.max_paths) + " walks");
  }

  const ColoredDirectedGraph &g_;
  unsigned k_;
  OracleLimits limits_;
  std::function<std::uint8_t(std::uint8_t, NodeId)> step_;
  std::vector<std::vector<const Edge *>> adj_;
  std::vector<char> reach_, live_;
  std::unordered_map<std::uint64_t, unsigned> uses_;
  EventTrace trace_;
  std::size_t expansions_ = 0;
};

} // namespace

Verdict check_two_event(const ColoredDirectedGraph &efg, const EventSpec &spec,
                        unsigned k, const OracleLimits &limits) {
  validate_spec(efg, spec);
  efg.validate();
  WitnessSearch search(efg, spec, k, limits);
  Verdict verdict;
  verdict.object_id = spec.object_id;
  verdict.status = status_from(search.reaches_exit_in(HoldState::Held),
                               search.reaches_exit_in(HoldState::Escaped));
  if (verdict.status != VerdictStatus::Safe) {
    verdict.witnesses = search.witnesses();
    sort_witnesses(efg, verdict.witnesses);
  }
  return verdict;
}

Verdict check_on_cfg_oracle(const ColoredDirectedGraph &cfg,
                            const EventSpec &spec, unsigned k,
                            const OracleLimits &limits) {
  ColoredDirectedGraph colored = color_for(cfg, spec);
  auto built = build_efg(colored);
  NodeMask relevant = relevant_mask(colored, built.relevant_branches());

  ProjectedWalkOptions options;
  options.k = k;
  options.limits = limits;
  options.step = stepper(spec);

  bool held = false, escaped = false;
  Verdict verdict;
  verdict.object_id = spec.object_id;
  walk_projected(colored, relevant, options,
                 [&](const EventTrace &trace, std::uint8_t final_state) {
                   auto s = static_cast<HoldState>(final_state);
                   held = held || s == HoldState::Held;
                   escaped = escaped || s == HoldState::Escaped;
                   if (!is_bad(s))
                     return;
                   EventTrace normalized = normalize_labels(trace, built.efg);
                   verdict.witnesses.push_back(
                       Witness{normalized, conditions_of(normalized), s});
                 });
  verdict.status = status_from(held, escaped);
  sort_witnesses(colored, verdict.witnesses);
  return verdict;
}

} // namespace efg
