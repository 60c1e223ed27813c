#include "efg/reduce.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace efg {

std::string_view to_string(TransformationKind kind) {
  switch (kind) {
  case TransformationKind::T1:
    return "T1";
  case TransformationKind::T2:
    return "T2";
  case TransformationKind::T3:
    return "T3";
  }
  return "?";
}

std::size_t ReductionRecord::count(TransformationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(),
                    [kind](const ReductionStep &s) { return s.kind == kind; }));
}

bool is_consumable(const ColoredDirectedGraph &g, NodeId n) {
  return g.contains(n) && !g.is_colored(n) && !g.is_protected(n);
}

namespace {

// The unique successor other than n itself, if there is exactly one.
std::optional<NodeId> sole_successor(const ColoredDirectedGraph &g, NodeId n) {
  std::optional<NodeId> found;
  for (const auto &e : g.out_edges(n)) {
    if (e.to == n)
      continue;
    if (found)
      return std::nullopt;
    found = e.to;
  }
  return found;
}

TransformationKind single_successor_kind(const ColoredDirectedGraph &g,
                                         NodeId n) {
  return g.kind(n) == NodeKind::Branch ? TransformationKind::T3
                                       : TransformationKind::T1;
}

[[noreturn]] void not_applicable(const ColoredDirectedGraph &g, NodeId n,
                                 std::string_view what) {
  throw Error(ErrorCode::TransformNotApplicable,
              std::string(what) + " does not apply to node '" + g.name(n) +
                  "'");
}

} // namespace

bool single_successor_applicable(const ColoredDirectedGraph &g, NodeId n) {
  return is_consumable(g, n) && !g.has_self_loop(n) &&
         sole_successor(g, n).has_value();
}

bool t2_applicable(const ColoredDirectedGraph &g, NodeId n) {
  return is_consumable(g, n) && g.has_self_loop(n);
}

bool is_t_irreducible(const ColoredDirectedGraph &g) {
  for (NodeId n : g.nodes())
    if (t2_applicable(g, n) || single_successor_applicable(g, n))
      return false;
  return true;
}

namespace detail {

NodeId consume(ColoredDirectedGraph &g, NodeId n,
               std::vector<NodeId> *predecessors) {
  NodeId m = *sole_successor(g, n);
  const Edge &leaving = *g.find_edge(n, m);
  // Scratch space reused across calls; this runs once per consumed node.
  thread_local std::vector<NodeId> targets;
  targets.clear();
  for (const Anchor &a : leaving.anchors)
    targets.push_back(a.to);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<NodeId> local;
  std::vector<NodeId> &preds = predecessors ? *predecessors : local;
  auto in_list = g.predecessor_list(n);
  preds.assign(in_list.begin(), in_list.end());
  std::sort(preds.begin(), preds.end());
  for (NodeId p : preds) {
    Edge incoming = g.take_edge(p, n);

    // One label per anchor source: the branch label under which that source
    // reached n.  Anchors are sorted by source.
    const auto &in = incoming.anchors;
    AnchorList anchors;
    anchors.reserve(in.size() * targets.size());
    for (std::size_t i = 0; i < in.size();) {
      NodeId source = in[i].from;
      Label label = in[i].label;
      for (++i; i < in.size() && in[i].from == source; ++i)
        label = merge_labels(label, in[i].label);
      for (NodeId t : targets)
        anchors.push_back(Anchor{source, t, label});
    }
    g.add_edge(p, m, std::move(incoming.label), std::move(anchors));
  }
  g.remove_node(n);
  return m;
}

void drop_self_loop(ColoredDirectedGraph &g, NodeId n) { g.remove_edge(n, n); }

} // namespace detail

ColoredDirectedGraph apply_t1(const ColoredDirectedGraph &g, NodeId n) {
  if (!single_successor_applicable(g, n))
    not_applicable(g, n, "T1");
  ColoredDirectedGraph out = g;
  detail::consume(out, n);
  return out;
}

ColoredDirectedGraph apply_t2(const ColoredDirectedGraph &g, NodeId n) {
  if (!t2_applicable(g, n))
    not_applicable(g, n, "T2");
  ColoredDirectedGraph out = g;
  detail::drop_self_loop(out, n);
  return out;
}

ColoredDirectedGraph apply_t3(const ColoredDirectedGraph &g, NodeId n) {
  if (!single_successor_applicable(g, n) || g.kind(n) != NodeKind::Branch)
    not_applicable(g, n, "T3");
  ColoredDirectedGraph out = g;
  detail::consume(out, n);
  return out;
}

namespace {

class Worklist {
public:
  Worklist(std::size_t bound, const ReduceOptions &options)
      : queued_(bound, 0) {
    if (options.shuffle_seed)
      rng_.emplace(*options.shuffle_seed);
  }

  void push(NodeId n) {
    if (queued_[n.value])
      return;
    queued_[n.value] = 1;
    items_.push_back(n);
  }

  bool empty() const { return items_.empty(); }

  NodeId pop() {
    NodeId n;
    if (rng_) {
      std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
      auto i = pick(*rng_);
      n = items_[i];
      items_[i] = items_.back();
      items_.pop_back();
    } else {
      n = items_.front();
      items_.pop_front();
    }
    queued_[n.value] = 0;
    return n;
  }

  void shuffle() {
    if (rng_)
      std::shuffle(items_.begin(), items_.end(), *rng_);
  }

private:
  std::vector<char> queued_;
  std::deque<NodeId> items_;
  std::optional<std::mt19937_64> rng_;
};

} // namespace

Reduction reduce_to_t_irreducible(ColoredDirectedGraph g,
                                  const ReduceOptions &options) {
  ReductionRecord record;
  Worklist work(g.id_bound(), options);
  // Highest ids first: ingest numbers nodes roughly in flow order, so this
  // tends to start near the exit, and it is a plain scan of the node table.
  for (std::size_t i = g.id_bound(); i-- > 0;)
    if (NodeId n{static_cast<std::uint32_t>(i)}; g.contains(n))
      work.push(n);
  work.shuffle();

  std::vector<NodeId> preds;
  while (!work.empty()) {
    NodeId n = work.pop();
    if (!is_consumable(g, n))
      continue;
    if (g.has_self_loop(n)) {
      detail::drop_self_loop(g, n);
      record.steps.push_back({TransformationKind::T2, n, std::nullopt});
    }
    if (!sole_successor(g, n))
      continue;

    auto kind = single_successor_kind(g, n);
    NodeId m = detail::consume(g, n, &preds);
    record.steps.push_back({kind, n, m});
    for (NodeId p : preds)
      work.push(p);
    work.push(m);
  }
  return {std::move(g), std::move(record)};
}

ColoredDirectedGraph replay(ColoredDirectedGraph g,
                            const ReductionRecord &record) {
  for (const auto &step : record.steps) {
    switch (step.kind) {
    case TransformationKind::T2:
      if (!t2_applicable(g, step.node))
        not_applicable(g, step.node, "T2");
      detail::drop_self_loop(g, step.node);
      break;
    case TransformationKind::T1:
    case TransformationKind::T3: {
      if (!single_successor_applicable(g, step.node))
        not_applicable(g, step.node, to_string(step.kind));
      NodeId m = detail::consume(g, step.node);
      if (step.survivor && *step.survivor != m)
        throw Error(ErrorCode::TransformNotApplicable,
                    "replay diverged at node '" + g.name(step.node) + "'");
      break;
    }
    }
  }
  return g;
}

} // namespace efg
