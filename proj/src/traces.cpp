#include "efg/traces.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "efg/efg.hpp"

namespace efg {

namespace {

TraceRole role_of(const ColoredDirectedGraph &g, NodeId n) {
  if (n == g.entry())
    return TraceRole::Entry;
  if (n == g.exit())
    return TraceRole::Exit;
  return g.is_colored(n) ? TraceRole::Event : TraceRole::RelevantBranch;
}

// Out-edges of every node ordered by target id.
std::vector<std::vector<const Edge *>> sorted_adjacency(
    const ColoredDirectedGraph &g) {
  std::vector<std::vector<const Edge *>> adj(g.id_bound());
  for (NodeId n : g.nodes()) {
    for (const Edge &e : g.out_edges(n))
      adj[n.value].push_back(&e);
    std::sort(adj[n.value].begin(), adj[n.value].end(),
              [](const Edge *a, const Edge *b) { return a->to < b->to; });
  }
  return adj;
}

[[noreturn]] void too_large(std::size_t limit) {
  throw Error(ErrorCode::OracleTooLarge,
              "path enumeration exceeded the ceiling of " +
                  std::to_string(limit) + " paths");
}

std::size_t expansion_ceiling(const OracleLimits &limits) {
  return limits.max_paths * 64 + 1'000'000;
}

} // namespace

std::string render(const ColoredDirectedGraph &g, const EventTrace &trace) {
  std::string out;
  for (const auto &item : trace.items) {
    if (!out.empty())
      out += ' ';
    switch (item.role) {
    case TraceRole::Entry:
      out += "TOP";
      break;
    case TraceRole::Exit:
      out += "BOT";
      break;
    default:
      out += g.name(item.node);
      if (item.taken_label) {
        out += '[';
        out += *item.taken_label;
        out += ']';
      }
    }
  }
  return out;
}

NodeMask relevant_mask(const ColoredDirectedGraph &g,
                       const std::vector<NodeId> &branches) {
  NodeMask mask(g.id_bound(), 0);
  for (NodeId n : g.colored())
    mask[n.value] = 1;
  mask[g.entry().value] = 1;
  mask[g.exit().value] = 1;
  for (NodeId b : branches) {
    if (!g.contains(b))
      throw Error(ErrorCode::NotFound,
                  "relevant node " + std::to_string(b.value) +
                      " is not in the graph");
    mask[b.value] = 1;
  }
  return mask;
}

std::vector<BoundedPath> enumerate_bounded_paths(const ColoredDirectedGraph &g,
                                                 unsigned k,
                                                 const OracleLimits &limits) {
  g.validate();
  auto adj = sorted_adjacency(g);
  std::unordered_map<const Edge *, unsigned> uses;
  std::vector<BoundedPath> paths;
  std::vector<NodeId> walk{g.entry()};
  const NodeId exit = g.exit();
  std::size_t expansions = 0;
  const std::size_t ceiling = expansion_ceiling(limits);

  std::function<void(NodeId)> extend = [&](NodeId u) {
    if (++expansions > ceiling)
      too_large(limits.max_paths);
    if (u == exit) {
      if (paths.size() == limits.max_paths)
        too_large(limits.max_paths);
      paths.push_back(BoundedPath{walk});
      return;
    }
    for (const Edge *e : adj[u.value]) {
      unsigned &used = uses[e];
      if (used >= k)
        continue;
      ++used;
      walk.push_back(e->to);
      extend(e->to);
      walk.pop_back();
      --uses[e];
    }
  };
  extend(g.entry());
  return paths;
}

EventTrace project_to_event_trace(const ColoredDirectedGraph &g,
                                  const BoundedPath &path,
                                  const NodeMask &relevant) {
  EventTrace trace;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    NodeId n = path.nodes[i];
    bool keep = n == g.entry() || n == g.exit() ||
                (n.value < relevant.size() && relevant[n.value]);
    if (!keep)
      continue;
    TraceItem item{n, role_of(g, n), std::nullopt};
    if (item.role == TraceRole::RelevantBranch && i + 1 < path.nodes.size())
      if (const Edge *e = g.find_edge(n, path.nodes[i + 1]))
        item.taken_label = e->label;
    trace.items.push_back(std::move(item));
  }
  return trace;
}

namespace {

class ProjectedWalker {
public:
  using Callback =
      std::function<void(const EventTrace &, std::uint8_t final_state)>;

  ProjectedWalker(const ColoredDirectedGraph &g, const NodeMask &relevant,
                  const ProjectedWalkOptions &options, const Callback &on_walk)
      : g_(g), relevant_(relevant), options_(options), on_walk_(on_walk),
        adj_(sorted_adjacency(g)), mark_(g.id_bound(), 0),
        ceiling_(expansion_ceiling(options.limits)) {}

  void run() {
    NodeId entry = g_.entry();
    trace_.items.push_back({entry, TraceRole::Entry, std::nullopt});
    std::uint8_t state = advance(options_.initial_state, entry);
    extend(entry, entry, state, std::nullopt, ++serial_);
  }

private:
  bool is_relevant(NodeId n) const {
    return n == g_.entry() || n == g_.exit() ||
           (n.value < relevant_.size() && relevant_[n.value]);
  }

  std::uint8_t advance(std::uint8_t state, NodeId n) const {
    return options_.step ? options_.step(state, n) : state;
  }

  static std::uint64_t key(NodeId from, NodeId to, std::uint8_t state) {
    return (std::uint64_t{from.value} << 34) ^ (std::uint64_t{to.value} << 2) ^
           state;
  }

  // `u` is the current node, `anchor` the last relevant node on the walk and
  // `first_label` the label of the edge the walk left `anchor` by (unset
  // while standing on the anchor itself).
  void extend(NodeId u, NodeId anchor, std::uint8_t state,
              const Label &first_label, std::uint32_t serial) {
    if (++expansions_ > ceiling_)
      too_large(options_.limits.max_paths);
    const bool at_anchor = u == anchor && trace_.items.back().node == u &&
                           !segment_started_;
    for (const Edge *e : adj_[u.value]) {
      const Label &label = at_anchor ? e->label : first_label;
      NodeId v = e->to;
      if (is_relevant(v)) {
        // An event-free cycle back to a branch leaves the trace unchanged;
        // the EFG drops it as a self-loop.
        if (v == anchor && !g_.is_colored(v))
          continue;
        unsigned &used = uses_[key(anchor, v, state)];
        if (used >= options_.k)
          continue;
        ++used;
        TraceItem &last = trace_.items.back();
        if (last.role == TraceRole::RelevantBranch)
          last.taken_label = label;
        trace_.items.push_back({v, g_.is_colored(v) ? TraceRole::Event
                                   : v == g_.exit() ? TraceRole::Exit
                                                    : TraceRole::RelevantBranch,
                                std::nullopt});
        std::uint8_t next = advance(state, v);
        if (v == g_.exit()) {
          if (emitted_ == options_.limits.max_paths)
            too_large(options_.limits.max_paths);
          ++emitted_;
          on_walk_(trace_, next);
        } else {
          bool saved = segment_started_;
          segment_started_ = false;
          extend(v, v, next, std::nullopt, ++serial_);
          segment_started_ = saved;
        }
        trace_.items.pop_back();
        trace_.items.back().taken_label.reset();
        --uses_[key(anchor, v, state)];
      } else {
        if (mark_[v.value] == serial)
          continue;
        std::uint32_t saved_mark = mark_[v.value];
        mark_[v.value] = serial;
        bool saved = segment_started_;
        segment_started_ = true;
        extend(v, anchor, state, label, serial);
        segment_started_ = saved;
        mark_[v.value] = saved_mark;
      }
    }
  }

  const ColoredDirectedGraph &g_;
  const NodeMask &relevant_;
  const ProjectedWalkOptions &options_;
  const Callback &on_walk_;
  std::vector<std::vector<const Edge *>> adj_;
  std::vector<std::uint32_t> mark_;
  std::unordered_map<std::uint64_t, unsigned> uses_;
  EventTrace trace_;
  std::uint32_t serial_ = 0;
  bool segment_started_ = false;
  std::size_t emitted_ = 0;
  std::size_t expansions_ = 0;
  std::size_t ceiling_;
};

} // namespace

void walk_projected(
    const ColoredDirectedGraph &g, const NodeMask &relevant,
    const ProjectedWalkOptions &options,
    const std::function<void(const EventTrace &, std::uint8_t)> &on_walk) {
  g.validate();
  ProjectedWalker walker(g, relevant, options, on_walk);
  walker.run();
}

std::vector<EquivalenceClass>
equivalence_classes(const ColoredDirectedGraph &g, const NodeMask &relevant,
                    unsigned k, const OracleLimits &limits) {
  std::map<std::string, EquivalenceClass> classes;
  ProjectedWalkOptions options;
  options.k = k;
  options.limits = limits;
  walk_projected(g, relevant, options,
                 [&](const EventTrace &trace, std::uint8_t) {
                   auto [it, fresh] = classes.try_emplace(render(g, trace));
                   if (fresh)
                     it->second.trace = trace;
                   ++it->second.member_count;
                 });
  std::vector<EquivalenceClass> out;
  out.reserve(classes.size());
  for (auto &[_, c] : classes)
    out.push_back(std::move(c));
  return out;
}

std::vector<EquivalenceClass> equivalence_classes(const ColoredDirectedGraph &g,
                                                  unsigned k,
                                                  const OracleLimits &limits) {
  auto built = build_efg(g);
  return equivalence_classes(g, relevant_mask(g, built.relevant_branches()), k,
                             limits);
}

std::vector<std::string> efg_traces(const ColoredDirectedGraph &efg, unsigned k,
                                    const OracleLimits &limits) {
  NodeMask all(efg.id_bound(), 0);
  for (NodeId n : efg.nodes())
    all[n.value] = 1;
  std::set<std::string> traces;
  for (const auto &path : enumerate_bounded_paths(efg, k, limits))
    traces.insert(render(efg, project_to_event_trace(efg, path, all)));
  return {traces.begin(), traces.end()};
}

EventTrace normalize_labels(EventTrace trace, const ColoredDirectedGraph &efg) {
  for (std::size_t i = 0; i + 1 < trace.items.size(); ++i) {
    auto &item = trace.items[i];
    if (item.role != TraceRole::RelevantBranch)
      continue;
    const Edge *e = efg.find_edge(item.node, trace.items[i + 1].node);
    if (e && e->label == Label(std::string(kMergedLabel)))
      item.taken_label = e->label;
  }
  return trace;
}

BijectionReport verify_bijection(const ColoredDirectedGraph &cfg, unsigned k,
                                 const OracleLimits &limits) {
  auto built = build_efg(cfg);
  auto relevant = relevant_mask(cfg, built.relevant_branches());

  std::set<std::string> cfg_side;
  for (const auto &c : equivalence_classes(cfg, relevant, k, limits))
    cfg_side.insert(render(cfg, normalize_labels(c.trace, built.efg)));

  BijectionReport report;
  report.cfg_classes.assign(cfg_side.begin(), cfg_side.end());
  report.efg_traces = efg_traces(built.efg, k, limits);
  std::set_difference(report.cfg_classes.begin(), report.cfg_classes.end(),
                      report.efg_traces.begin(), report.efg_traces.end(),
                      std::back_inserter(report.missing_in_efg));
  std::set_difference(report.efg_traces.begin(), report.efg_traces.end(),
                      report.cfg_classes.begin(), report.cfg_classes.end(),
                      std::back_inserter(report.missing_in_cfg));
  report.ok = report.missing_in_efg.empty() && report.missing_in_cfg.empty();
  return report;
}

} // namespace efg
