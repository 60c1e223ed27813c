#include "efg/generator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace efg {

namespace {

[[noreturn]] void config_error(const std::string &message) {
  throw Error(ErrorCode::ConfigError, message);
}

// Portable draws: std distributions differ between standard libraries.
class Draw {
public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + below(hi - lo + 1);
  }
  bool chance(double p) {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
  }

private:
  std::mt19937_64 rng_;
};

// Skeleton under construction; node 0 is the entry, node 1 the exit.
struct Skeleton {
  std::size_t size = 2;
  std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}};
  std::set<std::pair<std::size_t, std::size_t>> present{{0, 1}};

  void add(std::size_t u, std::size_t v) {
    if (present.insert({u, v}).second)
      edges.emplace_back(u, v);
  }
  void remove(std::size_t i) {
    present.erase(edges[i]);
    edges[i] = edges.back();
    edges.pop_back();
  }
};

std::vector<std::vector<std::size_t>> adjacency(const Skeleton &s) {
  std::vector<std::vector<std::size_t>> adj(s.size);
  for (auto [u, v] : s.edges)
    adj[u].push_back(v);
  for (auto &a : adj)
    std::sort(a.begin(), a.end());
  return adj;
}

std::vector<char> reachable_from(const std::vector<std::vector<std::size_t>> &adj,
                                 std::size_t root) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return seen;
}

} // namespace

void validate(const GenConfig &c) {
  if (c.nodes.min > c.nodes.max)
    config_error("node range is empty");
  if (c.events.min > c.events.max)
    config_error("event range is empty");
  if (c.events.min > c.nodes.max)
    config_error("more events requested than nodes allowed");
  for (double p : {c.branch_probability, c.loop_probability})
    if (!(p >= 0.0 && p <= 1.0))
      config_error("probabilities must lie in [0, 1]");
  if (c.object_id.empty())
    config_error("object id must not be empty");
}

GraphDocument generate_document(const GenConfig &config) {
  validate(config);
  Draw draw(config.seed);
  const std::size_t n =
      draw.between(std::max(config.nodes.min, config.events.min),
                   config.nodes.max);

  Skeleton s;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = s.size++;
    std::vector<std::size_t> forkable;
    for (std::size_t e = 0; e < s.edges.size(); ++e)
      if (s.edges[e].first != 0)
        forkable.push_back(e);
    if (!forkable.empty() && draw.chance(config.branch_probability)) {
      // parallel arm u -> w -> v next to the edge u -> v
      auto [u, v] = s.edges[forkable[draw.below(forkable.size())]];
      s.add(u, w);
      s.add(w, v);
    } else {
      std::size_t e = draw.below(s.edges.size());
      auto [u, v] = s.edges[e];
      s.remove(e);
      s.add(u, w);
      s.add(w, v);
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::string> labels;
  {
    auto adj = adjacency(s);
    for (std::size_t u = 2; u < s.size; ++u)
      if (adj[u].size() >= 2)
        for (std::size_t j = 0; j < adj[u].size(); ++j)
          labels[{u, adj[u][j]}] =
              j == 0 ? "T" : j == 1 ? "F" : "L" + std::to_string(j);
  }

  for (std::size_t b = 0; b < config.max_back_edges && n > 0; ++b) {
    if (!draw.chance(config.loop_probability))
      continue;
    auto adj = adjacency(s);
    std::size_t u = 2 + draw.below(n);
    std::vector<std::size_t> heads;
    for (std::size_t v = 2; v < s.size; ++v)
      if (!s.present.contains({u, v}) && reachable_from(adj, v)[u])
        heads.push_back(v);
    if (heads.empty())
      continue;
    std::size_t v = heads[draw.below(heads.size())];
    if (adj[u].size() == 1)
      labels[{u, adj[u][0]}] = "T";
    s.add(u, v);
    labels[{u, v}] = "loop";
  }

  std::vector<std::size_t> internal(n);
  for (std::size_t i = 0; i < n; ++i)
    internal[i] = i + 2;
  std::vector<char> is_event(s.size, 0);
  const std::size_t event_count =
      draw.between(config.events.min, std::min(config.events.max, n));
  for (std::size_t i = 0; i < event_count; ++i) {
    std::size_t j = i + draw.below(internal.size() - i);
    std::swap(internal[i], internal[j]);
    is_event[internal[i]] = 1;
  }

  auto adj = adjacency(s);
  GraphDocument doc;
  doc.name = "gen_" + std::to_string(config.seed);
  ColoredDirectedGraph &g = doc.graph;
  std::vector<NodeId> id(s.size);
  id[0] = g.add_node("TOP", NodeKind::Entry);
  id[1] = g.add_node("BOT", NodeKind::Exit);
  std::size_t events_named = 0, others_named = 0;
  for (std::size_t u = 2; u < s.size; ++u) {
    if (is_event[u]) {
      id[u] = g.add_node("e" + std::to_string(++events_named), NodeKind::Event);
      g.set_colored(id[u], true);
    } else {
      id[u] = g.add_node("n" + std::to_string(++others_named),
                         adj[u].size() >= 2 ? NodeKind::Branch
                                            : NodeKind::Plain);
    }
  }
  for (std::size_t u = 0; u < s.size; ++u)
    for (std::size_t v : adj[u]) {
      auto it = labels.find({u, v});
      g.add_edge(id[u], id[v],
                 it == labels.end() ? Label{} : Label{it->second});
    }

  if (event_count > 0) {
    EventSpec spec;
    spec.object_id = config.object_id;
    bool has_first = false;
    for (std::size_t i = 0; i < event_count; ++i) {
      std::size_t roll = draw.below(20);
      EventRole role = roll < 9    ? EventRole::First
                       : roll < 18 ? EventRole::Second
                                   : EventRole::Flow;
      has_first = has_first || role == EventRole::First;
      spec.events[id[internal[i]]] = role;
    }
    if (!has_first)
      spec.events.begin()->second = EventRole::First;
    doc.specs.push_back(std::move(spec));
  }
  g.validate();
  return doc;
}

ColoredDirectedGraph generate_cfg(const GenConfig &config) {
  return generate_document(config).graph;
}

ColoredDirectedGraph generate_ladder(std::size_t nodes, std::uint64_t seed) {
  Draw draw(seed);
  ColoredDirectedGraph g;
  NodeId entry = g.add_node("TOP", NodeKind::Entry);
  NodeId exit = g.add_node("BOT", NodeKind::Exit);
  NodeId tail = entry;
  std::size_t block = 0;
  // Each block: c -> {a, b} -> d, sometimes with a loop d -> c and an event
  // after d.
  while (g.node_count() + 5 <= std::max<std::size_t>(nodes, 7)) {
    std::string tag = std::to_string(block++);
    NodeId c = g.add_node("c" + tag, NodeKind::Branch);
    NodeId a = g.add_node("a" + tag, NodeKind::Plain);
    NodeId b = g.add_node("b" + tag, NodeKind::Plain);
    g.add_edge(tail, c);
    g.add_edge(c, a, "T");
    g.add_edge(c, b, "F");
    bool loop = draw.below(8) == 0;
    NodeId d = g.add_node("d" + tag, loop ? NodeKind::Branch : NodeKind::Plain);
    g.add_edge(a, d);
    g.add_edge(b, d);
    tail = d;
    if (loop) {
      g.add_edge(d, c, "loop");
    }
    if (draw.below(6) == 0) {
      NodeId e = g.add_node("e" + tag, NodeKind::Event);
      g.set_colored(e, true);
      if (loop)
        g.add_edge(d, e, "T");
      else
        g.add_edge(d, e);
      tail = e;
    } else if (loop) {
      NodeId x = g.add_node("x" + tag, NodeKind::Plain);
      g.add_edge(d, x, "T");
      tail = x;
    }
  }
  g.add_edge(tail, exit);
  return g;
}

} // namespace efg
