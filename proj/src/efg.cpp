#include "efg/efg.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace efg {

std::vector<std::vector<NodeId>> tarjan_scc(const ColoredDirectedGraph &g,
                                            std::span<const NodeId> nodes) {
  // Per id: 0 outside the subgraph, 1 not yet visited, else visit index + 2.
  // Everything else is indexed by visit order, so sparse subgraphs of a large
  // table stay cheap.
  constexpr std::uint32_t kOutside = 0, kUnvisited = 1;
  std::vector<std::uint32_t> slot(g.id_bound(), kOutside);
  for (NodeId n : nodes) {
    if (!g.contains(n))
      throw Error(ErrorCode::NotFound,
                  "node " + std::to_string(n.value) + " is not in the graph");
    slot[n.value] = kUnvisited;
  }

  std::vector<std::uint32_t> low;
  std::vector<char> on_stack;
  low.reserve(nodes.size());
  on_stack.reserve(nodes.size());
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> components;

  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<Frame> calls;

  auto index_of = [&](NodeId v) { return slot[v.value] - 2; };
  auto open = [&](NodeId v) {
    slot[v.value] = static_cast<std::uint32_t>(low.size()) + 2;
    low.push_back(static_cast<std::uint32_t>(low.size()));
    on_stack.push_back(1);
    stack.push_back(v);
    calls.push_back({v, 0});
  };

  std::vector<NodeId> roots(nodes.begin(), nodes.end());
  std::sort(roots.begin(), roots.end());
  for (NodeId root : roots) {
    if (slot[root.value] != kUnvisited)
      continue;
    open(root);
    while (!calls.empty()) {
      Frame &frame = calls.back();
      NodeId v = frame.node;
      auto out = g.out_edges(v);
      if (frame.next < out.size()) {
        NodeId w = out[frame.next++].to;
        if (slot[w.value] == kOutside)
          continue;
        if (slot[w.value] == kUnvisited)
          open(w);
        else if (on_stack[index_of(w)])
          low[index_of(v)] = std::min(low[index_of(v)], index_of(w));
        continue;
      }
      calls.pop_back();
      if (!calls.empty()) {
        auto parent = index_of(calls.back().node);
        low[parent] = std::min(low[parent], low[index_of(v)]);
      }
      if (low[index_of(v)] == index_of(v)) {
        std::vector<NodeId> component;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[index_of(w)] = 0;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  return components;
}

std::vector<NodeId> EfgResult::relevant_branches() const {
  std::vector<NodeId> out;
  for (NodeId n : efg.nodes())
    if (is_consumable(efg, n))
      out.push_back(n);
  return out;
}

namespace {

// Steps 2 and 3: contract every non-trivial SCC of the non-colored part into
// a fresh ContractedScc node, keeping the original edges as anchors.
ColoredDirectedGraph condense(const ColoredDirectedGraph &tirr,
                              std::map<NodeId, std::vector<NodeId>> &scc_map) {
  std::vector<NodeId> uncolored;
  for (NodeId n : tirr.nodes())
    if (is_consumable(tirr, n))
      uncolored.push_back(n);

  auto components = tarjan_scc(tirr, uncolored);
  std::erase_if(components, [&](const std::vector<NodeId> &c) {
    return c.size() < 2;
  });
  std::sort(components.begin(), components.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });

  ColoredDirectedGraph ccg = tirr;
  if (components.empty())
    return ccg;
  std::vector<NodeId> contracted_members;
  std::vector<NodeId> contracted;
  for (std::size_t i = 0; i < components.size(); ++i) {
    NodeId x = ccg.add_node("scc" + std::to_string(i), NodeKind::ContractedScc);
    contracted.push_back(x);
    scc_map.emplace(x, components[i]);
  }

  std::vector<NodeId> rep(ccg.id_bound());
  for (std::uint32_t i = 0; i < rep.size(); ++i)
    rep[i] = NodeId{i};
  for (std::size_t i = 0; i < components.size(); ++i)
    for (NodeId m : components[i]) {
      rep[m.value] = contracted[i];
      contracted_members.push_back(m);
    }

  std::vector<Edge> rerouted;
  for (const Edge &e : tirr.edges())
    if (rep[e.from.value] != e.from || rep[e.to.value] != e.to)
      rerouted.push_back(e);
  for (NodeId m : contracted_members)
    ccg.remove_node(m);
  for (const Edge &e : rerouted)
    ccg.add_edge(rep[e.from.value], rep[e.to.value], e.label, e.anchors);
  return ccg;
}

// Step 5.
ColoredDirectedGraph expand(const ColoredDirectedGraph &cefg,
                            const ColoredDirectedGraph &tirr,
                            const std::map<NodeId, std::vector<NodeId>> &scc_map) {
  ColoredDirectedGraph efg = cefg;
  std::vector<Edge> external;
  std::vector<NodeId> surviving;
  for (const auto &[x, members] : scc_map) {
    if (!cefg.contains(x))
      continue;
    surviving.push_back(x);
    for (const Edge &e : cefg.out_edges(x))
      external.push_back(e);
    for (NodeId p : cefg.predecessors(x))
      external.push_back(*cefg.find_edge(p, x));
  }
  for (NodeId x : surviving)
    efg.remove_node(x);
  for (NodeId x : surviving)
    for (NodeId m : scc_map.at(x))
      efg.revive_node(m, tirr.kind(m));
  for (NodeId x : surviving)
    for (NodeId m : scc_map.at(x))
      for (const Edge &e : tirr.out_edges(m))
        if (std::binary_search(scc_map.at(x).begin(), scc_map.at(x).end(),
                               e.to))
          efg.add_edge(e.from, e.to, e.label, e.anchors);
  for (const Edge &e : external)
    for (const Anchor &a : e.anchors) {
      if (!efg.contains(a.from) || !efg.contains(a.to))
        throw Error(ErrorCode::InvalidGraph,
                    "dangling anchor while expanding contracted components");
      efg.add_edge(a.from, a.to, a.label, std::span<const Anchor>(&a, 1));
    }
  return efg;
}

} // namespace

EfgResult build_efg(const ColoredDirectedGraph &cfg,
                    const BuildOptions &options) {
  cfg.validate();
  ReduceOptions reduce_options{options.shuffle_seed};

  EfgResult result;
  auto first = reduce_to_t_irreducible(cfg, reduce_options);
  result.t_irreducible = std::move(first.graph);
  result.record = std::move(first.record);

  auto ccg = condense(result.t_irreducible, result.scc_map);

  auto second = reduce_to_t_irreducible(std::move(ccg), reduce_options);
  result.condensed_efg = std::move(second.graph);
  result.condensed_record = std::move(second.record);

  result.efg = expand(result.condensed_efg, result.t_irreducible,
                      result.scc_map);
  return result;
}

namespace {

// Dense bitset over the alive nodes of one small graph.
class SubsetSpace {
public:
  SubsetSpace(const ColoredDirectedGraph &g, std::size_t bound) {
    position_.resize(g.id_bound(), 0);
    for (NodeId n : g.nodes()) {
      position_[n.value] = all_.size();
      all_.push_back(n);
      if (is_consumable(g, n))
        candidates_.push_back(n);
    }
    if (candidates_.size() > bound || candidates_.size() >= 63)
      throw Error(ErrorCode::OracleTooLarge,
                  "subset oracle limited to " + std::to_string(bound) +
                      " non-colored nodes, graph has " +
                      std::to_string(candidates_.size()));
    words_ = (all_.size() + 63) / 64;
    successor_bits_.assign(candidates_.size() * words_, 0);
    for (std::size_t i = 0; i < candidates_.size(); ++i)
      for (const Edge &e : g.out_edges(candidates_[i])) {
        auto p = position_[e.to.value];
        successor_bits_[i * words_ + p / 64] |= std::uint64_t{1} << (p % 64);
      }
    candidate_bits_.assign(candidates_.size() * words_, 0);
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      auto p = position_[candidates_[i].value];
      candidate_bits_[i * words_ + p / 64] |= std::uint64_t{1} << (p % 64);
    }
  }

  std::size_t candidate_count() const { return candidates_.size(); }
  NodeId candidate(std::size_t i) const { return candidates_[i]; }

  // |suc(S)| for S given as a mask over candidates.
  std::size_t successor_count(std::uint64_t subset) const {
    std::vector<std::uint64_t> succ(words_, 0), members(words_, 0);
    for (std::size_t i = 0; i < candidates_.size(); ++i)
      if (subset >> i & 1)
        for (std::size_t w = 0; w < words_; ++w) {
          succ[w] |= successor_bits_[i * words_ + w];
          members[w] |= candidate_bits_[i * words_ + w];
        }
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w)
      count += static_cast<std::size_t>(std::popcount(succ[w] & ~members[w]));
    return count;
  }

  // Mask of candidates that are successors of candidate i; false if some
  // successor is not a candidate.
  bool successor_mask(std::size_t i, std::uint64_t &mask) const {
    mask = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = successor_bits_[i * words_ + w];
      while (bits) {
        auto b = static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        auto node = all_[w * 64 + b];
        auto it = std::find(candidates_.begin(), candidates_.end(), node);
        if (it == candidates_.end())
          return false;
        mask |= std::uint64_t{1} << (it - candidates_.begin());
      }
    }
    return true;
  }

private:
  std::vector<NodeId> all_;
  std::vector<NodeId> candidates_;
  std::vector<std::size_t> position_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> successor_bits_;
  std::vector<std::uint64_t> candidate_bits_;
};

} // namespace

std::vector<NodeId>
find_irrelevant_branch_nodes_bruteforce(const ColoredDirectedGraph &g,
                                        std::size_t bound) {
  SubsetSpace space(g, bound);
  const std::size_t n = space.candidate_count();

  // Required members of S for each branch candidate: itself plus successors.
  std::vector<std::uint64_t> required(n, 0);
  std::vector<char> eligible(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.out_degree(space.candidate(i)) < 2)
      continue;
    std::uint64_t mask;
    if (!space.successor_mask(i, mask))
      continue;
    required[i] = mask | (std::uint64_t{1} << i);
    eligible[i] = 1;
  }

  std::vector<char> irrelevant(n, 0);
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << n); ++subset) {
    bool useful = false;
    for (std::size_t i = 0; i < n && !useful; ++i)
      useful = eligible[i] && !irrelevant[i] &&
               (subset & required[i]) == required[i];
    if (!useful || space.successor_count(subset) != 1)
      continue;
    for (std::size_t i = 0; i < n; ++i)
      if (eligible[i] && (subset & required[i]) == required[i])
        irrelevant[i] = 1;
  }

  std::vector<NodeId> out;
  for (std::size_t i = 0; i < n; ++i)
    if (irrelevant[i])
      out.push_back(space.candidate(i));
  return out;
}

std::optional<std::vector<NodeId>>
find_subgraph_with_few_successors(const ColoredDirectedGraph &g,
                                  std::size_t bound) {
  SubsetSpace space(g, bound);
  const std::size_t n = space.candidate_count();
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << n); ++subset) {
    if (space.successor_count(subset) >= 2)
      continue;
    std::vector<NodeId> members;
    for (std::size_t i = 0; i < n; ++i)
      if (subset >> i & 1)
        members.push_back(space.candidate(i));
    return members;
  }
  return std::nullopt;
}

} // namespace efg
