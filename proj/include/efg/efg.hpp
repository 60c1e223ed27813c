#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "efg/graph.hpp"
#include "efg/reduce.hpp"

namespace efg {

// Maximal strongly-connected components of the subgraph induced by `nodes`.
// Components come out in reverse topological order of the condensation
// (sinks first); members of each component are sorted.  Iterative, linear in
// the size of the induced subgraph.
std::vector<std::vector<NodeId>> tarjan_scc(const ColoredDirectedGraph &g,
                                            std::span<const NodeId> nodes);

struct BuildOptions {
  // Forwarded to both reductions; used to check order independence.
  std::optional<std::uint64_t> shuffle_seed;
};

// Everything the CFG-to-EFG pipeline produces.  Contracted components live in
// the same node table as the input; `scc_map` takes each contracted node id to
// its member nodes.
struct EfgResult {
  ColoredDirectedGraph t_irreducible;  // after the first reduction
  ColoredDirectedGraph condensed_efg;  // after the second reduction
  ColoredDirectedGraph efg;            // contracted components expanded
  ReductionRecord record;              // first reduction
  ReductionRecord condensed_record;    // second reduction
  std::map<NodeId, std::vector<NodeId>> scc_map;

  // Non-colored, non-terminal nodes of the EFG.
  std::vector<NodeId> relevant_branches() const;
};

// Builds the event-flow graph of a well-formed CFG w.r.t. its colored nodes.
//   1. reduce to a T-irreducible graph;
//   2. condense the non-colored, non-terminal part by SCC;
//   3. re-attach colored and terminal nodes to the contracted nodes;
//   4. reduce again;
//   5. expand every contracted node that survived, re-attaching each external
//      edge at the member pairs recorded in its anchors.
EfgResult build_efg(const ColoredDirectedGraph &cfg,
                    const BuildOptions &options = {});

// Default ceiling on the number of candidate nodes for the subset oracles.
inline constexpr std::size_t kSubsetOracleBound = 16;

// Brute-force search for irrelevant branch nodes: a non-colored, non-terminal
// node c with at least two out-edges for which some event-free set S of
// non-terminal nodes holding c and every successor of c has exactly one
// successor outside S.  Throws OracleTooLarge past `bound` candidates.
std::vector<NodeId> find_irrelevant_branch_nodes_bruteforce(
    const ColoredDirectedGraph &g, std::size_t bound = kSubsetOracleBound);

// Returns some non-empty set of non-colored, non-terminal nodes with fewer
// than two successors outside it, or nothing if every such set has at least
// two.  Throws OracleTooLarge past `bound` candidates.
std::optional<std::vector<NodeId>> find_subgraph_with_few_successors(
    const ColoredDirectedGraph &g, std::size_t bound = kSubsetOracleBound);

} // namespace efg
