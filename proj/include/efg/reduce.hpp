#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "efg/graph.hpp"

namespace efg {

// T1: consume a non-colored node with a single successor.
// T2: drop the self-loop of a non-colored node.
// T3: consume a non-colored branch node whose edges all lead to one node.
enum class TransformationKind : std::uint8_t { T1, T2, T3 };

std::string_view to_string(TransformationKind kind);

struct ReductionStep {
  TransformationKind kind;
  // The consumed node (T1/T3) or the node whose self-loop was dropped (T2).
  NodeId node;
  // The node that absorbed `node`; empty for T2.
  std::optional<NodeId> survivor;

  friend bool operator==(const ReductionStep &, const ReductionStep &) = default;
};

struct ReductionRecord {
  std::vector<ReductionStep> steps;

  std::size_t count(TransformationKind kind) const;
};

struct ReduceOptions {
  // When set, the worklist is visited in a random order drawn from this seed
  // instead of the deterministic post-order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct Reduction {
  ColoredDirectedGraph graph;
  ReductionRecord record;
};

// Nodes no transformation may touch: colored, entry, exit.
bool is_consumable(const ColoredDirectedGraph &g, NodeId n);

// True when T1/T3 applies: consumable, no self-loop, exactly one successor.
bool single_successor_applicable(const ColoredDirectedGraph &g, NodeId n);
bool t2_applicable(const ColoredDirectedGraph &g, NodeId n);
bool is_t_irreducible(const ColoredDirectedGraph &g);

// Single transformations on a copy.  Throw TransformNotApplicable when the
// precondition does not hold.  apply_t3 additionally requires a Branch node.
ColoredDirectedGraph apply_t1(const ColoredDirectedGraph &g, NodeId n);
ColoredDirectedGraph apply_t2(const ColoredDirectedGraph &g, NodeId n);
ColoredDirectedGraph apply_t3(const ColoredDirectedGraph &g, NodeId n);

// Runs T1/T2/T3 to a fixpoint.  Colored and protected nodes always survive.
Reduction reduce_to_t_irreducible(ColoredDirectedGraph g,
                                  const ReduceOptions &options = {});

// Re-applies the recorded steps, in order, to `g`.
ColoredDirectedGraph replay(ColoredDirectedGraph g,
                            const ReductionRecord &record);

namespace detail {

// In-place consumption of `n` by its single successor; returns the survivor.
// Each predecessor p gets (p, m) labelled like (p, n); anchors compose as
// sources of (p, n) crossed with targets of (n, m).
// Fills `predecessors` (when given) with the former predecessors of n.
NodeId consume(ColoredDirectedGraph &g, NodeId n,
               std::vector<NodeId> *predecessors = nullptr);
void drop_self_loop(ColoredDirectedGraph &g, NodeId n);

} // namespace detail

} // namespace efg
