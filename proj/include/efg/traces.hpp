#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "efg/graph.hpp"

namespace efg {

inline constexpr std::size_t kDefaultMaxPaths = 1'000'000;

struct OracleLimits {
  std::size_t max_paths = kDefaultMaxPaths;
};

// An entry-to-exit walk.
struct BoundedPath {
  std::vector<NodeId> nodes;
};

enum class TraceRole : std::uint8_t { Entry, Exit, Event, RelevantBranch };

struct TraceItem {
  NodeId node;
  TraceRole role;
  Label taken_label; // set on RelevantBranch items only

  friend bool operator==(const TraceItem &, const TraceItem &) = default;
};

struct EventTrace {
  std::vector<TraceItem> items;

  friend bool operator==(const EventTrace &, const EventTrace &) = default;
};

// "TOP e1 c1[F] e2 BOT": entry/exit print as TOP/BOT, every other item by
// node name, relevant branches with the taken label in brackets.
std::string render(const ColoredDirectedGraph &g, const EventTrace &trace);

struct EquivalenceClass {
  EventTrace trace;
  std::size_t member_count = 0;
};

// Relevant-node membership indexed by NodeId::value.
using NodeMask = std::vector<char>;

// Colored nodes, entry, exit, plus `branches`.
NodeMask relevant_mask(const ColoredDirectedGraph &g,
                       const std::vector<NodeId> &branches);

// All entry-to-exit walks using each edge at most k times, in lexicographic
// order of node ids at every fork.  Throws OracleTooLarge past
// limits.max_paths walks.
std::vector<BoundedPath> enumerate_bounded_paths(const ColoredDirectedGraph &g,
                                                 unsigned k,
                                                 const OracleLimits &limits = {});

// Keeps entry, exit and relevant nodes of the walk.  A relevant non-colored
// node records the label of the edge the walk left it by.
EventTrace project_to_event_trace(const ColoredDirectedGraph &g,
                                  const BoundedPath &path,
                                  const NodeMask &relevant);

// Walks of a CFG seen through a relevant set: each stretch between two
// consecutive relevant nodes is a simple path, and each transition between
// consecutive relevant nodes (tagged with the caller's state, see
// `ProjectedWalkOptions::step`) is taken at most k times.  This is the CFG
// counterpart of a k-bounded walk of the graph induced on the relevant nodes.
struct ProjectedWalkOptions {
  unsigned k = 1;
  OracleLimits limits;
  // Optional automaton advanced on every relevant node; its state is part of
  // the transition key that the budget counts.
  std::function<std::uint8_t(std::uint8_t state, NodeId node)> step;
  std::uint8_t initial_state = 0;
};

void walk_projected(
    const ColoredDirectedGraph &g, const NodeMask &relevant,
    const ProjectedWalkOptions &options,
    const std::function<void(const EventTrace &, std::uint8_t final_state)>
        &on_walk);

// Groups projected walks of `g` by trace.  The relevant branches come from
// build_efg(g) unless given.  Classes are sorted by rendered trace.
std::vector<EquivalenceClass> equivalence_classes(const ColoredDirectedGraph &g,
                                                  unsigned k,
                                                  const OracleLimits &limits = {});
std::vector<EquivalenceClass>
equivalence_classes(const ColoredDirectedGraph &g, const NodeMask &relevant,
                    unsigned k, const OracleLimits &limits = {});

// Distinct traces of the k-bounded walks of an EFG (every node relevant),
// rendered and sorted.
std::vector<std::string> efg_traces(const ColoredDirectedGraph &efg, unsigned k,
                                    const OracleLimits &limits = {});

// Rewrites the taken label of every relevant branch item to "merged" when the
// EFG edge it leaves by carries the merged label.  CFG-side traces record the
// concrete label of the original edge; the EFG keeps it only when a single
// original label reaches that edge.
EventTrace normalize_labels(EventTrace trace, const ColoredDirectedGraph &efg);

struct BijectionReport {
  bool ok = false;
  std::vector<std::string> cfg_classes; // sorted
  std::vector<std::string> efg_traces;  // sorted
  std::vector<std::string> missing_in_efg;
  std::vector<std::string> missing_in_cfg;
};

// Compares the trace set of the CFG's equivalence classes with the trace set
// of the k-bounded walks of its EFG.
BijectionReport verify_bijection(const ColoredDirectedGraph &cfg, unsigned k,
                                 const OracleLimits &limits = {});

} // namespace efg
