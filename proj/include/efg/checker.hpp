#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "efg/graph.hpp"
#include "efg/traces.hpp"

namespace efg {

enum class EventRole : std::uint8_t { First, Second, Flow };

std::string_view to_string(EventRole role);

// Events of one object: e.g. lock as First, unlock as Second, and calls that
// hand the object to someone else as Flow.
struct EventSpec {
  std::string object_id;
  std::map<NodeId, EventRole> events;

  friend bool operator==(const EventSpec &, const EventSpec &) = default;
};

enum class HoldState : std::uint8_t { NoneHeld = 0, Held = 1, Escaped = 2 };

std::string_view to_string(HoldState state);

HoldState advance(HoldState state, EventRole role);

enum class VerdictStatus : std::uint8_t { Safe, Violation, Escapes };

std::string_view to_string(VerdictStatus status);

struct Condition {
  NodeId node;
  Label taken_label;

  friend bool operator==(const Condition &, const Condition &) = default;
};

struct Witness {
  EventTrace trace;
  std::vector<Condition> conditions; // relevant branches of the trace, in order
  HoldState exit_state = HoldState::Held;
};

struct Verdict {
  std::string object_id;
  VerdictStatus status = VerdictStatus::Safe;
  std::vector<Witness> witnesses; // sorted by rendered trace, then exit state
};

// Throws SpecMismatch when the spec has no First event or names a node that
// is not in `g`.
void validate_spec(const ColoredDirectedGraph &g, const EventSpec &spec);

// Copy of `g` where exactly the spec's events are colored.
ColoredDirectedGraph color_for(const ColoredDirectedGraph &g,
                               const EventSpec &spec);

// Checks the EFG of a graph colored per `spec`.  The status comes from an
// exact fixpoint over (node, state) pairs.  Witnesses are the walks reaching
// the exit in Held or Escaped state where each edge is taken at most k times
// per source state.
Verdict check_two_event(const ColoredDirectedGraph &efg, const EventSpec &spec,
                        unsigned k = 1, const OracleLimits &limits = {});

// Same verdict computed by walking the CFG itself.
Verdict check_on_cfg_oracle(const ColoredDirectedGraph &cfg,
                            const EventSpec &spec, unsigned k = 1,
                            const OracleLimits &limits = {});

std::vector<Condition> conditions_of(const EventTrace &trace);

} // namespace efg
