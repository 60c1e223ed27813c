#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "efg/document.hpp"

namespace efg {

struct IntRange {
  std::size_t min = 0;
  std::size_t max = 0;
};

struct GenConfig {
  IntRange nodes{1, 10};  // non-terminal nodes
  IntRange events{0, 3};
  double branch_probability = 0.35;
  double loop_probability = 0.5;
  std::size_t max_back_edges = 2;
  std::uint64_t seed = 0;
  std::string object_id = "obj";
};

// Throws ConfigError on empty ranges, probabilities outside [0,1] or more
// events than nodes.
void validate(const GenConfig &config);

// Random series-parallel skeleton between entry and exit, then up to
// max_back_edges back edges.  Branch out-edges are labelled T, F, L2, L3, ...
// and back edges "loop".  Events are colored; the returned document carries
// one spec for config.object_id with at least one First event (when there are
// events at all).
GraphDocument generate_document(const GenConfig &config);
ColoredDirectedGraph generate_cfg(const GenConfig &config);

// Large structured CFG for timing: a chain of diamonds with an event every
// few blocks and a loop every few blocks.  Roughly `nodes` nodes.
ColoredDirectedGraph generate_ladder(std::size_t nodes, std::uint64_t seed);

} // namespace efg
