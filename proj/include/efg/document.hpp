#pragma once

#include <string>
#include <vector>

#include "efg/checker.hpp"
#include "efg/graph.hpp"

namespace efg {

// One CFG plus the event specs declared inline on its nodes.
struct GraphDocument {
  std::string name;
  ColoredDirectedGraph graph;
  std::vector<EventSpec> specs; // sorted by object id
};

} // namespace efg
