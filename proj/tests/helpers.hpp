#pragma once

#include <set>
#include <string>

#include "efg/generator.hpp"
#include "efg/io.hpp"

namespace efg::test {

inline GraphDocument fixture(const std::string &name) {
  std::string path = std::string(EFG_FIXTURE_DIR) + "/" + name;
  return parse_dot(read_file(path), path);
}

inline GraphDocument dot(std::string_view text) { return parse_dot(text); }

inline std::set<std::string> node_names(const ColoredDirectedGraph &g) {
  std::set<std::string> out;
  for (NodeId n : g.nodes())
    out.insert(g.name(n));
  return out;
}

// "a->b" or "a->b[T]" per edge.
inline std::set<std::string> edge_names(const ColoredDirectedGraph &g) {
  std::set<std::string> out;
  for (const Edge &e : g.edges())
    out.insert(g.name(e.from) + "->" + g.name(e.to) +
               (e.label ? "[" + *e.label + "]" : ""));
  return out;
}

inline GenConfig small(std::uint64_t seed) {
  GenConfig c;
  c.nodes = {1, 10};
  c.events = {0, 3};
  c.seed = seed;
  return c;
}

} // namespace efg::test
