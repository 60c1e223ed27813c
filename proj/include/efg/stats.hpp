#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "efg/graph.hpp"

namespace efg {

// 100 * (before - after) / before rounded to one decimal; 0 when before is 0.
double reduction_percentage(std::size_t before, std::size_t after);

// Non-colored, non-terminal nodes with at least two out-edges.
std::size_t branch_count(const ColoredDirectedGraph &g);

struct GraphStats {
  std::string graph_id;
  std::size_t nodes_before = 0, nodes_after = 0;
  std::size_t edges_before = 0, edges_after = 0;
  std::size_t branch_before = 0, branch_after = 0;

  double node_percentage() const;
  double edge_percentage() const;
  double branch_percentage() const;
};

GraphStats compute_stats(const ColoredDirectedGraph &before,
                         const ColoredDirectedGraph &after,
                         std::string graph_id = {});

inline constexpr std::size_t kBucketCount = 5;

struct Histogram {
  std::array<std::string_view, kBucketCount> labels;
  std::array<std::size_t, kBucketCount> counts{};
};

// Buckets <=5, 6-10, 11-30, 31-50, >50.
Histogram size_histogram(const std::vector<std::size_t> &values);
// Buckets 0, 1-5, 6-10, 11-30, >30.
Histogram branch_histogram(const std::vector<std::size_t> &values);

struct CorpusStats {
  std::vector<GraphStats> graphs;
  Histogram nodes_before, nodes_after;
  Histogram edges_before, edges_after;
  Histogram branch_before, branch_after;
};

CorpusStats summarize(std::vector<GraphStats> graphs);

// Plain-text per-graph table (counts and P% for nodes, edges and branch
// nodes) followed by the bucket distributions.
std::string render_table(const CorpusStats &corpus);

} // namespace efg
