#include "efg/stats.hpp"

#include <cmath>
#include <cstdio>

namespace efg {

double reduction_percentage(std::size_t before, std::size_t after) {
  if (before == 0)
    return 0.0;
  double p = 100.0 * (static_cast<double>(before) - static_cast<double>(after)) /
             static_cast<double>(before);
  return std::round(p * 10.0) / 10.0;
}

std::size_t branch_count(const ColoredDirectedGraph &g) {
  std::size_t count = 0;
  for (NodeId n : g.nodes())
    if (!g.is_colored(n) && !g.is_protected(n) && g.out_degree(n) >= 2)
      ++count;
  return count;
}

double GraphStats::node_percentage() const {
  return reduction_percentage(nodes_before, nodes_after);
}
double GraphStats::edge_percentage() const {
  return reduction_percentage(edges_before, edges_after);
}
double GraphStats::branch_percentage() const {
  return reduction_percentage(branch_before, branch_after);
}

GraphStats compute_stats(const ColoredDirectedGraph &before,
                         const ColoredDirectedGraph &after,
                         std::string graph_id) {
  GraphStats s;
  s.graph_id = std::move(graph_id);
  s.nodes_before = before.node_count();
  s.nodes_after = after.node_count();
  s.edges_before = before.edge_count();
  s.edges_after = after.edge_count();
  s.branch_before = branch_count(before);
  s.branch_after = branch_count(after);
  return s;
}

Histogram size_histogram(const std::vector<std::size_t> &values) {
  Histogram h;
  h.labels = {"<=5", "6-10", "11-30", "31-50", ">50"};
  for (auto v : values)
    ++h.counts[v <= 5 ? 0 : v <= 10 ? 1 : v <= 30 ? 2 : v <= 50 ? 3 : 4];
  return h;
}

Histogram branch_histogram(const std::vector<std::size_t> &values) {
  Histogram h;
  h.labels = {"0", "1-5", "6-10", "11-30", ">30"};
  for (auto v : values)
    ++h.counts[v == 0 ? 0 : v <= 5 ? 1 : v <= 10 ? 2 : v <= 30 ? 3 : 4];
  return h;
}

CorpusStats summarize(std::vector<GraphStats> graphs) {
  CorpusStats c;
  std::vector<std::size_t> nb, na, eb, ea, bb, ba;
  for (const auto &g : graphs) {
    nb.push_back(g.nodes_before);
    na.push_back(g.nodes_after);
    eb.push_back(g.edges_before);
    ea.push_back(g.edges_after);
    bb.push_back(g.branch_before);
    ba.push_back(g.branch_after);
  }
  c.graphs = std::move(graphs);
  c.nodes_before = size_histogram(nb);
  c.nodes_after = size_histogram(na);
  c.edges_before = size_histogram(eb);
  c.edges_after = size_histogram(ea);
  c.branch_before = branch_histogram(bb);
  c.branch_after = branch_histogram(ba);
  return c;
}

namespace {

std::string format(const char *fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void histogram_row(std::string &out, const char *name, const Histogram &h) {
  out += format("%-14s", name);
  for (std::size_t i = 0; i < kBucketCount; ++i)
    out += format(" %8s", std::string(h.labels[i]).c_str());
  out += '\n';
  out += format("%-14s", "");
  for (std::size_t i = 0; i < kBucketCount; ++i)
    out += format(" %8zu", h.counts[i]);
  out += '\n';
}

} // namespace

std::string render_table(const CorpusStats &c) {
  std::size_t width = 8;
  for (const auto &g : c.graphs)
    width = std::max(width, g.graph_id.size());
  std::string out;
  out += format("%-*s %8s %8s %6s %8s %8s %6s %8s %8s %6s\n",
                static_cast<int>(width), "graph", "nodes", "efg", "P(%)",
                "edges", "efg", "P(%)", "branch", "efg", "P(%)");
  for (const auto &g : c.graphs)
    out += format("%-*s %8zu %8zu %6.1f %8zu %8zu %6.1f %8zu %8zu %6.1f\n",
                  static_cast<int>(width), g.graph_id.c_str(), g.nodes_before,
                  g.nodes_after, g.node_percentage(), g.edges_before,
                  g.edges_after, g.edge_percentage(), g.branch_before,
                  g.branch_after, g.branch_percentage());
  out += '\n';
  histogram_row(out, "efg nodes", c.nodes_after);
  histogram_row(out, "efg edges", c.edges_after);
  histogram_row(out, "efg branches", c.branch_after);
  return out;
}

} // namespace efg
