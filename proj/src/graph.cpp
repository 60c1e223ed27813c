#include "efg/graph.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_set>

namespace efg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotFound:
    return "NotFound";
  case ErrorCode::InvalidGraph:
    return "InvalidGraph";
  case ErrorCode::TransformNotApplicable:
    return "TransformNotApplicable";
  case ErrorCode::OracleTooLarge:
    return "OracleTooLarge";
  case ErrorCode::SpecMismatch:
    return "SpecMismatch";
  case ErrorCode::ConfigError:
    return "ConfigError";
  case ErrorCode::Ingest:
    return "Ingest";
  }
  return "?";
}

std::string Diagnostic::format(std::string_view source) const {
  std::ostringstream out;
  out << source;
  if (line > 0)
    out << ':' << line << ':' << column;
  out << ": error[" << code << "]: " << message;
  return out.str();
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
  case NodeKind::Entry:
    return "entry";
  case NodeKind::Exit:
    return "exit";
  case NodeKind::Event:
    return "event";
  case NodeKind::Branch:
    return "branch";
  case NodeKind::Plain:
    return "plain";
  case NodeKind::ContractedScc:
    return "scc";
  }
  return "?";
}

Label::Label(std::string_view text) {
  static std::mutex lock;
  static std::unordered_set<std::string> interned;
  std::lock_guard guard(lock);
  text_ = &*interned.emplace(text).first;
}

const std::string &Label::value() const {
  if (!text_)
    throw std::bad_optional_access();
  return *text_;
}

Label merge_labels(const Label &a, const Label &b) {
  if (a == b)
    return a;
  static const Label merged{kMergedLabel};
  return merged;
}

namespace {

bool anchor_less(const Anchor &a, const Anchor &b) {
  return std::tie(a.from, a.to) < std::tie(b.from, b.to);
}

// Unites `extra` into the sorted anchor list, merging labels of equal pairs.
void unite_anchors(AnchorList &into, std::span<const Anchor> extra) {
  into.append(extra.data(), extra.data() + extra.size());
  if (!std::is_sorted(into.begin(), into.end(), anchor_less))
    std::stable_sort(into.begin(), into.end(), anchor_less);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < into.size(); ++i) {
    Anchor &last = into[kept - (kept > 0)];
    if (kept > 0 && last.from == into[i].from && last.to == into[i].to) {
      last.label = merge_labels(last.label, into[i].label);
    } else {
      if (kept != i)
        into[kept] = std::move(into[i]);
      ++kept;
    }
  }
  into.truncate(kept);
}

template <typename List> void erase_one(List &list, NodeId value) {
  auto it = std::find(list.begin(), list.end(), value);
  if (it != list.end()) {
    *it = list.back();
    list.pop_back();
  }
}

} // namespace

void AnchorList::grow(std::size_t n) {
  auto *grown = new Anchor[n];
  std::copy(begin(), end(), grown);
  if (capacity_ > 1)
    delete[] heap_;
  heap_ = grown;
  capacity_ = static_cast<std::uint32_t>(n);
}

std::vector<NodeId> Edge::anchor_targets() const {
  std::vector<NodeId> out;
  out.reserve(anchors.size());
  for (const auto &a : anchors)
    out.push_back(a.to);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> Edge::anchor_sources() const {
  std::vector<NodeId> out;
  out.reserve(anchors.size());
  for (const auto &a : anchors)
    out.push_back(a.from);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId ColoredDirectedGraph::add_node(std::string name, NodeKind kind) {
  NodeId id{static_cast<std::uint32_t>(mut().nodes.size())};
  if (kind == NodeKind::Entry) {
    if (entry_)
      throw Error(ErrorCode::InvalidGraph, "graph already has an entry node");
    entry_ = id;
  } else if (kind == NodeKind::Exit) {
    if (exit_)
      throw Error(ErrorCode::InvalidGraph, "graph already has an exit node");
    exit_ = id;
  }
  if (!names_)
    names_ = std::make_shared<std::vector<std::string>>();
  else if (names_.use_count() > 1)
    names_ = std::make_shared<std::vector<std::string>>(*names_);
  names_->push_back(std::move(name));
  mut().nodes.push_back(NodeRecord{kind, false, true});
  mut().out.emplace_back();
  mut().in.emplace_back();
  ++alive_count_;
  return id;
}

void ColoredDirectedGraph::unknown_node(NodeId node) {
  throw Error(ErrorCode::NotFound,
              "unknown node id " + std::to_string(node.value));
}

Edge *ColoredDirectedGraph::find_edge_mut(NodeId from, NodeId to) {
  if (!contains(from))
    return nullptr;
  for (auto &e : mut().out[from.value])
    if (e.to == to)
      return &e;
  return nullptr;
}

const Edge *ColoredDirectedGraph::find_edge(NodeId from, NodeId to) const {
  if (!contains(from))
    return nullptr;
  for (const auto &e : st().out[from.value])
    if (e.to == to)
      return &e;
  return nullptr;
}

bool ColoredDirectedGraph::add_edge(NodeId from, NodeId to, Label label) {
  Anchor self{from, to, label};
  return add_edge(from, to, std::move(label), std::span<const Anchor>(&self, 1));
}

bool ColoredDirectedGraph::add_edge(NodeId from, NodeId to, Label label,
                                    std::span<const Anchor> anchors) {
  return add_edge(from, to, std::move(label), AnchorList(anchors));
}

bool ColoredDirectedGraph::add_edge(NodeId from, NodeId to, Label label,
                                    AnchorList &&anchors) {
  require(from);
  require(to);
  if (Edge *existing = find_edge_mut(from, to)) {
    existing->label = merge_labels(existing->label, label);
    unite_anchors(existing->anchors, anchors);
    return false;
  }
  Edge e{from, to, std::move(label), std::move(anchors)};
  if (e.anchors.empty())
    e.anchors.push_back(Anchor{from, to, e.label});
  else
    unite_anchors(e.anchors, {});
  mut().out[from.value].push_back(std::move(e));
  mut().in[to.value].push_back(from);
  ++edge_count_;
  return true;
}

void ColoredDirectedGraph::remove_edge(NodeId from, NodeId to) {
  take_edge(from, to);
}

Edge ColoredDirectedGraph::take_edge(NodeId from, NodeId to) {
  require(from);
  auto &out = mut().out[from.value];
  Edge *it = std::find_if(out.begin(), out.end(),
                          [to](const Edge &e) { return e.to == to; });
  if (it == out.end())
    throw Error(ErrorCode::NotFound, "no edge " + name(from) + " -> " +
                                         std::to_string(to.value));
  Edge e = std::move(*it);
  out.erase(it);
  erase_one(mut().in[to.value], from);
  --edge_count_;
  return e;
}

void ColoredDirectedGraph::remove_node(NodeId node) {
  require(node);
  if (is_protected(node))
    throw Error(ErrorCode::InvalidGraph,
                "entry/exit node '" + name(node) + "' cannot be removed");
  // Back to front: removal swaps the last entry into the freed slot. A
  // self-loop, if any, goes with the out-edges below.
  for (std::size_t i = mut().in[node.value].size(); i-- > 0;)
    if (NodeId p = mut().in[node.value][i]; p != node)
      remove_edge(p, node);
  edge_count_ -= mut().out[node.value].size();
  for (const Edge &e : mut().out[node.value])
    erase_one(mut().in[e.to.value], node);
  mut().out[node.value].release();
  mut().in[node.value].release();
  mut().nodes[node.value].alive = false;
  mut().nodes[node.value].colored = false;
  --alive_count_;
}

void ColoredDirectedGraph::revive_node(NodeId node, NodeKind kind) {
  if (node.value >= mut().nodes.size())
    throw Error(ErrorCode::NotFound,
                "unknown node id " + std::to_string(node.value));
  if (mut().nodes[node.value].alive)
    return;
  if (kind == NodeKind::Entry || kind == NodeKind::Exit)
    throw Error(ErrorCode::InvalidGraph, "cannot revive a terminal node");
  mut().nodes[node.value].alive = true;
  mut().nodes[node.value].kind = kind;
  ++alive_count_;
}

void ColoredDirectedGraph::set_colored(NodeId node, bool colored) {
  require(node);
  if (colored && is_protected(node))
    throw Error(ErrorCode::InvalidGraph,
                "entry/exit node '" + name(node) + "' cannot be colored");
  mut().nodes[node.value].colored = colored;
}

void ColoredDirectedGraph::set_kind(NodeId node, NodeKind kind) {
  require(node);
  if (is_protected(node) || kind == NodeKind::Entry || kind == NodeKind::Exit)
    throw Error(ErrorCode::InvalidGraph, "terminal kinds are fixed");
  mut().nodes[node.value].kind = kind;
}

std::vector<NodeId> ColoredDirectedGraph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(alive_count_);
  for (std::uint32_t i = 0; i < st().nodes.size(); ++i)
    if (st().nodes[i].alive)
      out.push_back(NodeId{i});
  return out;
}

std::vector<Edge> ColoredDirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::uint32_t i = 0; i < st().nodes.size(); ++i) {
    if (!st().nodes[i].alive)
      continue;
    auto first = out.size();
    out.insert(out.end(), st().out[i].begin(), st().out[i].end());
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
              [](const Edge &a, const Edge &b) { return a.to < b.to; });
  }
  return out;
}

const std::string &ColoredDirectedGraph::name(NodeId node) const {
  if (node.value >= st().nodes.size())
    throw Error(ErrorCode::NotFound,
                "unknown node id " + std::to_string(node.value));
  return (*names_)[node.value];
}

NodeKind ColoredDirectedGraph::kind(NodeId node) const {
  if (node.value >= st().nodes.size())
    throw Error(ErrorCode::NotFound,
                "unknown node id " + std::to_string(node.value));
  return st().nodes[node.value].kind;
}

bool ColoredDirectedGraph::is_colored(NodeId node) const {
  return contains(node) && st().nodes[node.value].colored;
}

bool ColoredDirectedGraph::is_protected(NodeId node) const {
  return node == entry_ || node == exit_;
}

std::vector<NodeId> ColoredDirectedGraph::colored() const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < st().nodes.size(); ++i)
    if (st().nodes[i].alive && st().nodes[i].colored)
      out.push_back(NodeId{i});
  return out;
}

NodeId ColoredDirectedGraph::entry() const {
  if (!entry_)
    throw Error(ErrorCode::InvalidGraph, "graph has no entry node");
  return *entry_;
}

NodeId ColoredDirectedGraph::exit() const {
  if (!exit_)
    throw Error(ErrorCode::InvalidGraph, "graph has no exit node");
  return *exit_;
}

std::span<const Edge> ColoredDirectedGraph::out_edges(NodeId node) const {
  require(node);
  return st().out[node.value];
}

std::size_t ColoredDirectedGraph::out_degree(NodeId node) const {
  require(node);
  return st().out[node.value].size();
}

std::size_t ColoredDirectedGraph::in_degree(NodeId node) const {
  return predecessors(node).size();
}

std::span<const NodeId>
ColoredDirectedGraph::predecessor_list(NodeId node) const {
  require(node);
  return st().in[node.value];
}

std::vector<NodeId> ColoredDirectedGraph::predecessors(NodeId node) const {
  require(node);
  std::vector<NodeId> out;
  out.reserve(st().in[node.value].size());
  out.assign(st().in[node.value].begin(), st().in[node.value].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<NodeId> ColoredDirectedGraph::find(std::string_view name) const {
  for (std::uint32_t i = 0; i < st().nodes.size(); ++i)
    if (st().nodes[i].alive && (*names_)[i] == name)
      return NodeId{i};
  return std::nullopt;
}

NodeId ColoredDirectedGraph::at(std::string_view name) const {
  if (auto id = find(name))
    return *id;
  throw Error(ErrorCode::NotFound, "no node named '" + std::string(name) + "'");
}

void ColoredDirectedGraph::validate() const {
  if (!entry_ || !contains(*entry_))
    throw Error(ErrorCode::InvalidGraph, "graph has no entry node");
  if (!exit_ || !contains(*exit_))
    throw Error(ErrorCode::InvalidGraph, "graph has no exit node");
  if (!st().in[entry_->value].empty())
    throw Error(ErrorCode::InvalidGraph, "entry node has incoming edges");
  if (!st().out[exit_->value].empty())
    throw Error(ErrorCode::InvalidGraph, "exit node has outgoing edges");
  if (st().nodes[entry_->value].colored || st().nodes[exit_->value].colored)
    throw Error(ErrorCode::InvalidGraph, "entry/exit nodes cannot be colored");

  std::vector<char> forward(st().nodes.size(), 0), backward(st().nodes.size(), 0);
  std::vector<NodeId> stack{*entry_};
  forward[entry_->value] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (const auto &e : st().out[u.value])
      if (!forward[e.to.value]) {
        forward[e.to.value] = 1;
        stack.push_back(e.to);
      }
  }
  stack.push_back(*exit_);
  backward[exit_->value] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId p : st().in[u.value])
      if (!backward[p.value]) {
        backward[p.value] = 1;
        stack.push_back(p);
      }
  }
  for (std::uint32_t i = 0; i < st().nodes.size(); ++i) {
    if (!st().nodes[i].alive)
      continue;
    NodeId n{i};
    if (!forward[n.value])
      throw Error(ErrorCode::InvalidGraph,
                  "node '" + name(n) + "' is unreachable from the entry");
    if (!backward[n.value])
      throw Error(ErrorCode::InvalidGraph,
                  "node '" + name(n) + "' cannot reach the exit");
  }
}

bool operator==(const ColoredDirectedGraph &a, const ColoredDirectedGraph &b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count())
    return false;
  auto an = a.nodes(), bn = b.nodes();
  if (an != bn)
    return false;
  for (NodeId n : an)
    if (a.name(n) != b.name(n) || a.kind(n) != b.kind(n) ||
        a.is_colored(n) != b.is_colored(n))
      return false;
  auto ae = a.edges(), be = b.edges();
  for (std::size_t i = 0; i < ae.size(); ++i)
    if (ae[i].from != be[i].from || ae[i].to != be[i].to ||
        ae[i].label != be[i].label)
      return false;
  return true;
}

std::vector<NodeId> successors_of_node(const ColoredDirectedGraph &g,
                                       NodeId u) {
  std::vector<NodeId> out;
  for (const auto &e : g.out_edges(u))
    if (e.to != u)
      out.push_back(e.to);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<char> membership(const ColoredDirectedGraph &g,
                             const Subgraph &s) {
  if (s.members.empty())
    throw Error(ErrorCode::InvalidGraph, "subgraph must be non-empty");
  std::vector<char> in(g.id_bound(), 0);
  for (NodeId m : s.members) {
    if (!g.contains(m))
      throw Error(ErrorCode::NotFound,
                  "subgraph member " + std::to_string(m.value) +
                      " is not in the graph");
    in[m.value] = 1;
  }
  return in;
}

} // namespace

std::vector<NodeId> successors_of_subgraph(const ColoredDirectedGraph &g,
                                           const Subgraph &s) {
  auto in = membership(g, s);
  std::vector<NodeId> out;
  for (NodeId u : s.members)
    for (const auto &e : g.out_edges(u))
      if (!in[e.to.value])
        out.push_back(e.to);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> boundary(const ColoredDirectedGraph &g, const Subgraph &s) {
  auto in = membership(g, s);
  std::vector<NodeId> out;
  for (NodeId u : s.members)
    for (const auto &e : g.out_edges(u))
      if (!in[e.to.value]) {
        out.push_back(u);
        break;
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace efg
