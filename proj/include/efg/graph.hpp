#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efg/error.hpp"
#include "efg/chunked_vector.hpp"
#include "efg/small_vector.hpp"

namespace efg {

// Identifies a node within one family of graphs (a graph and everything
// derived from it by reduction).  A surviving node keeps its id.
struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

enum class NodeKind : std::uint8_t {
  Entry,
  Exit,
  Event,
  Branch,
  Plain,
  ContractedScc,
};

std::string_view to_string(NodeKind kind);

// Branch labels are free-form ("T"/"F" by convention).  When two different
// labels end up on one edge the result is kMergedLabel.
//
// An optional string, interned: copies and comparisons are pointer-sized.
// Interned strings live for the whole process.
class Label {
public:
  Label() = default;
  Label(std::nullopt_t) {}
  Label(std::string_view text);
  Label(const std::string &text) : Label(std::string_view(text)) {}
  Label(const char *text) : Label(std::string_view(text)) {}
  Label(const std::optional<std::string> &text) {
    if (text)
      *this = Label(std::string_view(*text));
  }

  bool has_value() const { return text_ != nullptr; }
  explicit operator bool() const { return has_value(); }
  const std::string &operator*() const { return *text_; }
  const std::string *operator->() const { return text_; }
  const std::string &value() const;
  void reset() { text_ = nullptr; }

  friend bool operator==(const Label &a, const Label &b) {
    return a.text_ == b.text_;
  }
  friend bool operator==(const Label &a, std::nullopt_t) {
    return !a.has_value();
  }

private:
  const std::string *text_ = nullptr;
};

inline constexpr std::string_view kMergedLabel = "merged";

Label merge_labels(const Label &a, const Label &b);

// Provenance of an edge: a concrete (from, to) connection in the graph the
// reduction started from, plus the branch label it was taken under.  Original
// edges carry exactly one anchor equal to the edge itself.
struct Anchor {
  NodeId from;
  NodeId to;
  Label label;

  friend bool operator==(const Anchor &, const Anchor &) = default;
};

// Contiguous anchor storage with room for one anchor inline, which is all
// most edges ever hold.
class AnchorList {
public:
  AnchorList() = default;
  AnchorList(std::span<const Anchor> anchors) {
    append(anchors.data(), anchors.data() + anchors.size());
  }
  AnchorList(const AnchorList &other) {
    if (other.capacity_ == 1) {
      inline_ = other.inline_;
      size_ = other.size_;
    } else {
      append(other.begin(), other.end());
    }
  }
  AnchorList(AnchorList &&other) noexcept { steal(other); }
  AnchorList &operator=(const AnchorList &other) {
    if (this != &other) {
      size_ = 0;
      append(other.begin(), other.end());
    }
    return *this;
  }
  AnchorList &operator=(AnchorList &&other) noexcept {
    if (this != &other) {
      release();
      steal(other);
    }
    return *this;
  }
  ~AnchorList() { release(); }

  Anchor *data() { return capacity_ > 1 ? heap_ : &inline_; }
  const Anchor *data() const { return capacity_ > 1 ? heap_ : &inline_; }
  Anchor *begin() { return data(); }
  Anchor *end() { return data() + size_; }
  const Anchor *begin() const { return data(); }
  const Anchor *end() const { return data() + size_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Anchor &operator[](std::size_t i) { return data()[i]; }
  const Anchor &operator[](std::size_t i) const { return data()[i]; }
  const Anchor &front() const { return data()[0]; }

  void reserve(std::size_t n) {
    if (n > capacity_)
      grow(n);
  }
  void push_back(const Anchor &a) {
    if (size_ == capacity_)
      reserve(2 * capacity_);
    data()[size_++] = a;
  }
  void append(const Anchor *first, const Anchor *last) {
    reserve(size_ + static_cast<std::size_t>(last - first));
    for (; first != last; ++first)
      data()[size_++] = *first;
  }
  // Keeps the first n anchors.
  void truncate(std::size_t n) { size_ = std::min<std::size_t>(n, size_); }

  friend bool operator==(const AnchorList &a, const AnchorList &b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

private:
  void grow(std::size_t n);
  void release() {
    if (capacity_ > 1)
      delete[] heap_;
    capacity_ = 1;
    size_ = 0;
  }
  void steal(AnchorList &other) {
    size_ = other.size_;
    capacity_ = other.capacity_;
    if (capacity_ > 1)
      heap_ = other.heap_;
    else
      inline_ = other.inline_;
    other.capacity_ = 1;
    other.size_ = 0;
  }

  std::uint32_t size_ = 0;
  std::uint32_t capacity_ = 1;
  union {
    Anchor inline_{};
    Anchor *heap_;
  };
};

struct Edge {
  NodeId from;
  NodeId to;
  Label label;
  AnchorList anchors; // sorted by (from, to), unique

  // Anchor targets / sources, deduplicated and sorted.
  std::vector<NodeId> anchor_targets() const;
  std::vector<NodeId> anchor_sources() const;
};

// The working graph G = (V, E, C, entry, exit).  Simple directed graph with
// self-loops permitted; every edge is keyed by its (from, to) pair.
//
// Node storage is a table indexed by NodeId.  Removing a node marks its slot
// dead, so ids stay valid across every graph derived from the same table.
class ColoredDirectedGraph {
public:
  ColoredDirectedGraph() = default;

  // -- construction and mutation --------------------------------------------

  // Entry and Exit kinds may each be added once.
  NodeId add_node(std::string name, NodeKind kind);

  // Inserts (from, to) or merges into the existing edge: labels merge and the
  // anchor sets are united.  With no anchors given the edge anchors itself.
  // Returns true when a new edge was created.
  bool add_edge(NodeId from, NodeId to, Label label = std::nullopt);
  bool add_edge(NodeId from, NodeId to, Label label,
                std::span<const Anchor> anchors);
  bool add_edge(NodeId from, NodeId to, Label label, AnchorList &&anchors);

  void remove_edge(NodeId from, NodeId to);
  // Removes the edge and hands it back.
  Edge take_edge(NodeId from, NodeId to);
  // Drops the node and every incident edge.  Entry/exit cannot be removed.
  void remove_node(NodeId node);
  // Brings a dead slot back (used when contracted components expand).
  void revive_node(NodeId node, NodeKind kind);

  void set_colored(NodeId node, bool colored);
  void set_kind(NodeId node, NodeKind kind);

  // -- queries --------------------------------------------------------------

  bool contains(NodeId node) const {
    const auto &nodes = st().nodes;
    return node.value < nodes.size() && nodes[node.value].alive;
  }
  // One past the largest id ever allocated in this table.
  std::size_t id_bound() const { return st().nodes.size(); }
  std::size_t node_count() const { return alive_count_; }
  std::size_t edge_count() const { return edge_count_; }

  // Alive nodes in id order.
  std::vector<NodeId> nodes() const;
  // All edges ordered by (from, to).
  std::vector<Edge> edges() const;

  const std::string &name(NodeId node) const;
  NodeKind kind(NodeId node) const;
  bool is_colored(NodeId node) const;
  bool is_protected(NodeId node) const;
  std::vector<NodeId> colored() const;

  bool has_entry() const { return entry_.has_value(); }
  bool has_exit() const { return exit_.has_value(); }
  NodeId entry() const;
  NodeId exit() const;

  // Out-edges in insertion order.
  std::span<const Edge> out_edges(NodeId node) const;
  const Edge *find_edge(NodeId from, NodeId to) const;
  bool has_self_loop(NodeId node) const {
    return find_edge(node, node) != nullptr;
  }
  std::size_t out_degree(NodeId node) const;
  std::size_t in_degree(NodeId node) const;
  // Every p with an edge (p, node), including node itself for a self-loop.
  std::vector<NodeId> predecessors(NodeId node) const;
  // The same set, unordered and without a copy.
  std::span<const NodeId> predecessor_list(NodeId node) const;

  // First alive node carrying this name.
  std::optional<NodeId> find(std::string_view name) const;
  // Like find() but throws NotFound.
  NodeId at(std::string_view name) const;

  // Throws InvalidGraph naming the first violated structural invariant:
  // entry/exit present, entry in-degree 0, exit out-degree 0, entry/exit not
  // colored, every node on some entry-to-exit walk.
  void validate() const;

  // Structural equality: same alive ids with the same names, kinds and
  // colors, and the same (from, to, label) edges.  Anchors are provenance and
  // do not take part.
  friend bool operator==(const ColoredDirectedGraph &a,
                         const ColoredDirectedGraph &b);

private:
  struct NodeRecord {
    NodeKind kind = NodeKind::Plain;
    bool colored = false;
    bool alive = true;
  };

  void require(NodeId node) const {
    if (!contains(node))
      unknown_node(node);
  }
  [[noreturn]] static void unknown_node(NodeId node);
  Edge *find_edge_mut(NodeId from, NodeId to);

  struct Storage {
    std::vector<NodeRecord> nodes;
    ChunkedVector<SmallVector<Edge, 2>> out;
    // Exact predecessor lists, unordered.
    ChunkedVector<SmallVector<NodeId, 2>> in;
  };

  // Copies share storage until one of them changes; a moved-from graph has
  // none and reads as empty.
  const Storage &st() const { return store_ ? *store_ : kEmpty; }
  Storage &mut() {
    if (!store_)
      store_ = std::make_shared<Storage>();
    else if (store_.use_count() > 1)
      store_ = std::make_shared<Storage>(*store_);
    return *store_;
  }

  static inline const Storage kEmpty{};
  std::shared_ptr<Storage> store_;
  // Names never change once added, so copies share them until one of them
  // adds a node.
  std::shared_ptr<std::vector<std::string>> names_;
  std::size_t alive_count_ = 0;
  std::size_t edge_count_ = 0;
  std::optional<NodeId> entry_;
  std::optional<NodeId> exit_;
};

// A non-empty set of nodes of one graph.
struct Subgraph {
  std::vector<NodeId> members;
};

// suc(u): {v != u | (u, v) in E}.  Sorted.
std::vector<NodeId> successors_of_node(const ColoredDirectedGraph &g, NodeId u);
// suc(S): nodes outside S reached by an edge from a member.  Sorted.
std::vector<NodeId> successors_of_subgraph(const ColoredDirectedGraph &g,
                                           const Subgraph &s);
// Members u of S with suc(u) meeting suc(S).  Sorted.
std::vector<NodeId> boundary(const ColoredDirectedGraph &g, const Subgraph &s);

} // namespace efg

template <> struct std::hash<efg::NodeId> {
  std::size_t operator()(efg::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
