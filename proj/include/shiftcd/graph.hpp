#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace shiftcd {

using NodeId = std::uint32_t;

/// Thrown when graph input violates the construction contract.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Neighbor {
  NodeId id;
  double weight;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// One raw edge as it appears in an input file, before id assignment.
struct EdgeRecord {
  std::string source;
  std::string target;
  double weight = 1.0;
};

/**
 * Undirected weighted simple graph over dense ids 0..n-1.
 *
 * Adjacency rows are sorted by neighbor id, symmetric, free of self-loops and
 * carry strictly positive weights. Instances are immutable once built; use
 * GraphBuilder or build_graph() to create one.
 */
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  /// 2m: every undirected edge contributes its weight twice.
  double total_weight() const noexcept { return total_weight_; }

  const std::vector<std::string>& node_names() const noexcept { return names_; }
  const std::string& name(NodeId i) const { return names_.at(check(i)); }

  std::span<const Neighbor> neighbors(NodeId i) const { return adjacency_[check(i)]; }

  double degree(NodeId i) const { return degrees_[check(i)]; }

  /// Weight of edge (i, j), or 0 when absent.
  double weight(NodeId i, NodeId j) const {
    const auto& row = adjacency_[check(i)];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Neighbor& n, NodeId id) { return n.id < id; });
    return (it != row.end() && it->id == j) ? it->weight : 0.0;
  }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Every undirected edge once, as (i, j, w) with i < j, in row order.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (NodeId i = 0; i < node_count(); ++i)
      for (const auto& nb : adjacency_[i])
        if (i < nb.id) fn(i, nb.id, nb.weight);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.names_ == b.names_ && a.adjacency_ == b.adjacency_;
  }

 private:
  friend class GraphBuilder;

  std::size_t check(NodeId i) const {
    if (i >= names_.size())
      throw std::out_of_range("node id " + std::to_string(i) + " out of range (node_count " +
                              std::to_string(names_.size()) + ")");
    return i;
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
  std::size_t edge_count_ = 0;
};

/**
 * Accumulates nodes and edge records, then produces a Graph.
 *
 * Ids follow first appearance. Parallel edges (and, for directed input, the
 * two orientations of a pair) are merged by summing their weights; the
 * contributions are summed in sorted order so the result does not depend on
 * record order. Self-loops are dropped.
 */
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed_input = false) : directed_(directed_input) {}

  NodeId add_node(std::string_view name) {
    validate_name(name, "node '" + std::string(name) + "'");
    auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<NodeId>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  void add_edge(const EdgeRecord& record) {
    const auto where = describe(record);
    validate_name(record.source, where);
    validate_name(record.target, where);
    if (!(record.weight > 0.0) || !std::isfinite(record.weight))
      throw GraphError("non-positive or non-finite weight in " + where);
    ++record_count_;
    NodeId s = add_node(record.source);
    NodeId t = add_node(record.target);
    if (s == t) return;
    // Both input modes fold onto the undirected pair; directed_ only documents intent.
    pending_.push_back({std::min(s, t), std::max(s, t), record.weight});
  }

  bool directed_input() const noexcept { return directed_; }
  std::size_t record_count() const noexcept { return record_count_; }

  Graph build() const {
    Graph g;
    g.names_ = names_;
    g.index_ = index_;
    const std::size_t n = names_.size();

    auto edges = pending_;
    std::sort(edges.begin(), edges.end(), [](const Pending& a, const Pending& b) {
      return std::tie(a.lo, a.hi, a.w) < std::tie(b.lo, b.hi, b.w);
    });

    g.adjacency_.assign(n, {});
    for (std::size_t i = 0; i < edges.size();) {
      std::size_t j = i;
      double w = 0.0;
      for (; j < edges.size() && edges[j].lo == edges[i].lo && edges[j].hi == edges[i].hi; ++j)
        w += edges[j].w;
      g.adjacency_[edges[i].lo].push_back({edges[i].hi, w});
      g.adjacency_[edges[i].hi].push_back({edges[i].lo, w});
      ++g.edge_count_;
      i = j;
    }

    // Degrees and 2m are summed in ascending value order, so they do not
    // depend on how ids were assigned.
    auto sorted_sum = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      double s = 0.0;
      for (double x : v) s += x;
      return s;
    };
    g.degrees_.assign(n, 0.0);
    std::vector<double> ws;
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = g.adjacency_[i];
      std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
      ws.clear();
      for (const auto& nb : row) ws.push_back(nb.weight);
      g.degrees_[i] = sorted_sum(ws);
    }
    g.total_weight_ = sorted_sum(g.degrees_);
    return g;
  }

 private:
  struct Pending {
    NodeId lo, hi;
    double w;
  };

  static std::string describe(const EdgeRecord& r) {
    return "edge (" + r.source + " -> " + r.target + ")";
  }

  static void validate_name(std::string_view name, const std::string& where) {
    if (name.empty()) throw GraphError("empty node id in " + where);
    for (char c : name)
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
        throw GraphError("malformed node id (contains whitespace) in " + where);
  }

  bool directed_;
  std::size_t record_count_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Pending> pending_;
};

/// Builds the undirected simple graph described by `records`.
inline Graph build_graph(std::span<const EdgeRecord> records, bool directed_input) {
  if (records.empty()) throw GraphError("cannot build a graph from an empty record set");
  GraphBuilder builder(directed_input);
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      builder.add_edge(records[i]);
    } catch (const GraphError& e) {
      throw GraphError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return builder.build();
}

/// Copy of `g` extended with isolated nodes for every name it does not know yet.
inline Graph with_isolated_nodes(const Graph& g, std::span<const std::string> names) {
  GraphBuilder builder;
  for (const auto& n : g.node_names()) builder.add_node(n);
  g.for_each_edge([&](NodeId i, NodeId j, double w) {
    builder.add_edge({g.node_names()[i], g.node_names()[j], w});
  });
  for (const auto& n : names) builder.add_node(n);
  return builder.build();
}

}  // namespace shiftcd
