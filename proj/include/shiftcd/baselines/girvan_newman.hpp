#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/metrics.hpp"
#include "shiftcd/partition.hpp"

namespace shiftcd {

using EdgeKey = std::pair<NodeId, NodeId>;  // (min endpoint, max endpoint)

struct DendrogramStep {
  EdgeKey removed;
  Partition partition;  // connected components after the removal
  double modularity;    // against the original graph
};

using Dendrogram = std::vector<DendrogramStep>;

struct GirvanNewmanResult {
  Dendrogram dendrogram;
  Partition partition;
  /// Index into dendrogram of the returned snapshot; empty if the graph had no edges.
  std::optional<std::size_t> selected;
};

namespace detail {

// Mutable edge set: adjacency rows hold (neighbor, edge index).
struct EdgeSet {
  std::vector<EdgeKey> keys;
  std::vector<double> length;
  std::vector<char> alive;
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj;

  EdgeSet(const Graph& g, bool use_weights) : adj(g.node_count()) {
    g.for_each_edge([&](NodeId i, NodeId j, double w) {
      const std::size_t e = keys.size();
      keys.push_back({i, j});
      length.push_back(use_weights ? 1.0 / w : 1.0);
      alive.push_back(1);
      adj[i].push_back({j, e});
      adj[j].push_back({i, e});
    });
  }
};

inline bool same_length(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Brandes accumulation over all sources; values count unordered pairs.
inline std::vector<double> betweenness(const EdgeSet& es) {
  const std::size_t n = es.adj.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> bc(es.keys.size(), 0.0);
  std::vector<double> dist(n), sigma(n), delta(n);
  std::vector<char> settled(n);
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> preds(n);
  std::vector<NodeId> order;
  using Item = std::pair<double, NodeId>;

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(settled.begin(), settled.end(), 0);
    for (auto& p : preds) p.clear();
    order.clear();

    dist[s] = 0.0;
    sigma[s] = 1.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (settled[u] || du > dist[u]) continue;
      settled[u] = 1;
      order.push_back(u);
      for (auto [v, e] : es.adj[u]) {
        if (!es.alive[e] || settled[v]) continue;
        const double alt = dist[u] + es.length[e];
        if (dist[v] != inf && same_length(alt, dist[v])) {
          sigma[v] += sigma[u];
          preds[v].push_back({u, e});
        } else if (alt < dist[v]) {
          dist[v] = alt;
          sigma[v] = sigma[u];
          preds[v].assign(1, {u, e});
          pq.push({alt, v});
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (auto [v, e] : preds[w]) {
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        bc[e] += c;
        delta[v] += c;
      }
    }
  }
  for (auto& b : bc) b *= 0.5;
  return bc;
}

inline Partition components(const EdgeSet& es) {
  const std::size_t n = es.adj.size();
  std::vector<NodeId> comp(n, static_cast<NodeId>(-1));
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != static_cast<NodeId>(-1)) continue;
    comp[s] = s;
    stack.assign(1, s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (auto [v, e] : es.adj[u])
        if (es.alive[e] && comp[v] == static_cast<NodeId>(-1)) {
          comp[v] = s;
          stack.push_back(v);
        }
    }
  }
  return Partition::from_labels(comp);
}

}  // namespace detail

/**
 * Shortest-path edge betweenness (Brandes). Paths are weighted with length
 * 1/w unless use_weights is false; each unordered node pair contributes one
 * unit, split evenly across its equal-length shortest paths.
 */
inline std::map<EdgeKey, double> edge_betweenness(const Graph& g, bool use_weights = true) {
  detail::EdgeSet es(g, use_weights);
  auto bc = detail::betweenness(es);
  std::map<EdgeKey, double> out;
  for (std::size_t e = 0; e < es.keys.size(); ++e) out.emplace(es.keys[e], bc[e]);
  return out;
}

/**
 * Girvan-Newman divisive clustering. Repeatedly removes the edge of highest
 * betweenness (recomputed after every removal; near-ties go to the
 * lexicographically smallest edge) and records the components. Returns the
 * snapshot of maximal modularity, or the first with at least `target`
 * communities when a target is given.
 */
inline GirvanNewmanResult girvan_newman(const Graph& g, std::optional<std::size_t> target = std::nullopt,
                                        bool use_weights = true) {
  if (g.node_count() == 0) throw std::invalid_argument("girvan_newman: empty graph");
  detail::EdgeSet es(g, use_weights);
  GirvanNewmanResult out;
  out.dendrogram.reserve(es.keys.size());

  for (std::size_t step = 0; step < es.keys.size(); ++step) {
    const auto bc = detail::betweenness(es);
    double top = -1.0;
    for (std::size_t e = 0; e < bc.size(); ++e)
      if (es.alive[e]) top = std::max(top, bc[e]);
    std::size_t pick = bc.size();
    for (std::size_t e = 0; e < bc.size(); ++e) {
      if (!es.alive[e] || bc[e] < top - 1e-9 * std::max(1.0, top)) continue;
      if (pick == bc.size() || es.keys[e] < es.keys[pick]) pick = e;
    }
    es.alive[pick] = 0;
    auto p = detail::components(es);
    const double q = modularity(g, p);
    out.dendrogram.push_back({es.keys[pick], std::move(p), q});
  }

  if (out.dendrogram.empty()) {
    out.partition = detail::components(es);
    return out;
  }
  std::size_t chosen = 0;
  if (target) {
    chosen = out.dendrogram.size() - 1;
    for (std::size_t i = 0; i < out.dendrogram.size(); ++i)
      if (out.dendrogram[i].partition.community_count() >= *target) {
        chosen = i;
        break;
      }
  } else {
    for (std::size_t i = 1; i < out.dendrogram.size(); ++i)
      if (out.dendrogram[i].modularity > out.dendrogram[chosen].modularity) chosen = i;
  }
  out.selected = chosen;
  out.partition = out.dendrogram[chosen].partition;
  return out;
}

}  // namespace shiftcd
