#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/partition.hpp"
#include "shiftcd/rng.hpp"

namespace shiftcd {

namespace detail {

// Weighted graph with explicit self-loop weight, as produced by aggregation.
struct LouvainLevel {
  std::vector<std::vector<Neighbor>> adj;  // no self entries
  std::vector<double> self;                // loop weight, counted once
  std::vector<double> degree;              // includes 2 * self
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }
};

inline LouvainLevel level_from_graph(const Graph& g) {
  LouvainLevel lv;
  const std::size_t n = g.node_count();
  lv.adj.resize(n);
  lv.self.assign(n, 0.0);
  lv.degree.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    lv.adj[i].assign(nb.begin(), nb.end());
    lv.degree[i] = g.degree(i);
  }
  lv.two_m = g.total_weight();
  return lv;
}

// Local moving phase. Returns true if any node changed community.
inline bool louvain_local_moves(const LouvainLevel& lv, std::vector<NodeId>& comm, double resolution,
                                std::mt19937_64& rng) {
  const std::size_t n = lv.size();
  std::vector<double> tot(n, 0.0);
  for (NodeId u = 0; u < n; ++u) tot[comm[u]] += lv.degree[u];

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> touched;
  bool any_move = false;
  constexpr std::size_t kMaxSweeps = 1000;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool moved = false;
    for (NodeId u : order) {
      const NodeId own = comm[u];
      const double ku = lv.degree[u];
      touched.clear();
      touched.push_back(own);
      seen[own] = 1;
      for (const auto& nb : lv.adj[u]) {
        const NodeId c = comm[nb.id];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += nb.weight;
      }
      tot[own] -= ku;
      auto gain = [&](NodeId c) { return link[c] - resolution * tot[c] * ku / lv.two_m; };
      NodeId best = own;
      double best_gain = gain(own);
      for (NodeId c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + 1e-12 * lv.two_m) {
          best_gain = gc;
          best = c;
        }
      }
      tot[best] += ku;
      comm[u] = best;
      if (best != own) moved = true;
      for (NodeId c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

inline LouvainLevel aggregate(const LouvainLevel& lv, const std::vector<NodeId>& comm, std::size_t communities) {
  LouvainLevel out;
  out.adj.resize(communities);
  out.self.assign(communities, 0.0);
  out.degree.assign(communities, 0.0);
  out.two_m = lv.two_m;
  std::vector<double> acc(communities, 0.0);
  std::vector<std::vector<NodeId>> members(communities);
  for (NodeId u = 0; u < lv.size(); ++u) members[comm[u]].push_back(u);

  for (NodeId c = 0; c < communities; ++c) {
    std::vector<NodeId> touched;
    for (NodeId u : members[c]) {
      out.self[c] += lv.self[u];
      out.degree[c] += lv.degree[u];
      for (const auto& nb : lv.adj[u]) {
        const NodeId d = comm[nb.id];
        if (d == c) {
          out.self[c] += 0.5 * nb.weight;  // seen from both endpoints
        } else {
          if (acc[d] == 0.0) touched.push_back(d);
          acc[d] += nb.weight;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (NodeId d : touched) {
      out.adj[c].push_back({d, acc[d]});
      acc[d] = 0.0;
    }
  }
  return out;
}

}  // namespace detail

/**
 * Louvain modularity maximization: local moves in seed-shuffled order, then
 * aggregation of communities into super-nodes, until a level makes no move.
 * `resolution` scales the null-model term.
 */
inline Partition louvain(const Graph& g, RngSeed seed, double resolution = 1.0) {
  if (g.node_count() == 0) throw std::invalid_argument("louvain: empty graph");
  if (!(resolution > 0.0)) throw std::invalid_argument("louvain: resolution must be positive");
  const std::size_t n = g.node_count();
  std::vector<NodeId> membership(n);
  std::iota(membership.begin(), membership.end(), NodeId{0});
  if (g.total_weight() <= 0.0) return Partition::from_labels(membership);

  std::mt19937_64 rng(seed);
  auto level = detail::level_from_graph(g);
  while (true) {
    std::vector<NodeId> comm(level.size());
    std::iota(comm.begin(), comm.end(), NodeId{0});
    if (!detail::louvain_local_moves(level, comm, resolution, rng)) break;

    // Renumber communities densely in order of first appearance.
    std::vector<NodeId> remap(level.size(), static_cast<NodeId>(-1));
    NodeId next = 0;
    for (auto& c : comm) {
      if (remap[c] == static_cast<NodeId>(-1)) remap[c] = next++;
      c = remap[c];
    }
    for (auto& m : membership) m = comm[m];
    if (next == level.size()) break;
    level = detail::aggregate(level, comm, next);
  }
  return Partition::from_labels(membership);
}

}  // namespace shiftcd
