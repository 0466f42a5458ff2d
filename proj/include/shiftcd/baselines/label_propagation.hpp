#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/partition.hpp"
#include "shiftcd/rng.hpp"

namespace shiftcd {

struct LabelPropagationResult {
  Partition partition;
  bool converged = false;
  std::size_t sweeps = 0;
};

namespace detail {

// Labels of maximal incident weight around u, ascending.
inline void maximal_labels(const Graph& g, NodeId u, const std::vector<NodeId>& label, std::vector<double>& acc,
                           std::vector<NodeId>& touched, std::vector<NodeId>& best) {
  touched.clear();
  best.clear();
  for (const auto& nb : g.neighbors(u)) {
    const NodeId l = label[nb.id];
    if (acc[l] == 0.0) touched.push_back(l);
    acc[l] += nb.weight;
  }
  double top = 0.0;
  for (NodeId l : touched) top = std::max(top, acc[l]);
  for (NodeId l : touched)
    if (acc[l] == top) best.push_back(l);
  for (NodeId l : touched) acc[l] = 0.0;
  std::sort(best.begin(), best.end());
}

}  // namespace detail

/**
 * Asynchronous label propagation. Every node starts with its own label; each
 * sweep visits nodes in a freshly shuffled order and a node adopts the label
 * carrying the most incident weight among its neighbors. A node whose label
 * is already maximal keeps it; otherwise ties are broken uniformly at random.
 * Converged when a full sweep changes nothing.
 */
inline LabelPropagationResult label_propagation(const Graph& g, RngSeed seed, std::size_t max_sweeps = 100) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("label_propagation: empty graph");
  if (max_sweeps == 0) throw std::invalid_argument("label_propagation: max_sweeps must be positive");

  std::mt19937_64 rng(seed);
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), NodeId{0});
  std::vector<NodeId> order(label);
  std::vector<double> acc(n, 0.0);
  std::vector<NodeId> touched, best;

  LabelPropagationResult out;
  while (out.sweeps < max_sweeps) {
    ++out.sweeps;
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (NodeId u : order) {
      detail::maximal_labels(g, u, label, acc, touched, best);
      if (best.empty() || std::binary_search(best.begin(), best.end(), label[u])) continue;
      std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
      label[u] = best[pick(rng)];
      changed = true;
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.partition = Partition::from_labels(label);
  return out;
}

/// True when every node's label carries maximal incident weight among its neighbors' labels.
inline bool is_label_propagation_stable(const Graph& g, const Partition& p) {
  std::vector<NodeId> label(p.labels().begin(), p.labels().end());
  std::vector<double> acc(std::max<std::size_t>(p.community_count(), 1), 0.0);
  std::vector<NodeId> touched, best;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    detail::maximal_labels(g, u, label, acc, touched, best);
    if (!best.empty() && !std::binary_search(best.begin(), best.end(), label[u])) return false;
  }
  return true;
}

}  // namespace shiftcd
