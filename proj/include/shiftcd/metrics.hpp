#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/partition.hpp"

namespace shiftcd {

struct MetricValue {
  std::string name;  // "modularity" or "nmi"
  double value = 0.0;
  std::size_t communities = 0;
  std::size_t nodes = 0;
};

/**
 * Weighted Newman-Girvan modularity.
 *
 *   Q = sum_c [ w_c / m  -  resolution * (d_c / 2m)^2 ]
 *
 * w_c is the intra-community weight (each edge once), d_c the summed degree of
 * the community and 2m the graph's total_weight. A graph without edges has
 * Q = 0 by convention.
 */
inline double modularity(const Graph& g, const Partition& p, double resolution = 1.0) {
  if (p.size() != g.node_count())
    throw std::invalid_argument("partition covers " + std::to_string(p.size()) + " nodes, graph has " +
                                std::to_string(g.node_count()));
  const double two_m = g.total_weight();
  if (two_m <= 0.0) return 0.0;

  std::vector<double> internal(p.community_count(), 0.0);
  std::vector<double> volume(p.community_count(), 0.0);
  for (NodeId i = 0; i < g.node_count(); ++i) volume[p[i]] += g.degree(i);
  g.for_each_edge([&](NodeId i, NodeId j, double w) {
    if (p[i] == p[j]) internal[p[i]] += w;
  });

  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double frac = volume[c] / two_m;
    q += 2.0 * internal[c] / two_m - resolution * frac * frac;
  }
  return q;
}

namespace detail {

inline double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0) h -= (c / n) * std::log(c / n);
  return h;
}

}  // namespace detail

/**
 * Normalized mutual information, 2 I(A;B) / (H(A) + H(B)), natural log.
 * Both partitions trivial (zero entropy) gives 1; exactly one trivial gives 0.
 */
inline double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("nmi: partitions have " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()) + " nodes");
  const std::size_t n_nodes = a.size();
  // Labels are canonical, so equal partitions group identically: I = H exactly.
  if (a == b) return 1.0;
  const double n = static_cast<double>(n_nodes);

  std::vector<double> ca(a.community_count(), 0.0), cb(b.community_count(), 0.0);
  std::map<std::pair<Label, Label>, double> joint;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    joint[{a[i], b[i]}] += 1;
  }
  const double ha = detail::entropy(ca, n);
  const double hb = detail::entropy(cb, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;

  // Summing the sorted terms makes nmi(a, b) == nmi(b, a) bit for bit.
  std::vector<double> terms;
  terms.reserve(joint.size());
  for (const auto& [key, nij] : joint)
    terms.push_back((nij / n) * std::log(nij * n / (ca[key.first] * cb[key.second])));
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;
  double v = 2.0 * mi / (ha + hb);
  // Rounding can push identical partitions a hair past 1 or independent ones below 0.
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

inline constexpr std::size_t kBruteForceMaxNodes = 10;

/**
 * Exhaustive modularity maximization over all set partitions (restricted
 * growth strings). Returns the first maximizer in enumeration order.
 */
inline std::pair<Partition, double> brute_force_best_modularity(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kBruteForceMaxNodes)
    throw std::invalid_argument("brute_force_best_modularity supports at most " +
                                std::to_string(kBruteForceMaxNodes) + " nodes, got " + std::to_string(n));
  if (n == 0) return {Partition{}, 0.0};

  std::vector<std::size_t> rgs(n, 0), max_prefix(n, 0);
  Partition best = Partition::all_in_one(n);
  double best_q = modularity(g, best);
  while (true) {
    // Advance to the next restricted growth string.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] == max_prefix[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    max_prefix[i] = std::max(max_prefix[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      max_prefix[j] = max_prefix[j - 1];
    }
    auto p = Partition::from_labels(rgs);
    double q = modularity(g, p);
    if (q > best_q) {
      best_q = q;
      best = std::move(p);
    }
  }
  return {best, best_q};
}

}  // namespace shiftcd
