#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/partition.hpp"
#include "shiftcd/similarity.hpp"

namespace shiftcd {

class ShiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShiftState {
  /// next_medoid[i]: the node i shifts to; centers map to themselves.
  std::vector<NodeId> next_medoid;
  /// Passes of the medoid loop until the medoid set stopped changing.
  std::size_t iteration_count = 0;
  /// Sorted ids of the fixed points of next_medoid.
  std::vector<NodeId> centers;
  /// Candidate evaluations performed by the medoid loop, summed over passes.
  std::size_t candidate_evaluations = 0;
};

struct ShiftResult {
  ShiftState state;
  Partition partition;
};

namespace detail {

// Follows next_medoid chains to their roots. A chain longer than the node
// count means the mapping has a cycle, which the shift rules exclude.
inline Partition assign_labels(const std::vector<NodeId>& next) {
  const std::size_t n = next.size();
  std::vector<NodeId> root(n);
  for (NodeId i = 0; i < n; ++i) {
    NodeId m = i;
    NodeId k = next[m];
    std::size_t steps = 0;
    while (m != k) {
      if (++steps > n) throw ShiftError("shift chain from node " + std::to_string(i) + " does not terminate");
      m = k;
      k = next[m];
    }
    root[i] = m;
  }
  return Partition::from_labels(root);
}

}  // namespace detail

/**
 * Revised Medoid-Shift over a KNN table.
 *
 * Every node starts as a medoid. In each pass, every current medoid i moves to
 * the member of {i} ∪ NN(i) with the largest Similarity Sum; ties go to the
 * smallest id, i itself included. The targets form the next medoid set. The
 * loop stops once every medoid maps to itself, which under this tie rule is
 * the same as the medoid set repeating. Chains are then followed to their
 * roots and each root defines a community.
 *
 * (DL, -id) strictly increases along every non-trivial shift, so the mapping
 * is acyclic and the loop finishes in at most node_count passes.
 */
inline ShiftResult rms_cluster(const KnnTable& knn) {
  const std::size_t n = knn.node_count();
  if (knn.dl.size() != n) throw std::invalid_argument("rms_cluster: malformed KNN table");

  ShiftResult out;
  auto& st = out.state;
  st.next_medoid.resize(n);
  for (NodeId i = 0; i < n; ++i) st.next_medoid[i] = i;

  auto better = [&](NodeId a, NodeId b) {  // a preferred over b
    return knn.dl[a] != knn.dl[b] ? knn.dl[a] > knn.dl[b] : a < b;
  };

  std::vector<NodeId> active(n);
  for (NodeId i = 0; i < n; ++i) active[i] = i;
  std::vector<char> in_next(n, 0);
  std::vector<NodeId> next_active;
  const std::size_t cap = n + 1;

  while (true) {
    if (++st.iteration_count > cap) throw ShiftError("rms_cluster exceeded its iteration cap");
    bool stable = true;
    next_active.clear();
    for (NodeId i : active) {
      NodeId best = i;
      ++st.candidate_evaluations;
      for (NodeId p : knn.nn[i]) {
        ++st.candidate_evaluations;
        if (better(p, best)) best = p;
      }
      st.next_medoid[i] = best;
      if (best != i) stable = false;
      if (!in_next[best]) {
        in_next[best] = 1;
        next_active.push_back(best);
      }
    }
    for (NodeId m : next_active) in_next[m] = 0;
    if (stable) break;
    std::sort(next_active.begin(), next_active.end());
    active.swap(next_active);
  }

  st.centers = active;
  std::sort(st.centers.begin(), st.centers.end());
  out.partition = detail::assign_labels(st.next_medoid);
  return out;
}

inline ShiftResult rms_cluster(const SimilarityMatrix& sim, const KnnTable& knn) {
  if (sim.node_count() != knn.node_count())
    throw std::invalid_argument("rms_cluster: KNN table was not built from this similarity matrix");
  return rms_cluster(knn);
}

/// Similarity, KNN and medoid clustering in one call.
inline ShiftResult rms(const Graph& g, std::size_t k, SimilarityMode mode) {
  auto sim = build_similarity(g, mode);
  return rms_cluster(sim, build_knn(sim, k));
}

/// Dense symmetric distance matrix with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  /// Takes a row-major n*n buffer and validates it.
  DistanceMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n) throw std::invalid_argument("distance matrix buffer has the wrong size");
    validate();
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0.0)
        throw std::invalid_argument("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
      for (std::size_t j = 0; j < n_; ++j) {
        const double d = (*this)(i, j);
        if (!(d >= 0.0) || !std::isfinite(d))
          throw std::invalid_argument("distance matrix has a negative or non-finite entry at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        if (d != (*this)(j, i))
          throw std::invalid_argument("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// The kernel used for the Medoid-Shift baseline: exp(-d / 2).
struct GaussianKernel {
  double operator()(double d) const { return std::exp(-d / 2.0); }
};

/**
 * One Medoid-Shift step for every point:
 *   next(i) = argmin_j  sum_k D(j,k) * phi(D(i,k)),  ties to the smallest j.
 */
template <class Kernel>
std::vector<NodeId> medoid_shift_targets(const DistanceMatrix& d, Kernel&& phi) {
  const std::size_t n = d.size();
  std::vector<double> weights(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) weights[i * n + k] = phi(d(i, k));

  std::vector<NodeId> next(n);
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(score.begin(), score.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = weights[i * n + k];
      for (std::size_t j = 0; j < n; ++j) score[j] += d(j, k) * w;
    }
    next[i] = static_cast<NodeId>(std::min_element(score.begin(), score.end()) - score.begin());
  }
  return next;
}

/**
 * Medoid-Shift clustering. The shift mapping is followed to its fixed points.
 * Nothing prevents the mapping of an arbitrary distance matrix from cycling;
 * a cycle is rooted at its smallest id.
 */
template <class Kernel = GaussianKernel>
Partition medoid_shift(const DistanceMatrix& d, Kernel&& phi = {}) {
  d.validate();
  auto next = medoid_shift_targets(d, std::forward<Kernel>(phi));
  const std::size_t n = next.size();
  // Break cycles: walk each unvisited chain, and when it closes on itself
  // make the smallest id on the loop a fixed point.
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on current walk, 2 done
  for (NodeId s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<NodeId> walk;
    NodeId v = s;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = next[v];
    }
    if (state[v] == 1 && next[v] != v) {
      auto start = std::find(walk.begin(), walk.end(), v);
      NodeId smallest = *std::min_element(start, walk.end());
      next[smallest] = smallest;
    }
    for (NodeId w : walk) state[w] = 2;
  }
  return detail::assign_labels(next);
}

/**
 * All-pairs shortest-path distances with edge length 1/w. Pairs in different
 * components get 2x the largest finite distance (1 if there is none).
 */
inline DistanceMatrix graph_to_distance(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix d(n);
  std::vector<double> dist(n);
  double max_finite = 0.0;
  using Item = std::pair<double, NodeId>;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (const auto& nb : g.neighbors(u)) {
        const double alt = du + 1.0 / nb.weight;
        if (alt < dist[nb.id]) {
          dist[nb.id] = alt;
          pq.push({alt, nb.id});
        }
      }
    }
    for (NodeId t = 0; t < n; ++t) {
      d.at(s, t) = dist[t];
      if (dist[t] != inf) max_finite = std::max(max_finite, dist[t]);
    }
  }
  const double sentinel = max_finite > 0.0 ? 2.0 * max_finite : 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) == inf) d.at(i, j) = sentinel;
    }
  // Dijkstra from either end can differ in the last bit; keep the smaller.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::min(d(i, j), d(j, i));
      d.at(i, j) = v;
      d.at(j, i) = v;
    }
  return d;
}

}  // namespace shiftcd
