#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "shiftcd/graph.hpp"

namespace shiftcd {

enum class SimilarityMode {
  weighted_passthrough,  // SimM(i,j) = w(i,j)
  common_neighbor,       // SimM(i,j) = |N(i) ∩ N(j)|
};

inline std::string_view to_string(SimilarityMode m) {
  return m == SimilarityMode::weighted_passthrough ? "weighted" : "common-neighbor";
}

/**
 * Sparse symmetric node-pair similarity. Only adjacent pairs are ever
 * evaluated and only positive values are stored; rows are sorted by id.
 */
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(SimilarityMode mode, std::vector<std::vector<Neighbor>> rows)
      : mode_(mode), rows_(std::move(rows)) {}

  SimilarityMode mode() const noexcept { return mode_; }
  std::size_t node_count() const noexcept { return rows_.size(); }
  std::span<const Neighbor> row(NodeId i) const { return rows_.at(i); }

  double operator()(NodeId i, NodeId j) const {
    const auto& r = rows_.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Neighbor& n, NodeId id) { return n.id < id; });
    return (it != r.end() && it->id == j) ? it->weight : 0.0;
  }

  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
  SimilarityMode mode_ = SimilarityMode::weighted_passthrough;
  std::vector<std::vector<Neighbor>> rows_;
};

namespace detail {

// Size of the intersection of two id-sorted neighbor rows.
inline std::size_t sorted_intersection_size(std::span<const Neighbor> a, std::span<const Neighbor> b) {
  std::size_t count = 0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->id < ib->id) {
      ++ia;
    } else if (ib->id < ia->id) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace detail

inline SimilarityMatrix build_similarity(const Graph& g, SimilarityMode mode) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<Neighbor>> rows(n);
  if (mode == SimilarityMode::weighted_passthrough) {
    for (NodeId i = 0; i < n; ++i) {
      auto nb = g.neighbors(i);
      rows[i].assign(nb.begin(), nb.end());
    }
    return {mode, std::move(rows)};
  }

  // Each pair is evaluated once (i < j) and mirrored, so symmetry is exact.
  g.for_each_edge([&](NodeId i, NodeId j, double) {
    const auto common = detail::sorted_intersection_size(g.neighbors(i), g.neighbors(j));
    if (common == 0) return;
    rows[i].push_back({j, static_cast<double>(common)});
    rows[j].push_back({i, static_cast<double>(common)});
  });
  for (auto& r : rows)
    std::sort(r.begin(), r.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  return {mode, std::move(rows)};
}

/// K nearest neighbors and Similarity Sums.
struct KnnTable {
  std::size_t k = 0;
  /// nn[i]: up to k ids ordered by (similarity desc, id asc).
  std::vector<std::vector<NodeId>> nn;
  /// dl[i]: sum of SimM(i, p) over p in nn[i], accumulated in nn order.
  std::vector<double> dl;

  std::size_t node_count() const noexcept { return nn.size(); }
};

inline KnnTable build_knn(const SimilarityMatrix& sim, std::size_t k) {
  if (k == 0) throw std::invalid_argument("build_knn: k must be at least 1");
  KnnTable t;
  t.k = k;
  t.nn.resize(sim.node_count());
  t.dl.assign(sim.node_count(), 0.0);

  std::vector<Neighbor> scratch;
  for (NodeId i = 0; i < sim.node_count(); ++i) {
    auto row = sim.row(i);
    scratch.assign(row.begin(), row.end());
    const std::size_t take = std::min(k, scratch.size());
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take), scratch.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                        return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
                      });
    auto& out = t.nn[i];
    out.reserve(take);
    for (std::size_t r = 0; r < take; ++r) {
      out.push_back(scratch[r].id);
      t.dl[i] += scratch[r].weight;
    }
  }
  return t;
}

}  // namespace shiftcd
