#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/partition.hpp"
#include "shiftcd/rng.hpp"

namespace shiftcd {

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
};

struct KMeansResult {
  std::vector<std::size_t> assignment;
  Eigen::MatrixXd centroids;  // k x dim
  double inertia = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double inertia_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, const std::vector<std::size_t>& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += (x.row(i) - c.row(static_cast<Eigen::Index>(a[i]))).squaredNorm();
  return s;
}

inline KMeansResult kmeans_once(const Eigen::MatrixXd& x, std::size_t k, std::size_t max_iter, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  const auto kk = static_cast<Eigen::Index>(k);
  KMeansResult r;
  r.centroids.resize(kk, x.cols());

  // k-means++ seeding.
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  r.centroids.row(0) = x.row(first(rng));
  for (Eigen::Index c = 1; c < kk; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(i) - r.centroids.row(c - 1)).squaredNorm());
      total += d2[i];
    }
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double t = u(rng);
      for (chosen = 0; chosen < n - 1 && t >= d2[chosen]; ++chosen) t -= d2[chosen];
    } else {
      chosen = first(rng);
    }
    r.centroids.row(c) = x.row(chosen);
  }

  r.assignment.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < kk; ++c) {
        const double d = (x.row(i) - r.centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (r.assignment[i] != static_cast<std::size_t>(best)) changed = true;
      r.assignment[i] = static_cast<std::size_t>(best);
    }
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(r.assignment[i])) += x.row(i);
      ++counts[r.assignment[i]];
    }
    for (Eigen::Index c = 0; c < kk; ++c) {
      if (counts[c] > 0) {
        r.centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: re-seed at the point farthest from its centroid.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = (x.row(i) - r.centroids.row(static_cast<Eigen::Index>(r.assignment[i]))).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      r.centroids.row(c) = x.row(far);
      --counts[r.assignment[far]];
      r.assignment[far] = static_cast<std::size_t>(c);
      counts[c] = 1;
    }
  }
  r.inertia = inertia_of(x, r.centroids, r.assignment);
  return r;
}

}  // namespace detail

/// k-means with k-means++ seeding; the restart with the lowest inertia wins.
inline KMeansResult kmeans(const Eigen::MatrixXd& x, std::size_t k, RngSeed seed, const KMeansOptions& opt = {}) {
  if (k == 0 || static_cast<Eigen::Index>(k) > x.rows())
    throw std::invalid_argument("kmeans: k must be between 1 and the number of points");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  for (std::size_t r = 0; r < std::max<std::size_t>(opt.restarts, 1); ++r) {
    auto cand = detail::kmeans_once(x, k, opt.max_iterations, rng);
    if (cand.inertia < best.inertia) best = std::move(cand);
  }
  return best;
}

struct SpectralResult {
  Partition partition;
  /// Nodes with positive degree, in id order; rows of the matrices below follow it.
  std::vector<NodeId> active_nodes;
  /// Smallest eigenvalues of L_sym over the active nodes, ascending.
  Eigen::VectorXd eigenvalues;
  /// Matching eigenvectors as columns.
  Eigen::MatrixXd eigenvectors;
  /// Row-normalized eigenvectors fed to k-means.
  Eigen::MatrixXd embedding;
};

/// L_sym = I - D^{-1/2} A D^{-1/2} restricted to the given nodes.
inline Eigen::MatrixXd normalized_laplacian(const Graph& g, const std::vector<NodeId>& nodes) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  std::vector<Eigen::Index> pos(g.node_count(), -1);
  for (Eigen::Index r = 0; r < m; ++r) pos[nodes[r]] = r;
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const NodeId i = nodes[r];
    const double di = g.degree(i);
    for (const auto& nb : g.neighbors(i)) {
      const Eigen::Index c = pos[nb.id];
      if (c < 0) continue;
      l(r, c) -= nb.weight / std::sqrt(di * g.degree(nb.id));
    }
  }
  return l;
}

/**
 * Normalized-cut spectral clustering: eigenvectors of the smallest
 * eigenvalues of L_sym, row-normalized, clustered by k-means. Isolated nodes
 * become singleton clusters up front and reduce the cluster budget for the
 * rest of the graph.
 */
inline SpectralResult spectral_ncut(const Graph& g, std::size_t num_clusters, RngSeed seed,
                                    const KMeansOptions& opt = {}) {
  const std::size_t n = g.node_count();
  if (num_clusters < 1 || num_clusters > n)
    throw std::invalid_argument("spectral_ncut: num_clusters must be in [1, " + std::to_string(n) + "], got " +
                                std::to_string(num_clusters));
  SpectralResult out;
  std::vector<std::size_t> label(n, 0);
  std::size_t next_label = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (g.degree(i) > 0.0)
      out.active_nodes.push_back(i);
    else
      label[i] = next_label++;
  }
  const std::size_t active = out.active_nodes.size();
  if (active == 0) {
    out.partition = Partition::from_labels(label);
    return out;
  }
  const std::size_t k = std::clamp<std::size_t>(num_clusters > next_label ? num_clusters - next_label : 1, 1, active);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_laplacian(g, out.active_nodes));
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_ncut: eigendecomposition failed");
  const auto kk = static_cast<Eigen::Index>(k);
  out.eigenvalues = solver.eigenvalues().head(kk);
  out.eigenvectors = solver.eigenvectors().leftCols(kk);
  out.embedding = out.eigenvectors;
  for (Eigen::Index r = 0; r < out.embedding.rows(); ++r) {
    const double norm = out.embedding.row(r).norm();
    if (norm > 0.0) out.embedding.row(r) /= norm;
  }

  std::vector<std::size_t> assignment(active);
  if (k >= active) {
    for (std::size_t r = 0; r < active; ++r) assignment[r] = r;
  } else {
    assignment = kmeans(out.embedding, k, seed, opt).assignment;
  }
  for (std::size_t r = 0; r < active; ++r) label[out.active_nodes[r]] = next_label + assignment[r];
  out.partition = Partition::from_labels(label);
  return out;
}

}  // namespace shiftcd
