#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "shiftcd/shiftcd.hpp"

namespace testing_support {

using namespace shiftcd;

/// Graph on nodes "0".."n-1" (all present, in id order) with the given edges.
inline Graph numbered_graph(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  GraphBuilder b(false);
  for (std::size_t i = 0; i < n; ++i) b.add_node(std::to_string(i));
  for (const auto& [u, v, w] : edges) b.add_edge({std::to_string(u), std::to_string(v), w});
  return b.build();
}

inline Graph unit_graph(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::tuple<NodeId, NodeId, double>> weighted;
  for (auto [u, v] : edges) weighted.emplace_back(u, v, 1.0);
  return numbered_graph(n, weighted);
}

inline Graph triangle() { return unit_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

/// Two unit triangles joined by the bridge 2-3.
inline Graph barbell() { return unit_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

inline Graph two_triangles() { return unit_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

/// Erdős–Rényi style graph with random integer weights in [1, max_w].
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p, int max_w = 1) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> wd(1, max_w);
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (edge(rng)) edges.emplace_back(i, j, static_cast<double>(wd(rng)));
  return numbered_graph(n, edges);
}

inline Partition random_partition(std::mt19937_64& rng, std::size_t n, std::size_t max_labels) {
  std::uniform_int_distribution<std::size_t> d(0, max_labels - 1);
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = d(rng);
  return Partition::from_labels(labels);
}

/// Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j), by the literal double sum.
inline double modularity_double_sum(const Graph& g, const Partition& p) {
  const std::size_t n = g.node_count();
  const double two_m = g.total_weight();
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (p[i] == p[j]) q += g.weight(i, j) - g.degree(i) * g.degree(j) / two_m;
  return q / two_m;
}

/// Medoid-Shift next point by direct evaluation of S(i,j) = Σ_k D(j,k)·exp(−D(i,k)/2).
inline std::vector<NodeId> medoid_shift_brute(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  std::vector<NodeId> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += d[j][k] * std::exp(-d[i][k] / 2.0);
      if (j == 0 || s < best) {
        best = s;
        next[i] = static_cast<NodeId>(j);
      }
    }
  }
  return next;
}

inline DistanceMatrix to_matrix(const std::vector<std::vector<double>>& d) {
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  return DistanceMatrix(d.size(), flat);
}

/// Random symmetric distances with zero diagonal.
inline std::vector<std::vector<double>> random_distances(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = u(rng);
  return d;
}

/// Temporary directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("shiftcd_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path write(const std::string& name, const std::string& body) const {
    const auto p = path / name;
    std::ofstream(p, std::ios::binary) << body;
    return p;
  }
};

inline std::string slurp(const std::filesystem::path& p) { return io::read_file(p); }

}  // namespace testing_support
