#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftcd/baselines/girvan_newman.hpp"
#include "shiftcd/baselines/label_propagation.hpp"
#include "shiftcd/baselines/louvain.hpp"
#include "shiftcd/baselines/spectral.hpp"
#include "shiftcd/io/ground_truth.hpp"
#include "shiftcd/io/manifest.hpp"
#include "shiftcd/io/results.hpp"
#include "shiftcd/metrics.hpp"
#include "shiftcd/shift.hpp"
#include "shiftcd/similarity.hpp"

namespace shiftcd {

enum class Method { rms, medoid_shift, louvain, label_propagation, girvan_newman, spectral };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::rms: return "rms";
    case Method::medoid_shift: return "medoid-shift";
    case Method::louvain: return "louvain";
    case Method::label_propagation: return "label-propagation";
    case Method::girvan_newman: return "girvan-newman";
    case Method::spectral: return "spectral";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  for (auto m : {Method::rms, Method::medoid_shift, Method::louvain, Method::label_propagation, Method::girvan_newman,
                 Method::spectral})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<RngSeed> kDefaultSeeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

struct ExperimentSpec {
  std::string dataset;
  Method method = Method::rms;
  std::vector<std::size_t> k;             // rms
  std::vector<std::size_t> num_clusters;  // spectral
  std::vector<RngSeed> seeds;             // louvain, label-propagation, spectral; empty means kDefaultSeeds
  double resolution = 1.0;                // louvain
  std::optional<std::size_t> target;      // girvan-newman
  bool gn_use_weights = true;             // girvan-newman
  std::size_t max_sweeps = 100;           // label-propagation
  std::optional<SimilarityMode> similarity;  // rms; default follows the dataset's weighted flag
  std::vector<std::string> metrics = {"modularity"};
  bool record_runtime = true;
};

inline bool is_stochastic(Method m) {
  return m == Method::louvain || m == Method::label_propagation || m == Method::spectral;
}

/// Throws ExperimentError describing the first invalid parameter.
inline void validate(const ExperimentSpec& s) {
  auto fail = [&](const std::string& what) {
    throw ExperimentError(std::string(to_string(s.method)) + " on '" + s.dataset + "': " + what);
  };
  if (s.dataset.empty()) fail("no dataset given");
  if (s.metrics.empty()) fail("no metrics requested");
  for (const auto& m : s.metrics)
    if (m != "modularity" && m != "nmi") fail("unknown metric '" + m + "'");
  switch (s.method) {
    case Method::rms:
      if (s.k.empty()) fail("rms needs k (a value, list or range)");
      for (auto k : s.k)
        if (k == 0) fail("k must be at least 1");
      break;
    case Method::spectral:
      if (s.num_clusters.empty()) fail("spectral needs num_clusters");
      for (auto c : s.num_clusters)
        if (c == 0) fail("num_clusters must be at least 1");
      break;
    case Method::louvain:
      if (!(s.resolution > 0.0)) fail("resolution must be positive");
      break;
    case Method::label_propagation:
      if (s.max_sweeps == 0) fail("max_sweeps must be positive");
      break;
    case Method::girvan_newman:
      if (s.target && *s.target == 0) fail("target must be at least 1");
      break;
    case Method::medoid_shift: break;
  }
}

namespace detail {

struct GridPoint {
  ParamList params;
  std::size_t k = 0;
  std::size_t clusters = 0;
  RngSeed seed = 0;
};

template <class T>
std::vector<T> ascending_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Grid points come out in ascending parameter order, so the first maximum is
// also the one with the smallest parameters.
inline std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  ExperimentSpec s = spec;
  s.k = ascending_unique(s.k);
  s.num_clusters = ascending_unique(s.num_clusters);
  const auto seeds = ascending_unique(s.seeds.empty() ? kDefaultSeeds : s.seeds);
  switch (s.method) {
    case Method::rms:
      for (auto k : s.k) grid.push_back({{{"k", std::to_string(k)}}, k, 0, 0});
      break;
    case Method::spectral:
      for (auto c : s.num_clusters)
        for (auto seed : seeds)
          grid.push_back({{{"num_clusters", std::to_string(c)}, {"seed", std::to_string(seed)}}, 0, c, seed});
      break;
    case Method::louvain:
      for (auto seed : seeds) {
        GridPoint p{{{"seed", std::to_string(seed)}}, 0, 0, seed};
        if (s.resolution != 1.0) p.params.push_back({"resolution", io::format_number(s.resolution)});
        grid.push_back(std::move(p));
      }
      break;
    case Method::label_propagation:
      for (auto seed : seeds) grid.push_back({{{"seed", std::to_string(seed)}}, 0, 0, seed});
      break;
    case Method::girvan_newman: {
      GridPoint p;
      if (s.target) p.params.push_back({"target", std::to_string(*s.target)});
      if (!s.gn_use_weights) p.params.push_back({"weights", "off"});
      grid.push_back(std::move(p));
      break;
    }
    case Method::medoid_shift: grid.push_back({}); break;
  }
  return grid;
}

struct RunOutput {
  Partition partition;
  bool converged = true;
};

inline RunOutput run_method(const ExperimentSpec& s, const GridPoint& p, const io::Dataset& ds) {
  const Graph& g = ds.graph;
  switch (s.method) {
    case Method::rms: {
      const auto mode = s.similarity.value_or(ds.weighted ? SimilarityMode::weighted_passthrough
                                                          : SimilarityMode::common_neighbor);
      return {rms(g, p.k, mode).partition, true};
    }
    case Method::medoid_shift: return {medoid_shift(graph_to_distance(g)), true};
    case Method::louvain: return {louvain(g, p.seed, s.resolution), true};
    case Method::label_propagation: {
      auto r = label_propagation(g, p.seed, s.max_sweeps);
      return {std::move(r.partition), r.converged};
    }
    case Method::girvan_newman: return {girvan_newman(g, s.target, s.gn_use_weights).partition, true};
    case Method::spectral: return {spectral_ncut(g, p.clusters, p.seed).partition, true};
  }
  throw ExperimentError("unhandled method");
}

}  // namespace detail

/**
 * Runs every grid point of `spec` on a loaded dataset. A sweep (more than one
 * grid point) adds a "best" record chosen by NMI when ground truth exists and
 * by modularity otherwise, ties to the earliest grid point; a pure seed sweep
 * also adds a "mean" record.
 */
inline std::vector<ExperimentResult> run_experiment(const ExperimentSpec& spec, const io::Dataset& ds) {
  validate(spec);
  const bool has_truth = ds.ground_truth.has_value();
  for (const auto& m : spec.metrics)
    if (m == "nmi" && !has_truth)
      throw ExperimentError("nmi requested for '" + ds.name + "', which has no ground truth");

  std::optional<Partition> truth;
  if (has_truth) truth = io::ground_truth_partition(*ds.ground_truth, ds.graph);
  const std::string regime = has_truth ? "nmi" : "modularity";

  const auto grid = detail::expand_grid(spec);
  std::vector<ExperimentResult> out;
  std::vector<double> selection;
  for (const auto& point : grid) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::RunOutput run;
    try {
      run = detail::run_method(spec, point, ds);
    } catch (const std::exception& e) {
      ExperimentResult where;
      where.params = point.params;
      throw ExperimentError(std::string(to_string(spec.method)) + " on '" + ds.name + "' (" +
                            io::format_params(where) + ") failed: " + e.what());
    }
    const auto t1 = std::chrono::steady_clock::now();

    ExperimentResult r;
    r.dataset = ds.name;
    r.method = to_string(spec.method);
    r.params = point.params;
    r.communities = run.partition.community_count();
    r.community_sizes = run.partition.community_sizes();
    r.converged = run.converged;
    if (spec.record_runtime) r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double q = modularity(ds.graph, run.partition);
    const double v = truth ? nmi(run.partition, *truth) : 0.0;
    for (const auto& m : spec.metrics)
      r.metrics.push_back({m, m == "nmi" ? v : q, r.communities, ds.graph.node_count()});
    selection.push_back(regime == "nmi" ? v : q);
    out.push_back(std::move(r));
  }

  if (grid.size() > 1) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < selection.size(); ++i)
      if (selection[i] > selection[best]) best = i;
    ExperimentResult b = out[best];
    b.kind = RecordKind::best;
    out.push_back(std::move(b));

    const bool seed_sweep = is_stochastic(spec.method) && spec.num_clusters.size() <= 1;
    if (seed_sweep) {
      ExperimentResult mean;
      mean.dataset = ds.name;
      mean.method = to_string(spec.method);
      mean.kind = RecordKind::mean;
      mean.params = {{"seeds", std::to_string(grid.size())}};
      if (!spec.num_clusters.empty())
        mean.params.insert(mean.params.begin(), {"num_clusters", std::to_string(spec.num_clusters[0])});
      double comm = 0.0, runtime = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        comm += static_cast<double>(out[i].communities);
        if (out[i].runtime_ms) runtime += *out[i].runtime_ms;
        mean.converged = mean.converged && out[i].converged;
      }
      const double n = static_cast<double>(grid.size());
      mean.communities = static_cast<std::size_t>(std::lround(comm / n));
      if (spec.record_runtime) mean.runtime_ms = runtime / n;
      for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) sum += out[i].metrics[m].value;
        mean.metrics.push_back({spec.metrics[m], sum / n, mean.communities, ds.graph.node_count()});
      }
      out.push_back(std::move(mean));
    }
  }
  return out;
}

}  // namespace shiftcd
