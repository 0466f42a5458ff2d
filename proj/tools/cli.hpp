#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shiftcd/shiftcd.hpp"

namespace shiftcd::cli {

struct ClusterOptions {
  std::string input;
  std::string format = "edgelist";
  std::string method;
  std::optional<std::size_t> k;
  std::optional<std::size_t> num_clusters;
  RngSeed seed = 42;
  double resolution = 1.0;
  std::optional<std::size_t> target;
  bool ignore_weights = false;
  bool weighted = false;
  bool directed = false;
  std::string similarity = "auto";
  std::string ground_truth;
  std::string output;
  std::string output_format = "csv";
  std::string metric = "modularity";
};

/// Single clustering run. Metrics go to `out` as csv or json; --output gets "name label" lines.
inline int cluster_command(const ClusterOptions& o, std::ostream& out, std::ostream& err) {
  const auto method = parse_method(o.method);
  if (!method) {
    err << "error: unknown method '" << o.method << "'\n";
    return 2;
  }
  if (o.metric == "nmi" || o.metric == "both") {
    if (o.ground_truth.empty() && o.format != "gml") {
      err << "error: --metric " << o.metric << " needs --ground-truth\n";
      return 2;
    }
  }
  if (*method == Method::rms && !o.k) {
    err << "error: --method rms needs --k\n";
    return 2;
  }
  if (*method == Method::spectral && !o.num_clusters) {
    err << "error: --method spectral needs --num-clusters\n";
    return 2;
  }

  ExperimentSpec spec;
  spec.method = *method;
  spec.dataset = std::filesystem::path(o.input).stem().string();
  if (o.k) spec.k = {*o.k};
  if (o.num_clusters) spec.num_clusters = {*o.num_clusters};
  spec.seeds = {o.seed};
  spec.resolution = o.resolution;
  spec.target = o.target;
  spec.gn_use_weights = !o.ignore_weights;
  if (o.similarity == "weighted") spec.similarity = SimilarityMode::weighted_passthrough;
  if (o.similarity == "common-neighbor") spec.similarity = SimilarityMode::common_neighbor;
  spec.metrics = o.metric == "both" ? std::vector<std::string>{"modularity", "nmi"} : std::vector<std::string>{o.metric};

  try {
    std::optional<std::filesystem::path> gt;
    if (!o.ground_truth.empty()) gt = o.ground_truth;
    const auto ds = io::load_graph_file(spec.dataset, o.input, io::parse_graph_format(o.format), o.directed,
                                        o.weighted, gt);
    const auto results = run_experiment(spec, ds);
    if (o.output_format == "json")
      out << io::results_to_json(results).dump(2) << '\n';
    else
      out << io::results_to_csv(results);

    if (!o.output.empty()) {
      // run_experiment reports summaries only; rerun the single point for the labels.
      const auto grid = detail::expand_grid(spec);
      const auto part = detail::run_method(spec, grid.front(), ds).partition;
      std::ofstream f(o.output);
      if (!f) throw std::runtime_error("cannot write " + o.output);
      for (NodeId i = 0; i < ds.graph.node_count(); ++i) f << ds.graph.name(i) << ' ' << part[i] << '\n';
      if (!f) throw std::runtime_error("failed while writing " + o.output);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

/// Prints each manifest entry with the state of its files.
inline int datasets_command(const std::filesystem::path& manifest, const std::filesystem::path& data_dir,
                            std::ostream& out, std::ostream& err) {
  try {
    for (const auto& m : io::load_manifest(manifest)) {
      std::string state = "ok";
      if (m.sha256.empty() || (m.ground_truth && m.ground_truth_sha256.empty())) {
        out << m.name << " [" << m.scale << "] not pinned\n";
        continue;
      }
      try {
        auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() ? p : data_dir / p; };
        io::verify_checksum(resolve(m.edges), m.sha256);
        if (m.ground_truth) io::verify_checksum(resolve(*m.ground_truth), m.ground_truth_sha256);
      } catch (const io::ManifestError& e) {
        state = e.what();
      }
      out << m.name << " [" << m.scale << "] " << state << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               const std::filesystem::path& default_manifest = {}) {
  CLI::App app{"Graph community detection by shift clustering, with baselines and benchmark harness"};
  app.require_subcommand(1);

  ClusterOptions co;
  auto* cluster = app.add_subcommand("cluster", "Cluster one graph file");
  cluster->add_option("--input", co.input, "Graph file")->required()->check(CLI::ExistingFile);
  cluster->add_option("--format", co.format, "Graph file format")->check(CLI::IsMember({"edgelist", "gml"}));
  cluster->add_option("--method", co.method, "Clustering method")
      ->required()
      ->check(CLI::IsMember({"rms", "medoid-shift", "louvain", "label-propagation", "girvan-newman", "spectral"}));
  cluster->add_option("--k", co.k, "Neighbourhood size (rms)")->check(CLI::PositiveNumber);
  cluster->add_option("--num-clusters", co.num_clusters, "Cluster count (spectral)")->check(CLI::PositiveNumber);
  cluster->add_option("--seed", co.seed, "Random seed");
  cluster->add_option("--resolution", co.resolution, "Modularity resolution (louvain)")->check(CLI::PositiveNumber);
  cluster->add_option("--target", co.target, "Stop at this many communities (girvan-newman)")
      ->check(CLI::PositiveNumber);
  cluster->add_flag("--ignore-weights", co.ignore_weights, "Unweighted shortest paths (girvan-newman)");
  cluster->add_flag("--weighted", co.weighted, "Read edge weights");
  cluster->add_flag("--directed", co.directed, "Input lists directed edges (symmetrized on load)");
  cluster->add_option("--similarity", co.similarity, "Similarity for rms")
      ->check(CLI::IsMember({"auto", "weighted", "common-neighbor"}));
  cluster->add_option("--ground-truth", co.ground_truth, "Ground-truth communities")->check(CLI::ExistingFile);
  cluster->add_option("--output", co.output, "Write 'name label' lines here");
  cluster->add_option("--output-format", co.output_format, "Metric output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cluster->add_option("--metric", co.metric, "Metrics to report")->check(CLI::IsMember({"modularity", "nmi", "both"}));

  std::string suite_path;
  SuiteOptions so;
  std::string so_output, so_manifest, so_data_dir;
  bool no_timing = false;
  auto* suite = app.add_subcommand("suite", "Run an experiment suite file");
  suite->add_option("config", suite_path, "Suite file")->required()->check(CLI::ExistingFile);
  suite->add_option("--output", so_output, "Results file (overrides the suite's output)");
  suite->add_option("--manifest", so_manifest, "Dataset manifest (overrides the suite's manifest)");
  suite->add_option("--data-dir", so_data_dir, "Dataset directory");
  suite->add_flag("--no-timing", no_timing, "Leave runtime_ms empty for byte-reproducible output");

  std::string ds_manifest = default_manifest.string(), ds_data_dir;
  auto* datasets = app.add_subcommand("datasets", "List manifest datasets and verify their checksums");
  datasets->add_option("--manifest", ds_manifest, "Dataset manifest");
  datasets->add_option("--data-dir", ds_data_dir, "Dataset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (cluster->parsed()) return cluster_command(co, out, err);
  if (suite->parsed()) {
    SuiteConfig cfg;
    try {
      cfg = load_suite_config(suite_path);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    if (!so_output.empty()) so.output = so_output;
    if (!so_manifest.empty())
      so.manifest = so_manifest;
    else if (!cfg.manifest && !default_manifest.empty())
      so.manifest = default_manifest;
    if (!so_data_dir.empty()) so.data_dir = so_data_dir;
    if (no_timing) so.timing = false;
    return run_suite(cfg, so, out, err);
  }
  if (datasets->parsed()) {
    if (ds_manifest.empty()) {
      err << "error: no manifest given\n";
      return 2;
    }
    const auto dir = ds_data_dir.empty() ? io::data_directory(std::filesystem::path(ds_manifest).parent_path())
                                         : std::filesystem::path(ds_data_dir);
    return datasets_command(ds_manifest, dir, out, err);
  }
  return 2;
}

}  // namespace shiftcd::cli
