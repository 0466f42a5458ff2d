#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiftcd/experiment.hpp"
#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/io/manifest.hpp"
#include "shiftcd/io/results.hpp"

namespace shiftcd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where an experiment's graph comes from: a manifest entry or an ad-hoc file.
struct DatasetSource {
  std::string name;
  std::optional<std::filesystem::path> input;
  io::GraphFormat format = io::GraphFormat::edgelist;
  bool directed = false;
  bool weighted = false;
  std::optional<std::filesystem::path> ground_truth;
};

struct SuiteEntry {
  std::size_t line = 0;  // line of the [experiment] header
  std::string label;
  DatasetSource source;
  ExperimentSpec spec;
  std::string error;  // non-empty if the section was rejected
};

struct SuiteConfig {
  std::optional<std::filesystem::path> output;
  io::ResultFormat format = io::ResultFormat::csv;
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> data_dir;
  bool timing = true;
  std::vector<SuiteEntry> experiments;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("expected a non-negative integer, got '" + s + "'");
  return v;
}

/// "5", "3..10" or "1, 4, 9" (entries may themselves be ranges).
inline std::vector<std::uint64_t> parse_sweep(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(s)) {
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = parse_unsigned(trim(item.substr(0, dots)));
      const auto hi = parse_unsigned(trim(item.substr(dots + 2)));
      if (lo > hi) throw ConfigError("empty range '" + item + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_unsigned(item));
    }
  }
  return out;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError("expected true/false, got '" + s + "'");
}

inline io::ResultFormat parse_result_format(const std::string& s) {
  if (s == "csv") return io::ResultFormat::csv;
  if (s == "json") return io::ResultFormat::json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

inline double parse_positive(const std::string& s) {
  double v = 0.0;
  if (!io::detail::parse_double(s, v) || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError("expected a positive number, got '" + s + "'");
  return v;
}

inline void apply_experiment_key(SuiteEntry& e, const std::string& key, const std::string& value,
                                 const std::filesystem::path& base) {
  auto& spec = e.spec;
  auto& src = e.source;
  auto path = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  if (key == "name") {
    e.label = value;
  } else if (key == "dataset") {
    src.name = value;
  } else if (key == "input") {
    src.input = path(value);
  } else if (key == "input_format") {
    try {
      src.format = io::parse_graph_format(value);
    } catch (const io::ManifestError& ex) {
      throw ConfigError(ex.what());
    }
  } else if (key == "directed") {
    src.directed = parse_bool(value);
  } else if (key == "weighted") {
    src.weighted = parse_bool(value);
  } else if (key == "ground_truth") {
    src.ground_truth = path(value);
  } else if (key == "method") {
    auto m = parse_method(value);
    if (!m) throw ConfigError("unknown method '" + value + "'");
    spec.method = *m;
  } else if (key == "k") {
    spec.k.clear();
    for (auto v : parse_sweep(value)) spec.k.push_back(static_cast<std::size_t>(v));
  } else if (key == "num_clusters") {
    spec.num_clusters.clear();
    for (auto v : parse_sweep(value)) spec.num_clusters.push_back(static_cast<std::size_t>(v));
  } else if (key == "seed" || key == "seeds") {
    spec.seeds = parse_sweep(value);
  } else if (key == "resolution") {
    spec.resolution = parse_positive(value);
  } else if (key == "target") {
    spec.target = static_cast<std::size_t>(parse_unsigned(value));
  } else if (key == "use_weights") {
    spec.gn_use_weights = parse_bool(value);
  } else if (key == "max_sweeps") {
    spec.max_sweeps = static_cast<std::size_t>(parse_unsigned(value));
  } else if (key == "similarity") {
    if (value == "auto")
      spec.similarity.reset();
    else if (value == "weighted")
      spec.similarity = SimilarityMode::weighted_passthrough;
    else if (value == "common-neighbor")
      spec.similarity = SimilarityMode::common_neighbor;
    else
      throw ConfigError("unknown similarity '" + value + "' (expected auto, weighted or common-neighbor)");
  } else if (key == "metrics" || key == "metric") {
    spec.metrics = split_list(value);
    if (spec.metrics.size() == 1 && spec.metrics[0] == "both") spec.metrics = {"modularity", "nmi"};
  } else {
    throw ConfigError("unknown key '" + key + "' in [experiment]");
  }
}

inline void apply_global_key(SuiteConfig& c, const std::string& key, const std::string& value,
                             const std::filesystem::path& base) {
  auto path = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  if (key == "output")
    c.output = path(value);
  else if (key == "format")
    c.format = parse_result_format(value);
  else if (key == "manifest")
    c.manifest = path(value);
  else if (key == "data_dir")
    c.data_dir = path(value);
  else if (key == "timing")
    c.timing = parse_bool(value);
  else
    throw ConfigError("unknown global key '" + key + "'");
}

}  // namespace detail

/**
 * INI-style suite file. Global keys (output, format, manifest, data_dir,
 * timing) come before the first [experiment] section; each section describes
 * one experiment. Relative paths resolve against `base`. Syntax errors and bad
 * global keys throw ConfigError with the line number; a section with a bad
 * key or parameters invalid for its method is kept with `error` set so the
 * remaining sections still run.
 */
inline SuiteConfig parse_suite_config(std::string_view text, const std::filesystem::path& base = ".",
                                      const std::string& source = "<suite>") {
  SuiteConfig cfg;
  SuiteEntry* current = nullptr;
  io::detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') return;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      const auto section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "experiment") throw ConfigError(where + "unknown section [" + section + "]");
      cfg.experiments.push_back({});
      current = &cfg.experiments.back();
      current->line = line_no;
      return;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    try {
      if (current)
        detail::apply_experiment_key(*current, key, value, base);
      else
        detail::apply_global_key(cfg, key, value, base);
    } catch (const ConfigError& e) {
      if (!current) throw ConfigError(where + e.what());
      if (current->error.empty()) current->error = where + e.what();
    }
  });
  for (auto& e : cfg.experiments) {
    if (e.source.name.empty() && e.source.input) e.source.name = e.source.input->stem().string();
    e.spec.dataset = e.source.name;
    e.spec.record_runtime = cfg.timing;
    if (e.label.empty()) e.label = e.source.name + "/" + to_string(e.spec.method);
    if (!e.error.empty()) continue;
    try {
      validate(e.spec);
    } catch (const ExperimentError& ex) {
      e.error = source + ":" + std::to_string(e.line) + ": " + ex.what();
    }
  }
  return cfg;
}

inline SuiteConfig load_suite_config(const std::filesystem::path& path) {
  return parse_suite_config(io::read_file(path), path.parent_path().empty() ? "." : path.parent_path(),
                            path.string());
}

struct SuiteOptions {
  std::optional<std::filesystem::path> output;  // overrides the config's output
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> data_dir;
  std::optional<bool> timing;
};

/// Resolves a dataset either from its ad-hoc input file or from the manifest.
inline io::Dataset resolve_dataset(const DatasetSource& src, const std::optional<std::filesystem::path>& manifest,
                                   const std::filesystem::path& data_dir) {
  if (src.input) return io::load_graph_file(src.name, *src.input, src.format, src.directed, src.weighted,
                                            src.ground_truth);
  if (!manifest) throw io::ManifestError("dataset '" + src.name + "' needs either an input file or a manifest");
  const auto entries = io::load_manifest(*manifest);
  return io::load_dataset(io::find_dataset(entries, src.name), data_dir);
}

/// Fixed-width comparison table of point, best and mean records.
inline void print_table(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << std::left << std::setw(14) << "dataset" << std::setw(19) << "method" << std::setw(32) << "params"
      << std::setw(11) << "metric" << std::right << std::setw(9) << "value" << std::setw(7) << "comms"
      << std::setw(12) << "runtime_ms" << '\n';
  for (const auto& r : io::sorted_results(results))
    for (const auto& m : r.metrics) {
      std::ostringstream v;
      v.setf(std::ios::fixed);
      v.precision(4);
      v << m.value;
      const auto rt = io::runtime_text(r);
      out << std::left << std::setw(14) << r.dataset << std::setw(19) << r.method << std::setw(32)
          << io::format_params(r) << std::setw(11) << m.name << std::right << std::setw(9) << v.str() << std::setw(7)
          << r.communities << std::setw(12) << (rt.empty() ? "-" : rt) << '\n';
    }
}

/**
 * Runs every experiment of a parsed suite. Returns 0 when all succeed, 1 when
 * any fails (each failure is named on `err`), 2 when nothing could run.
 */
inline int run_suite(const SuiteConfig& cfg, const SuiteOptions& opt, std::ostream& out, std::ostream& err) {
  if (cfg.experiments.empty()) {
    err << "suite defines no experiments\n";
    return 2;
  }
  const auto manifest = opt.manifest ? opt.manifest : cfg.manifest;
  std::filesystem::path fallback_dir = "data";
  if (cfg.data_dir)
    fallback_dir = *cfg.data_dir;
  else if (manifest)
    fallback_dir = manifest->parent_path();
  const auto data_dir = opt.data_dir ? *opt.data_dir : io::data_directory(fallback_dir);
  const auto output = opt.output ? opt.output : cfg.output;

  std::vector<ExperimentResult> all;
  std::vector<std::string> failed;
  std::map<std::string, io::Dataset> cache;
  for (const auto& e : cfg.experiments) {
    if (!e.error.empty()) {
      err << "error: experiment '" << e.label << "': " << e.error << '\n';
      failed.push_back(e.label);
      continue;
    }
    try {
      std::string cache_key = e.source.name;
      if (e.source.input) {
        cache_key += "|" + e.source.input->string() + "|" + std::to_string(static_cast<int>(e.source.format)) +
                     (e.source.directed ? "|d" : "|u") + (e.source.weighted ? "|w" : "|1") + "|" +
                     (e.source.ground_truth ? e.source.ground_truth->string() : "");
      }
      auto it = cache.find(cache_key);
      if (it == cache.end()) it = cache.emplace(cache_key, resolve_dataset(e.source, manifest, data_dir)).first;
      auto spec = e.spec;
      if (opt.timing) spec.record_runtime = *opt.timing;
      auto results = run_experiment(spec, it->second);
      all.insert(all.end(), results.begin(), results.end());
    } catch (const std::exception& ex) {
      err << "error: experiment '" << e.label << "' (line " << e.line << "): " << ex.what() << '\n';
      failed.push_back(e.label);
    }
  }
  if (!all.empty()) {
    print_table(all, out);
    if (output) {
      try {
        io::write_results(all, cfg.format, *output);
      } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return 2;
      }
    }
  }
  if (failed.empty()) return 0;
  err << failed.size() << " of " << cfg.experiments.size() << " experiments failed:";
  for (const auto& f : failed) err << ' ' << f;
  err << '\n';
  return all.empty() ? 2 : 1;
}

inline int run_suite(const std::filesystem::path& config_path, const SuiteOptions& opt, std::ostream& out,
                     std::ostream& err) {
  SuiteConfig cfg;
  try {
    cfg = load_suite_config(config_path);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }
  return run_suite(cfg, opt, out, err);
}

}  // namespace shiftcd
