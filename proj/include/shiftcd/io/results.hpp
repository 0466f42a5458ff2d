#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/metrics.hpp"

namespace shiftcd {

/// Which record of a sweep a result is.
enum class RecordKind { point, best, mean };

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct ExperimentResult {
  std::string dataset;
  std::string method;
  ParamList params;  // in grid order, e.g. {{"k","5"}}
  RecordKind kind = RecordKind::point;
  std::size_t communities = 0;
  std::vector<std::size_t> community_sizes;
  std::vector<MetricValue> metrics;
  std::optional<double> runtime_ms;  // algorithm time only; empty when not recorded
  bool converged = true;

  const MetricValue* metric(std::string_view name) const {
    for (const auto& m : metrics)
      if (m.name == name) return &m;
    return nullptr;
  }
};

namespace io {

enum class ResultFormat { csv, json };

/// Shortest decimal text that round-trips the double.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_params(const ExperimentResult& r) {
  std::string s;
  if (r.kind == RecordKind::best) s = "best:";
  if (r.kind == RecordKind::mean) s = "mean:";
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i) s += ';';
    s += r.params[i].first + "=" + r.params[i].second;
  }
  return s;
}

namespace detail {

// Numeric-aware ordering so "k=10" sorts after "k=9".
inline bool value_less(const std::string& a, const std::string& b) {
  double x = 0.0, y = 0.0;
  if (parse_double(a, x) && parse_double(b, y) && x != y) return x < y;
  return a < b;
}

inline bool params_less(const ParamList& a, const ParamList& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
    if (a[i].second != b[i].second) return value_less(a[i].second, b[i].second);
  }
  return a.size() < b.size();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Stable order by (dataset, method, record kind, params).
inline std::vector<ExperimentResult> sorted_results(std::vector<ExperimentResult> results) {
  std::stable_sort(results.begin(), results.end(), [](const ExperimentResult& a, const ExperimentResult& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.method != b.method) return a.method < b.method;
    if (a.kind != b.kind) return a.kind < b.kind;
    return detail::params_less(a.params, b.params);
  });
  return results;
}

inline std::string runtime_text(const ExperimentResult& r) {
  if (!r.runtime_ms) return "";
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(3);
  ss << *r.runtime_ms;
  return ss.str();
}

/// One row per (result, metric): dataset,method,params,metric,value,communities,runtime_ms
inline std::string results_to_csv(const std::vector<ExperimentResult>& results) {
  std::string out = "dataset,method,params,metric,value,communities,runtime_ms\n";
  for (const auto& r : sorted_results(results))
    for (const auto& m : r.metrics) {
      out += detail::csv_field(r.dataset) + ',' + detail::csv_field(r.method) + ',' +
             detail::csv_field(format_params(r)) + ',' + m.name + ',' + format_number(m.value) + ',' +
             std::to_string(r.communities) + ',' + runtime_text(r) + '\n';
    }
  return out;
}

inline nlohmann::ordered_json results_to_json(const std::vector<ExperimentResult>& results) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : sorted_results(results))
    for (const auto& m : r.metrics) {
      nlohmann::ordered_json row;
      row["dataset"] = r.dataset;
      row["method"] = r.method;
      row["params"] = format_params(r);
      row["metric"] = m.name;
      row["value"] = m.value;
      row["communities"] = r.communities;
      if (r.runtime_ms)
        row["runtime_ms"] = *r.runtime_ms;
      else
        row["runtime_ms"] = nullptr;
      arr.push_back(std::move(row));
    }
  return arr;
}

inline void write_results(const std::vector<ExperimentResult>& results, ResultFormat format,
                          const std::filesystem::path& path) {
  if (results.empty()) throw std::invalid_argument("write_results: no results to write");
  const std::string body = format == ResultFormat::csv ? results_to_csv(results) : results_to_json(results).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write results to " + path.string());
  out << body;
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

}  // namespace io
}  // namespace shiftcd
