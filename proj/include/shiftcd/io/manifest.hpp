#pragma once

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/io/gml.hpp"
#include "shiftcd/io/ground_truth.hpp"

namespace shiftcd::io {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment variable naming the dataset cache directory.
inline constexpr const char* kDataDirEnv = "SHIFTCD_DATA_DIR";

enum class GraphFormat { edgelist, gml };

inline GraphFormat parse_graph_format(const std::string& s) {
  if (s == "edgelist") return GraphFormat::edgelist;
  if (s == "gml") return GraphFormat::gml;
  throw ManifestError("unknown graph format '" + s + "' (expected edgelist or gml)");
}

/// Hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw ManifestError("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct DatasetManifest {
  std::string name;
  std::filesystem::path edges;  // relative to the data directory unless absolute
  GraphFormat format = GraphFormat::edgelist;
  bool directed = false;
  bool weighted = false;
  std::optional<std::filesystem::path> ground_truth;
  std::string url;
  std::string sha256;  // empty: listed but not pinned, so it cannot be loaded
  std::string ground_truth_sha256;
  /// "desk" datasets are part of the regular benchmark; "large" only for long runs.
  std::string scale = "desk";
};

struct Dataset {
  std::string name;
  Graph graph;
  std::optional<GroundTruth> ground_truth;
  bool weighted = false;
};

inline std::vector<DatasetManifest> parse_manifest(const nlohmann::json& doc) {
  std::vector<DatasetManifest> out;
  if (!doc.contains("datasets") || !doc["datasets"].is_array()) throw ManifestError("manifest needs a 'datasets' array");
  for (const auto& e : doc["datasets"]) {
    DatasetManifest m;
    try {
      m.name = e.at("name").get<std::string>();
      m.edges = e.at("edges").get<std::string>();
      m.format = parse_graph_format(e.at("format").get<std::string>());
      m.directed = e.value("directed", false);
      m.weighted = e.value("weighted", false);
      if (e.contains("ground_truth") && !e["ground_truth"].is_null())
        m.ground_truth = e["ground_truth"].get<std::string>();
      if (e.contains("url") && !e["url"].is_null()) m.url = e["url"].get<std::string>();
      if (e.contains("sha256") && !e["sha256"].is_null()) m.sha256 = e["sha256"].get<std::string>();
      if (e.contains("ground_truth_sha256") && !e["ground_truth_sha256"].is_null())
        m.ground_truth_sha256 = e["ground_truth_sha256"].get<std::string>();
      m.scale = e.value("scale", "desk");
    } catch (const nlohmann::json::exception& ex) {
      throw ManifestError("manifest entry " + (m.name.empty() ? std::to_string(out.size()) : m.name) + ": " + ex.what());
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<DatasetManifest> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  try {
    return parse_manifest(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError(path.string() + ": " + ex.what());
  }
}

inline const DatasetManifest& find_dataset(const std::vector<DatasetManifest>& all, const std::string& name) {
  for (const auto& m : all)
    if (m.name == name) return m;
  throw ManifestError("dataset '" + name + "' is not in the manifest");
}

/// $SHIFTCD_DATA_DIR if set, otherwise `fallback`.
inline std::filesystem::path data_directory(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return fallback;
}

inline void verify_checksum(const std::filesystem::path& file, const std::string& expected) {
  if (!std::filesystem::exists(file))
    throw ManifestError("dataset file " + file.string() + " not found (fetch it first)");
  const auto got = sha256_file(file);
  if (got != expected)
    throw ManifestError("checksum mismatch for " + file.string() + ": expected " + expected + ", got " + got);
}

/**
 * Loads any graph file with an optional ground-truth file. Nodes named only
 * in the ground truth join the graph as isolated nodes.
 */
inline Dataset load_graph_file(const std::string& name, const std::filesystem::path& edges, GraphFormat format,
                               bool directed, bool weighted,
                               const std::optional<std::filesystem::path>& ground_truth = std::nullopt) {
  Dataset ds;
  ds.name = name;
  ds.weighted = weighted;
  if (format == GraphFormat::gml) {
    auto parsed = load_gml(edges, GmlOptions{weighted});
    ds.graph = std::move(parsed.graph);
    ds.ground_truth = std::move(parsed.ground_truth);
  } else {
    ds.graph = load_edge_list(edges, directed, weighted);
  }
  if (ground_truth) ds.ground_truth = load_ground_truth(*ground_truth);
  if (ds.ground_truth) {
    std::vector<std::string> extra;
    for (const auto& n : ds.ground_truth->node_names())
      if (!ds.graph.find(n)) extra.push_back(n);
    if (!extra.empty()) ds.graph = with_isolated_nodes(ds.graph, extra);
  }
  return ds;
}

/// Verifies the pinned checksums, then loads the dataset.
inline Dataset load_dataset(const DatasetManifest& m, const std::filesystem::path& data_dir) {
  if (m.sha256.empty() || (m.ground_truth && m.ground_truth_sha256.empty()))
    throw ManifestError("dataset '" + m.name + "' has no pinned checksum and cannot be loaded");
  auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() ? p : data_dir / p; };
  const auto edges = resolve(m.edges);
  verify_checksum(edges, m.sha256);
  std::optional<std::filesystem::path> gt;
  if (m.ground_truth) {
    gt = resolve(*m.ground_truth);
    verify_checksum(*gt, m.ground_truth_sha256);
  }
  return load_graph_file(m.name, edges, m.format, m.directed, m.weighted, gt);
}

}  // namespace shiftcd::io
