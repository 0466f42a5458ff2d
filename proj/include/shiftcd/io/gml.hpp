#pragma once

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/io/ground_truth.hpp"

namespace shiftcd::io {

/// Parsed GML value: number, string or nested list of key/value pairs.
struct GmlValue;
using GmlList = std::vector<std::pair<std::string, GmlValue>>;

struct GmlValue {
  std::variant<double, std::string, GmlList> data;
  std::size_t line = 0;

  const double* number() const { return std::get_if<double>(&data); }
  const std::string* string() const { return std::get_if<std::string>(&data); }
  const GmlList* list() const { return std::get_if<GmlList>(&data); }

  /// Number or string rendered as text (integral numbers without a fraction).
  std::optional<std::string> scalar_text() const {
    if (auto s = string()) return *s;
    if (auto d = number()) {
      if (*d == static_cast<double>(static_cast<long long>(*d))) return std::to_string(static_cast<long long>(*d));
      std::ostringstream ss;
      ss.precision(17);
      ss << *d;
      return ss.str();
    }
    return std::nullopt;
  }
};

namespace detail {

class GmlParser {
 public:
  GmlParser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  GmlList parse_document() {
    auto list = parse_list(false);
    skip_space();
    if (pos_ < text_.size()) fail("unexpected ']'");
    return list;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  GmlList parse_list(bool nested) {
    GmlList out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        if (nested) fail("unbalanced brackets: missing ']'");
        return out;
      }
      if (text_[pos_] == ']') {
        if (!nested) return out;  // caller reports the stray bracket
        ++pos_;
        return out;
      }
      std::string key = parse_key();
      skip_space();
      out.emplace_back(std::move(key), parse_value());
    }
  }

  std::string parse_key() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail(std::string("expected a key, found '") + text_[pos_] + "'");
    return std::string(text_.substr(start, pos_ - start));
  }

  GmlValue parse_value() {
    GmlValue v;
    v.line = line_;
    if (pos_ >= text_.size()) fail("missing value at end of input");
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      v.data = parse_list(true);
    } else if (c == '"') {
      const std::size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      v.data = std::string(text_.substr(start, pos_ - start));
      ++pos_;
    } else {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '[' &&
             text_[pos_] != ']')
        ++pos_;
      const auto tok = text_.substr(start, pos_ - start);
      double d = 0.0;
      if (tok.empty() || !parse_double(tok, d)) fail("malformed value '" + std::string(tok) + "'");
      v.data = d;
    }
    return v;
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline const GmlValue* find_key(const GmlList& list, std::string_view key) {
  for (const auto& [k, v] : list)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace detail

struct GmlOptions {
  /// Use "weight" (or, failing that, edge "value") attributes; otherwise every edge weighs 1.
  bool weighted = true;
};

struct GmlGraph {
  Graph graph;
  std::optional<GroundTruth> ground_truth;
  bool directed = false;
};

/**
 * Reads the GML subset used by the classic community-detection corpora:
 * one graph block with node [id, label, value] and edge [source, target,
 * weight | value] entries. Node names are labels when present, ids otherwise.
 * Node "value" attributes become the ground truth.
 */
inline GmlGraph parse_gml(std::string_view text, const GmlOptions& opt = {}, const std::string& source = "<gml>") {
  const auto doc = detail::GmlParser(text, source).parse_document();
  const GmlValue* graph_block = detail::find_key(doc, "graph");
  if (!graph_block || !graph_block->list()) throw ParseError(source + ": no graph [ ... ] block");
  const auto& items = *graph_block->list();

  GmlGraph out;
  if (auto d = detail::find_key(items, "directed"); d && d->number()) out.directed = *d->number() != 0.0;

  auto where = [&](const GmlValue& v) { return source + ":" + std::to_string(v.line); };

  GraphBuilder builder(out.directed);
  std::map<std::string, std::string> id_to_name;
  std::set<std::string> names;
  auto label_taken = [&](const std::string& name) { return !names.insert(name).second; };
  GroundTruth truth;
  for (const auto& [key, value] : items) {
    if (key != "node") continue;
    const auto* node = value.list();
    if (!node) throw ParseError(where(value) + ": node must be a [ ... ] block");
    const auto* id = detail::find_key(*node, "id");
    if (!id || !id->scalar_text()) throw ParseError(where(value) + ": node without id");
    const auto id_text = *id->scalar_text();
    if (id_to_name.count(id_text)) throw ParseError(where(value) + ": duplicate node id " + id_text);
    std::string name = id_text;
    if (const auto* label = detail::find_key(*node, "label"); label && label->scalar_text()) name = *label->scalar_text();
    for (char& c : name)
      if (c == ' ' || c == '\t') c = '_';
    if (label_taken(name)) throw ParseError(where(value) + ": duplicate node label " + name);
    id_to_name.emplace(id_text, name);
    builder.add_node(name);
    if (const auto* gt = detail::find_key(*node, "value"); gt && gt->scalar_text())
      truth.assign(name, *gt->scalar_text());
  }

  for (const auto& [key, value] : items) {
    if (key != "edge") continue;
    const auto* edge = value.list();
    if (!edge) throw ParseError(where(value) + ": edge must be a [ ... ] block");
    const auto* s = detail::find_key(*edge, "source");
    const auto* t = detail::find_key(*edge, "target");
    if (!s || !t || !s->scalar_text() || !t->scalar_text()) throw ParseError(where(value) + ": edge needs source and target");
    auto si = id_to_name.find(*s->scalar_text());
    auto ti = id_to_name.find(*t->scalar_text());
    if (si == id_to_name.end()) throw ParseError(where(value) + ": edge references unknown node " + *s->scalar_text());
    if (ti == id_to_name.end()) throw ParseError(where(value) + ": edge references unknown node " + *t->scalar_text());
    double w = 1.0;
    if (opt.weighted) {
      const auto* wv = detail::find_key(*edge, "weight");
      if (!wv) wv = detail::find_key(*edge, "value");
      if (wv) {
        if (!wv->number()) throw ParseError(where(*wv) + ": non-numeric edge weight");
        w = *wv->number();
      }
    }
    try {
      builder.add_edge({si->second, ti->second, w});
    } catch (const GraphError& e) {
      throw ParseError(where(value) + ": " + e.what());
    }
  }
  out.graph = builder.build();
  if (!truth.empty()) out.ground_truth = std::move(truth);
  return out;
}

inline GmlGraph load_gml(const std::filesystem::path& path, const GmlOptions& opt = {}) {
  return parse_gml(read_file(path), opt, path.string());
}

}  // namespace shiftcd::io
