#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiftcd/graph.hpp"

namespace shiftcd::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto pos = line.find_first_of("#%");
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

inline bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(line_no, text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace detail

/**
 * Parses "source target [weight]" lines. '#' and '%' start comments, blank
 * lines are skipped, columns past the third are ignored. With weighted=false
 * every edge gets weight 1 (a third column must still be numeric).
 */
inline std::vector<EdgeRecord> parse_edge_records(std::string_view text, bool weighted,
                                                  const std::string& source_name = "<input>") {
  std::vector<EdgeRecord> records;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) return;
    const auto where = source_name + ":" + std::to_string(line_no);
    if (tokens.size() < 2) throw ParseError(where + ": expected 'source target [weight]'");
    EdgeRecord r{std::string(tokens[0]), std::string(tokens[1]), 1.0};
    if (tokens.size() >= 3) {
      double w = 0.0;
      if (!detail::parse_double(tokens[2], w))
        throw ParseError(where + ": non-numeric weight '" + std::string(tokens[2]) + "'");
      if (weighted) r.weight = w;
    }
    records.push_back(std::move(r));
  });
  if (records.empty()) throw ParseError(source_name + ": no edges found");
  return records;
}

inline Graph load_edge_list(const std::filesystem::path& path, bool directed, bool weighted) {
  const auto records = parse_edge_records(read_file(path), weighted, path.string());
  try {
    return build_graph(records, directed);
  } catch (const GraphError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Writes "source target weight" lines, one per undirected edge (debug utility).
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out.precision(17);
  g.for_each_edge([&](NodeId i, NodeId j, double w) { out << g.name(i) << ' ' << g.name(j) << ' ' << w << '\n'; });
}

}  // namespace shiftcd::io
