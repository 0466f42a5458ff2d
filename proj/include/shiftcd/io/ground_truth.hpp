#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftcd/graph.hpp"
#include "shiftcd/io/edge_list.hpp"
#include "shiftcd/partition.hpp"

namespace shiftcd::io {

/// Node name -> community label, in file order.
class GroundTruth {
 public:
  /// Adds a membership; a node may belong to one community only.
  void assign(const std::string& node, const std::string& label) {
    auto [it, inserted] = index_.try_emplace(node, entries_.size());
    if (!inserted) {
      if (entries_[it->second].second == label) return;
      throw ParseError("node '" + node + "' appears in more than one community ('" + entries_[it->second].second +
                       "' and '" + label + "'); overlapping memberships are not supported");
    }
    entries_.emplace_back(node, label);
  }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::size_t community_count() const {
    std::vector<std::string> labels;
    for (const auto& e : entries_) labels.push_back(e.second);
    std::sort(labels.begin(), labels.end());
    return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
  }

  std::vector<std::string> node_names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  /// Fraction of the graph's nodes that carry a label.
  double coverage(const Graph& g) const {
    if (g.node_count() == 0) return 0.0;
    std::size_t hit = 0;
    for (const auto& e : entries_)
      if (g.find(e.first)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(g.node_count());
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

/**
 * Reads a ground-truth file in one of two layouts, detected automatically:
 *   - "node label" pairs, one per line (every line has exactly two tokens);
 *   - one community per line, members separated by tabs or spaces (SNAP).
 * Community-per-line labels are the 0-based line ordinals of non-empty lines.
 */
inline GroundTruth parse_ground_truth(std::string_view text, const std::string& source = "<ground truth>") {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = detail::split_ws(detail::strip_comment(line));
    if (!tokens.empty()) lines.emplace_back(line_no, std::move(tokens));
  });
  if (lines.empty()) throw ParseError(source + ": empty ground-truth file");

  const bool pairs = std::all_of(lines.begin(), lines.end(), [](const auto& l) { return l.second.size() == 2; });
  GroundTruth gt;
  std::size_t community = 0;
  for (const auto& [line_no, tokens] : lines) {
    try {
      if (pairs) {
        gt.assign(std::string(tokens[0]), std::string(tokens[1]));
      } else {
        const auto label = std::to_string(community++);
        for (auto t : tokens) gt.assign(std::string(t), label);
      }
    } catch (const ParseError& e) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return gt;
}

inline GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(read_file(path), path.string());
}

/**
 * Ground truth as a Partition over `g`. Every labeled name must exist in the
 * graph; graph nodes without a label become singleton communities.
 */
inline Partition ground_truth_partition(const GroundTruth& gt, const Graph& g) {
  std::vector<std::string> missing;
  std::map<std::string, std::size_t> label_ids;
  constexpr std::size_t unlabeled = static_cast<std::size_t>(-1);
  std::vector<std::size_t> raw(g.node_count(), unlabeled);
  for (const auto& [node, label] : gt.entries()) {
    auto id = g.find(node);
    if (!id) {
      missing.push_back(node);
      continue;
    }
    raw[*id] = label_ids.try_emplace(label, label_ids.size()).first->second;
  }
  if (!missing.empty()) {
    std::string msg = "ground truth names " + std::to_string(missing.size()) + " node(s) absent from the graph:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw ParseError(msg);
  }
  std::size_t next = label_ids.size();
  for (auto& r : raw)
    if (r == unlabeled) r = next++;
  return Partition::from_labels(raw);
}

}  // namespace shiftcd::io
