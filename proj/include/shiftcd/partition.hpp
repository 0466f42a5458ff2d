#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>


namespace shiftcd {

using Label = std::uint32_t;

/**
 * Total assignment of nodes to communities.
 *
 * Labels are always canonical: communities are numbered 0..count-1 in order of
 * first appearance, so two partitions compare equal iff they group the nodes
 * identically.
 */
class Partition {
 public:
  Partition() = default;

  /// Canonicalizes arbitrary integer labels.
  template <class T>
  static Partition from_labels(const std::vector<T>& raw) {
    Partition p;
    p.labels_.reserve(raw.size());
    std::unordered_map<T, Label> remap;
    for (const auto& r : raw) {
      auto [it, inserted] = remap.try_emplace(r, static_cast<Label>(remap.size()));
      p.labels_.push_back(it->second);
    }
    p.count_ = remap.size();
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = i;
    return from_labels(raw);
  }

  static Partition all_in_one(std::size_t n) { return from_labels(std::vector<std::size_t>(n, 0)); }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t community_count() const noexcept { return count_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  Label operator[](std::size_t i) const { return labels_.at(i); }

  std::vector<std::size_t> community_sizes() const {
    std::vector<std::size_t> sizes(count_, 0);
    for (Label l : labels_) ++sizes[l];
    return sizes;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Label> labels_;
  std::size_t count_ = 0;
};

}  // namespace shiftcd
