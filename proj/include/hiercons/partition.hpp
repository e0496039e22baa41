#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hiercons {

/// Cluster assignment vector. Labels are canonical: clusters are numbered
/// 0..k-1 in order of their smallest member, so two partitions are equal
/// exactly when they group nodes the same way.
class Partition {
 public:
  Partition() = default;
  /// Accepts arbitrary non-negative labels and canonicalizes them.
  explicit Partition(std::span<const std::size_t> labels);
  explicit Partition(const std::vector<std::size_t>& labels)
      : Partition(std::span<const std::size_t>(labels)) {}

  static Partition singletons(std::size_t n);
  static Partition all_in_one(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_clusters() const noexcept { return sizes_.size(); }
  std::size_t operator[](std::size_t node) const noexcept { return labels_[node]; }
  std::span<const std::size_t> labels() const noexcept { return labels_; }
  std::span<const std::size_t> cluster_sizes() const noexcept { return sizes_; }
  std::size_t size_of_cluster_containing(std::size_t node) const noexcept {
    return sizes_[labels_[node]];
  }

  bool is_trivial() const noexcept { return sizes_.size() <= 1; }
  bool is_singletons() const noexcept { return sizes_.size() == labels_.size(); }

  /// Member lists per cluster, each sorted ascending.
  std::vector<std::vector<std::size_t>> members() const;

  /// Partition induced on `nodes` (positions in `nodes` become the new ids).
  Partition restrict_to(std::span<const std::size_t> nodes) const;

  /// True when every cluster of *this lies inside a single cluster of `coarser`.
  bool refines(const Partition& coarser) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> sizes_;
};

}  // namespace hiercons
