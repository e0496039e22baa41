#include "hiercons/partition.hpp"

#include <limits>
#include <unordered_map>

namespace hiercons {

namespace {
constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
}

Partition::Partition(std::span<const std::size_t> labels) {
  labels_.resize(labels.size());
  std::unordered_map<std::size_t, std::size_t> remap;
  remap.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(labels[i], sizes_.size());
    if (inserted) sizes_.push_back(0);
    labels_[i] = it->second;
    ++sizes_[it->second];
  }
}

Partition Partition::singletons(std::size_t n) {
  Partition p;
  p.labels_.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.labels_[i] = i;
  p.sizes_.assign(n, 1);
  return p;
}

Partition Partition::all_in_one(std::size_t n) {
  Partition p;
  p.labels_.assign(n, 0);
  if (n > 0) p.sizes_.assign(1, n);
  return p;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(sizes_.size());
  for (std::size_t c = 0; c < sizes_.size(); ++c) out[c].reserve(sizes_[c]);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

Partition Partition::restrict_to(std::span<const std::size_t> nodes) const {
  std::vector<std::size_t> sub(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) sub[a] = labels_[nodes[a]];
  return Partition(sub);
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != size()) return false;
  std::vector<std::size_t> parent(sizes_.size(), kUnset);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& p = parent[labels_[i]];
    if (p == kUnset) {
      p = coarser[i];
    } else if (p != coarser[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace hiercons
