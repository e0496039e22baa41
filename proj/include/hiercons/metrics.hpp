#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hiercons/partition.hpp"

namespace hiercons {

/// Cluster-pair co-occurrence counts of two partitions of the same nodes.
class ContingencyTable {
 public:
  /// Throws DomainError when the partitions cover different node counts.
  ContingencyTable(const Partition& g, const Partition& h);

  std::size_t total() const noexcept { return n_; }
  std::size_t rows() const noexcept { return a_.size(); }
  std::size_t cols() const noexcept { return b_.size(); }
  std::size_t count(std::size_t c, std::size_t d) const { return counts_[c * b_.size() + d]; }
  const std::vector<std::size_t>& row_sums() const noexcept { return a_; }
  const std::vector<std::size_t>& col_sums() const noexcept { return b_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> a_, b_;
  std::vector<std::size_t> counts_;
};

// All measures use natural logarithms.

double entropy(const Partition& p);
double mutual_information(const Partition& g, const Partition& h);

/// Exact expectation of I(g, h) when the labels of h are randomly permuted
/// (fixed marginals, hypergeometric cell counts).
double expected_mi(const Partition& g, const Partition& h);

/// Monte-Carlo estimate of expected_mi from `trials` random label permutations.
double expected_mi_montecarlo(const Partition& g, const Partition& h, std::size_t trials, std::uint64_t seed);

double nmi_max(const Partition& g, const Partition& h);

struct AmiResult {
  double value = 0.0;
  bool degenerate = false;  // max entropy equals E[I] while g != h
};

/// (I - E[I]) / (max{H(g), H(h)} - E[I]); exactly symmetric in its arguments.
AmiResult ami_max_checked(const Partition& g, const Partition& h);
double ami_max(const Partition& g, const Partition& h);

}  // namespace hiercons
