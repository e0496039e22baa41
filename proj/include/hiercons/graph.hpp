#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hiercons/dense_matrix.hpp"

namespace hiercons {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 1.0;
};

/// Weighted undirected graph stored symmetrized. Immutable after construction.
///
/// A self-loop (i, i, w) sets A_ii = w and adds w once to k_i, so that
/// k_i = sum_j A_ij and 2m = sum_i k_i hold with the diagonal included.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on nodes 0..n-1 from undirected edges. Repeated edges, in
  /// either orientation, have their weights summed. Throws DomainError on
  /// negative or non-finite weights and out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return strengths_.size(); }
  /// Canonical edges (i <= j), sorted, one entry per node pair.
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const double> strengths() const noexcept { return strengths_; }
  double strength(std::size_t i) const noexcept { return strengths_[i]; }
  /// 2m.
  double total_weight() const noexcept { return total_weight_; }
  double self_loop(std::size_t i) const noexcept { return self_loops_[i]; }

  /// Off-diagonal neighbours of i (sorted) and the matching weights.
  std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
    return {adj_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> neighbor_weights(std::size_t i) const noexcept {
    return {adj_w_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// A_ij (0 when absent).
  double weight(std::size_t i, std::size_t j) const;

  DenseMatrix dense_adjacency() const;

 private:
  std::vector<Edge> edges_;
  std::vector<double> strengths_;
  std::vector<double> self_loops_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adj_;
  std::vector<double> adj_w_;
  double total_weight_ = 0.0;
};

/// Configuration-model null matrix P_ij = k_i k_j / 2m (diagonal included).
/// Throws DomainError when 2m = 0.
DenseMatrix config_null_matrix(const Graph& g);

enum class DirectedPolicy {
  /// Stored A_ij = input(i,j) + input(j,i).
  symmetrize,
  /// Both orientations listed with different weights is an error; a pair
  /// listed in both orientations with equal weight is read as one edge.
  reject,
};

struct EdgeListFile {
  Graph graph;
  /// Original id of each internal node.
  std::vector<std::string> node_ids;
};

/// Reads whitespace-separated `src dst [weight]` lines (weight defaults to 1).
/// Blank lines and lines starting with '#' or '%' are skipped; a line with a
/// single token declares a node without edges. When every id is a
/// non-negative integer the internal ids follow numeric order, otherwise
/// order of first appearance.
EdgeListFile read_edge_list(std::istream& in, DirectedPolicy policy = DirectedPolicy::symmetrize);
EdgeListFile load_edge_list(const std::filesystem::path& path,
                            DirectedPolicy policy = DirectedPolicy::symmetrize);

/// Writes canonical edges as `i j w` lines using internal ids; isolated nodes
/// are declared on single-token lines so a reload yields the same node set.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace hiercons
