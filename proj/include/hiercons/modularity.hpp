#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hiercons/dense_matrix.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace hiercons {

/// Modularity-like objective Q(g) = sum_ij B_ij delta(g_i, g_j) over a dense
/// interaction matrix. The matrix is symmetrized as (B + B^T) / 2 on
/// construction; the value of Q is unchanged by this.
class QualityProblem {
 public:
  QualityProblem() = default;
  explicit QualityProblem(DenseMatrix b);

  /// B = A - gamma * P with the configuration null model.
  static QualityProblem from_graph(const Graph& g, double gamma);

  std::size_t size() const noexcept { return b_.size(); }
  const DenseMatrix& matrix() const noexcept { return b_; }

 private:
  DenseMatrix b_;
};

/// Multiresolution modularity of a graph, B = A - gamma k k^T / 2m, kept as a
/// sparse adjacency plus a rank-one null term. Holds a reference to the graph,
/// which must outlive the problem.
class ModularityProblem {
 public:
  ModularityProblem(const Graph& g, double gamma);
  ModularityProblem(Graph&&, double) = delete;

  std::size_t size() const noexcept { return graph_->num_nodes(); }
  const Graph& graph() const noexcept { return *graph_; }
  double gamma() const noexcept { return gamma_; }

  /// Dense equivalent (same objective).
  QualityProblem to_dense() const { return QualityProblem::from_graph(*graph_, gamma_); }

 private:
  const Graph* graph_;
  double gamma_;
};

/// Unnormalized Q: diagonal terms included, no 1/2m factor. Throws
/// DomainError on a size mismatch.
double modularity_score(const QualityProblem& problem, const Partition& p);
double modularity_score(const ModularityProblem& problem, const Partition& p);

/// Q after every phase of a louvain_once call (node moves, then aggregation),
/// recomputed from scratch on the original problem.
struct LouvainTrace {
  std::vector<double> phase_scores;
};

/// One Louvain run with weighted random moves. Phase one visits nodes in a
/// fresh random order per sweep; each node moves to a target drawn with
/// probability proportional to the gain among the strictly improving targets
/// (existing clusters and a new singleton cluster). Phase two aggregates
/// clusters into supernodes. Starts from `init` when given, else singletons.
Partition louvain_once(const QualityProblem& problem, std::uint64_t seed,
                       const Partition* init = nullptr, LouvainTrace* trace = nullptr);
/// Same for graph modularity; targets are restricted to the node's
/// neighbouring clusters plus a new singleton cluster.
Partition louvain_once(const ModularityProblem& problem, std::uint64_t seed,
                       const Partition* init = nullptr, LouvainTrace* trace = nullptr);

/// Restarts louvain_once from its own output until Q improves by at most 1e-10.
Partition iterated_louvain(const QualityProblem& problem, std::uint64_t seed);
Partition iterated_louvain(const ModularityProblem& problem, std::uint64_t seed);

}  // namespace hiercons
