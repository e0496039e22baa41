#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hiercons/dense_matrix.hpp"
#include "hiercons/ensemble.hpp"
#include "hiercons/error.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace hiercons {

struct ConsensusOptions {
  std::size_t max_iter = 50;
  std::size_t workers = 0;  // 0 = all cores
  SignificanceMethod method = SignificanceMethod::normal();
};

/// An iterative consensus procedure hit its cap; carries its last partition.
class ConsensusIterationError : public IterationError {
 public:
  ConsensusIterationError(const std::string& what, Partition last)
      : IterationError(what), last_(std::move(last)) {}
  const Partition& last_partition() const noexcept { return last_; }

 private:
  Partition last_;
};

/// Consensus partition by iterated consensus modularity: repeatedly cluster
/// B = C - P(alpha) with an ensemble of l iterated Louvain runs and rebuild C
/// from the new ensemble, until C is binary. C is never thresholded.
Partition consensus_partition(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                              const ConsensusOptions& options = {});
/// Same on the ensemble restricted to `subset`; the result is indexed by
/// position in `subset`.
Partition consensus_partition(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                              std::span<const std::size_t> subset, const ConsensusOptions& options = {});

/// Clusters a weighted graph; used by the thresholded-consensus baseline.
using Clusterer = std::function<Partition(const Graph& g, std::uint64_t seed)>;

/// iterated_louvain on graph modularity at resolution `gamma`. Graphs without
/// edges yield the all-singleton partition.
Clusterer modularity_clusterer(double gamma = 1.0);

/// Thresholded-consensus baseline: zero every C_ij < tau, cluster the result
/// as a weighted graph l times, rebuild C, and repeat until all partitions of
/// the ensemble agree. Throws ConsensusIterationError after `max_iter` rounds.
Partition lf_consensus(const PartitionEnsemble& e, double tau, const Clusterer& clusterer, std::size_t max_iter,
                       std::uint64_t seed, std::size_t workers = 0);

struct TreeNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  std::vector<std::size_t> members;  // sorted node ids
  double strength = 1.0;
};

/// Hierarchy of clusters. Node 0 is the root (all nodes); children of a node
/// partition its members.
class ConsensusTree {
 public:
  ConsensusTree() = default;
  ConsensusTree(std::size_t num_items, std::vector<TreeNode> nodes);

  std::size_t num_items() const noexcept { return n_; }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  const TreeNode& root() const { return nodes_.front(); }

  std::size_t num_leaves() const;
  /// Edges on the longest root-to-leaf path.
  std::size_t depth() const;
  Partition leaf_partition() const;
  /// Root's children (the root itself when it has none).
  Partition coarse_partition() const;

  /// Throws DomainError if parent/child links are inconsistent or some
  /// node's members differ from the disjoint union of its children's.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<TreeNode> nodes_;
};

/// Cluster strength: a scalar score of a member set given the co-classification matrix.
using StrengthFunction = std::function<double(std::span<const std::size_t> members, const DenseMatrix& c)>;

/// Mean of C_ij over member pairs i != j; 1 for singletons.
double mean_coclassification(std::span<const std::size_t> members, const DenseMatrix& c);

struct HierarchyOptions {
  ConsensusOptions consensus;
  StrengthFunction strength = mean_coclassification;
};

/// Hierarchical consensus: starting from the root, split every cluster with
/// consensus_partition on the ensemble restricted to it (null moments
/// recomputed within the cluster). A cluster is a leaf when it is a
/// singleton, when no input partition separates any of its members, or when
/// the consensus partition keeps it whole. Clusters are processed depth
/// first by smallest member id, each with a seed derived from its members.
ConsensusTree hierarchical_consensus(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                                     const HierarchyOptions& options = {});

/// Partition obtained by merging every cluster that splits at a strength
/// greater than `threshold`. The root is always split, so a threshold below
/// every strength gives the coarse partition and one above every strength
/// gives the leaf partition.
Partition cut_tree(const ConsensusTree& t, double threshold);

struct TreeCut {
  double threshold;  // -infinity for the coarsest cut
  Partition partition;
};

/// Distinct cuts ordered from coarsest to finest; each refines the previous.
std::vector<TreeCut> all_cuts(const ConsensusTree& t);

}  // namespace hiercons
