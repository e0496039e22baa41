#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hiercons/dense_matrix.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace hiercons {

/// Ordered partitions of one node set, optionally tagged with the resolution
/// each was generated at.
struct PartitionEnsemble {
  std::vector<Partition> partitions;
  std::vector<double> gammas;  // empty, or one per partition

  std::size_t size() const noexcept { return partitions.size(); }
  std::size_t num_nodes() const noexcept { return partitions.empty() ? 0 : partitions.front().size(); }

  /// Throws DomainError unless l >= 1, all partitions share n and gammas match.
  void validate() const;

  /// Every partition restricted to `nodes`; cluster sizes are recomputed
  /// within the subset.
  PartitionEnsemble restrict_to(std::span<const std::size_t> nodes) const;
};

/// One partition per gamma, each from iterated_louvain on A - gamma P with
/// seed derive_seed(seed, t). Output order follows `gammas`; the result does
/// not depend on `workers` (0 = all cores).
PartitionEnsemble generate_ensemble(const Graph& g, std::span<const double> gammas, std::uint64_t seed,
                                    std::size_t workers = 0);

/// Pair co-occurrence counts, i.e. G G^T for the node-cluster indicator matrix
/// G of the whole ensemble. Row-major n x n.
std::vector<std::uint32_t> coclassification_counts(const PartitionEnsemble& e);

/// C_ij = (1/l) sum_t delta(g_i(t), g_j(t)), built from integer counts and a
/// single division, so entries are exact multiples of 1/l.
DenseMatrix coclassification(const PartitionEnsemble& e);

/// True when every entry is exactly 0 or 1 (all partitions identical).
bool is_binary(const DenseMatrix& c);

enum class NullKind { permutation, local_permutation };
NullKind parse_null_kind(std::string_view name);

/// Probability that two distinct nodes share a cluster when node labels are
/// shuffled with cluster sizes fixed. Throws DomainError for n < 2.
double null_prob_permutation(const Partition& p);

/// Probability that a random node j != i lands in i's cluster with i fixed:
/// (|cluster of i| - 1) / (n - 1). Throws DomainError for n < 2.
double null_prob_local(const Partition& p, std::size_t i);

/// Mean and variance of the null co-classification C0_ij, a rescaled
/// Poisson-binomial variable: mu = (1/l) sum_t p_t, sigma2 = (1/l^2) sum_t p_t (1 - p_t).
///
/// Under the permutation model the moments are the same for every pair. Under
/// the local permutation model they depend only on the first index, so the
/// (i, j) and (j, i) orientations differ in general.
class NullMoments {
 public:
  NullMoments(NullKind kind, std::size_t n, std::vector<double> mu, std::vector<double> sigma2,
              std::vector<std::vector<double>> probabilities);

  NullKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }
  double mu(std::size_t i, std::size_t j) const noexcept;
  double sigma2(std::size_t i, std::size_t j) const noexcept;

  /// Per-partition success probabilities p_ij(t) for orientation (i, j).
  std::span<const double> probabilities(std::size_t i, std::size_t j) const noexcept;

  DenseMatrix mu_matrix() const;
  DenseMatrix sigma2_matrix() const;

 private:
  std::size_t row_of(std::size_t i) const noexcept { return kind_ == NullKind::permutation ? 0 : i; }

  NullKind kind_;
  std::size_t n_;
  std::vector<double> mu_;
  std::vector<double> sigma2_;
  std::vector<std::vector<double>> probs_;
};

NullMoments null_moments(const PartitionEnsemble& e, NullKind kind);
/// Moments of the ensemble restricted to `subset`.
NullMoments null_moments(const PartitionEnsemble& e, NullKind kind, std::span<const std::size_t> subset);

/// Co-classification matrix together with its null moments.
struct CoclassStats {
  DenseMatrix c;
  NullMoments moments;
};

CoclassStats coclass_stats(const PartitionEnsemble& e, NullKind kind);

struct SignificanceMethod {
  enum class Kind { normal, montecarlo };
  Kind kind = Kind::normal;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;

  static SignificanceMethod normal() { return {}; }
  static SignificanceMethod montecarlo(std::size_t trials, std::uint64_t seed) {
    return {Kind::montecarlo, trials, seed};
  }
};

/// p with Pr(C0 <= p) = alpha under the normal approximation N(mu, sigma2),
/// clamped to [0, 1]. Throws DomainError for sigma2 < 0 or alpha outside (0, 1).
double significance_threshold(double mu, double sigma2, double alpha);

/// Empirical alpha-quantile (smallest x with F(x) >= alpha) of the mean of
/// independent Bernoulli(p_t) trials, from `trials` simulated draws.
double poisson_binomial_quantile(std::span<const double> probabilities, double alpha, std::size_t trials,
                                 std::uint64_t seed);

/// Significance-based null matrix for consensus modularity under the local
/// permutation model: P_ij is the p at which the larger of Pr(C0_ij <= p) and
/// Pr(C0_ji <= p) reaches alpha, i.e. the smaller of the two orientation
/// quantiles. Symmetric, with unit diagonal.
DenseMatrix consensus_null_matrix(const PartitionEnsemble& e, double alpha,
                                  const SignificanceMethod& method = SignificanceMethod::normal());
DenseMatrix consensus_null_matrix(const PartitionEnsemble& e, double alpha, std::span<const std::size_t> subset,
                                  const SignificanceMethod& method = SignificanceMethod::normal());

}  // namespace hiercons
