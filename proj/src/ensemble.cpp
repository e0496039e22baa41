#include "hiercons/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiercons/error.hpp"
#include "hiercons/modularity.hpp"
#include "hiercons/parallel.hpp"
#include "hiercons/random.hpp"
#include "hiercons/stats.hpp"

namespace hiercons {

void PartitionEnsemble::validate() const {
  if (partitions.empty()) throw DomainError("ensemble is empty");
  const auto n = partitions.front().size();
  for (const auto& p : partitions) {
    if (p.size() != n) throw DomainError("ensemble partitions cover different node counts");
  }
  if (!gammas.empty() && gammas.size() != partitions.size()) {
    throw DomainError("ensemble has " + std::to_string(gammas.size()) + " gamma values for " +
                      std::to_string(partitions.size()) + " partitions");
  }
}

PartitionEnsemble PartitionEnsemble::restrict_to(std::span<const std::size_t> nodes) const {
  PartitionEnsemble out;
  out.gammas = gammas;
  out.partitions.reserve(partitions.size());
  for (const auto& p : partitions) out.partitions.push_back(p.restrict_to(nodes));
  return out;
}

PartitionEnsemble generate_ensemble(const Graph& g, std::span<const double> gammas, std::uint64_t seed,
                                    std::size_t workers) {
  if (gammas.empty()) throw DomainError("generate_ensemble: no gamma values");
  PartitionEnsemble e;
  e.gammas.assign(gammas.begin(), gammas.end());
  e.partitions.resize(gammas.size());
  parallel_for(gammas.size(), workers, [&](std::size_t t) {
    const ModularityProblem problem(g, gammas[t]);
    e.partitions[t] = iterated_louvain(problem, derive_seed(seed, t));
  });
  return e;
}

std::vector<std::uint32_t> coclassification_counts(const PartitionEnsemble& e) {
  e.validate();
  const auto n = e.num_nodes();
  std::vector<std::uint32_t> counts(n * n, 0);
  for (const auto& p : e.partitions) {
    for (const auto& members : p.members()) {
      for (const auto a : members) {
        auto* row = counts.data() + a * n;
        for (const auto b : members) ++row[b];
      }
    }
  }
  return counts;
}

DenseMatrix coclassification(const PartitionEnsemble& e) {
  const auto counts = coclassification_counts(e);
  const auto n = e.num_nodes();
  const double l = static_cast<double>(e.size());
  DenseMatrix c(n);
  auto data = c.data();
  for (std::size_t k = 0; k < counts.size(); ++k) data[k] = static_cast<double>(counts[k]) / l;
  return c;
}

bool is_binary(const DenseMatrix& c) {
  return std::all_of(c.data().begin(), c.data().end(), [](double x) { return x == 0.0 || x == 1.0; });
}

NullKind parse_null_kind(std::string_view name) {
  if (name == "permutation" || name == "perm") return NullKind::permutation;
  if (name == "local" || name == "local_permutation" || name == "lperm") return NullKind::local_permutation;
  throw DomainError("unknown null model '" + std::string(name) + "'");
}

double null_prob_permutation(const Partition& p) {
  const auto n = p.size();
  if (n < 2) throw DomainError("permutation null model needs n >= 2");
  const double nn = static_cast<double>(n);
  double s = 0.0;
  for (const auto size : p.cluster_sizes()) {
    const double c = static_cast<double>(size);
    s += c * (c - 1.0);
  }
  return s / (nn * (nn - 1.0));
}

double null_prob_local(const Partition& p, std::size_t i) {
  const auto n = p.size();
  if (n < 2) throw DomainError("local permutation null model needs n >= 2");
  return static_cast<double>(p.size_of_cluster_containing(i) - 1) / static_cast<double>(n - 1);
}

NullMoments::NullMoments(NullKind kind, std::size_t n, std::vector<double> mu, std::vector<double> sigma2,
                         std::vector<std::vector<double>> probabilities)
    : kind_(kind), n_(n), mu_(std::move(mu)), sigma2_(std::move(sigma2)), probs_(std::move(probabilities)) {}

double NullMoments::mu(std::size_t i, std::size_t j) const noexcept {
  return i == j ? 1.0 : mu_[row_of(i)];
}

double NullMoments::sigma2(std::size_t i, std::size_t j) const noexcept {
  return i == j ? 0.0 : sigma2_[row_of(i)];
}

std::span<const double> NullMoments::probabilities(std::size_t i, std::size_t /*j*/) const noexcept {
  return probs_[row_of(i)];
}

DenseMatrix NullMoments::mu_matrix() const {
  DenseMatrix m(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = mu(i, j);
  }
  return m;
}

DenseMatrix NullMoments::sigma2_matrix() const {
  DenseMatrix m(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = sigma2(i, j);
  }
  return m;
}

namespace {

NullMoments moments_of(const PartitionEnsemble& e, NullKind kind) {
  e.validate();
  const auto n = e.num_nodes();
  const auto l = e.size();
  const std::size_t rows = kind == NullKind::permutation ? 1 : n;
  std::vector<std::vector<double>> probs(rows, std::vector<double>(l, 0.0));
  if (n >= 2) {
    for (std::size_t t = 0; t < l; ++t) {
      const auto& p = e.partitions[t];
      if (kind == NullKind::permutation) {
        probs[0][t] = null_prob_permutation(p);
      } else {
        for (std::size_t i = 0; i < n; ++i) probs[i][t] = null_prob_local(p, i);
      }
    }
  }
  std::vector<double> mu(rows), sigma2(rows);
  const double ll = static_cast<double>(l);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0, v = 0.0;
    for (const double x : probs[r]) {
      s += x;
      v += x - x * x;
    }
    mu[r] = s / ll;
    sigma2[r] = std::max(0.0, v / (ll * ll));
  }
  return NullMoments(kind, n, std::move(mu), std::move(sigma2), std::move(probs));
}

}  // namespace

NullMoments null_moments(const PartitionEnsemble& e, NullKind kind) { return moments_of(e, kind); }

NullMoments null_moments(const PartitionEnsemble& e, NullKind kind, std::span<const std::size_t> subset) {
  return moments_of(e.restrict_to(subset), kind);
}

CoclassStats coclass_stats(const PartitionEnsemble& e, NullKind kind) {
  return CoclassStats{coclassification(e), null_moments(e, kind)};
}

double significance_threshold(double mu, double sigma2, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  if (sigma2 < 0.0) throw DomainError("negative variance");
  if (sigma2 == 0.0) return std::clamp(mu, 0.0, 1.0);
  return std::clamp(mu + normal_quantile(alpha) * std::sqrt(sigma2), 0.0, 1.0);
}

double poisson_binomial_quantile(std::span<const double> probabilities, double alpha, std::size_t trials,
                                 std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  if (trials == 0) throw DomainError("montecarlo threshold needs at least one trial");
  if (probabilities.empty()) throw DomainError("montecarlo threshold needs at least one partition");
  Rng rng(seed);
  std::vector<std::size_t> hits(trials);
  for (auto& h : hits) {
    std::size_t s = 0;
    for (const double p : probabilities) s += uniform01(rng) < p ? 1 : 0;
    h = s;
  }
  std::sort(hits.begin(), hits.end());
  auto rank = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(trials)));
  rank = std::clamp<std::size_t>(rank, 1, trials);
  return static_cast<double>(hits[rank - 1]) / static_cast<double>(probabilities.size());
}

namespace {

DenseMatrix null_matrix_from(const NullMoments& m, double alpha, const SignificanceMethod& method) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  const auto n = m.size();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i == 0 ? 1 : 0;  // any j != i; the local model ignores it
    if (n < 2) break;
    if (method.kind == SignificanceMethod::Kind::normal) {
      q[i] = significance_threshold(m.mu(i, j), m.sigma2(i, j), alpha);
    } else {
      q[i] = poisson_binomial_quantile(m.probabilities(i, j), alpha, method.trials, derive_seed(method.seed, i));
    }
  }
  DenseMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = p.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = std::min(q[i], q[j]);
    row[i] = 1.0;
  }
  return p;
}

}  // namespace

DenseMatrix consensus_null_matrix(const PartitionEnsemble& e, double alpha, const SignificanceMethod& method) {
  return null_matrix_from(null_moments(e, NullKind::local_permutation), alpha, method);
}

DenseMatrix consensus_null_matrix(const PartitionEnsemble& e, double alpha, std::span<const std::size_t> subset,
                                  const SignificanceMethod& method) {
  return null_matrix_from(null_moments(e, NullKind::local_permutation, subset), alpha, method);
}

}  // namespace hiercons
