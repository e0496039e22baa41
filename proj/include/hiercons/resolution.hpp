#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hiercons/error.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace hiercons {

/// Smallest gamma at which every off-diagonal A_ij - gamma P_ij is <= 0,
/// i.e. max over pairs of A_ij / P_ij. Throws DomainError without such pairs.
double gamma_max(const Graph& g);

/// One crossing value gamma = A_ij / P_ij shared by `multiplicity` ordered pairs.
struct ResolutionEvent {
  double gamma = 0.0;
  std::size_t multiplicity = 0;
  double a_sum = 0.0;  // sum of A_ij over those ordered pairs
  double p_sum = 0.0;  // sum of P_ij over those ordered pairs
};

/// Relative magnitude of negative (antiferromagnetic) pair interactions as a
/// function of gamma, and its inverse. Pairs with A_ij - gamma P_ij = 0 are
/// counted as negative, which makes beta right-continuous; pairs with
/// A_ij = 0 are negative for every gamma > 0.
///
/// Setup is O(E log E); each beta or gamma query is a binary search plus O(1).
class EventProfile {
 public:
  explicit EventProfile(const Graph& g);

  std::span<const ResolutionEvent> events() const noexcept { return events_; }
  double gamma_max() const noexcept { return events_.back().gamma; }

  /// 0 for gamma <= 0 and 1 for gamma >= gamma_max.
  double beta(double gamma) const;
  /// Inverse of beta on [0, gamma_max]. Throws DomainError for beta outside [0, 1].
  double gamma_of_beta(double beta) const;

 private:
  // Interval k covers [events_[k-1].gamma, events_[k].gamma) with events
  // 0..k-1 negative; interval 0 starts at 0.
  std::size_t interval_of(double gamma) const;
  double beta_in(std::size_t k, double gamma) const;

  std::vector<ResolutionEvent> events_;
  std::vector<double> a_neg_, p_neg_, a_pos_, p_pos_;  // per interval, size events_.size() + 1
  std::vector<double> beta_at_event_;                   // beta(events_[k].gamma)
};

struct GammaMinOptions {
  std::size_t samples_per_iter = 10;
  /// Step below the current estimate; <= 0 selects 1e-3 * gamma_max.
  double epsilon = 0.0;
  std::size_t max_iter = 100;
  std::size_t workers = 1;
};

class GammaMinError : public IterationError {
 public:
  GammaMinError(const std::string& what, double best) : IterationError(what), best_(best) {}
  double best_estimate() const noexcept { return best_; }

 private:
  double best_;
};

/// Gamma at which a sampled partition first beats the all-in-one partition:
/// both scores are linear in gamma, so this is a single linear crossing.
/// Returns +infinity for partitions equivalent to all-in-one.
double trivial_crossing(const Graph& g, const Partition& p);

/// Iterative estimate of the largest gamma at which the all-in-one partition
/// is optimal. Samples at gamma = 1, lowers the estimate to the smallest
/// crossing among sampled partitions that beat all-in-one, re-samples just
/// below it and stops when a sample contains no such partition. When the very
/// first sample is all-in-one, the all-singleton crossing seeds the estimate.
double estimate_gamma_min(const Graph& g, std::uint64_t seed, const GammaMinOptions& options = {});

enum class GammaStrategy { event, linear, exponential };

GammaStrategy parse_gamma_strategy(std::string_view name);
std::string_view to_string(GammaStrategy s);

/// `count` gamma values over [gamma_lo, gamma_hi], ascending. Event sampling
/// spaces beta evenly between beta(gamma_lo) and beta(gamma_hi).
std::vector<double> sample_gammas(const EventProfile& profile, GammaStrategy strategy, std::size_t count,
                                  double gamma_lo, double gamma_hi);
std::vector<double> sample_gammas(const Graph& g, GammaStrategy strategy, std::size_t count, double gamma_lo,
                                  double gamma_hi);

}  // namespace hiercons
