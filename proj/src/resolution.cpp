#include "hiercons/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hiercons/modularity.hpp"
#include "hiercons/parallel.hpp"
#include "hiercons/random.hpp"
#include "hiercons/stats.hpp"

namespace hiercons {

namespace {

struct PairRatio {
  double gamma;
  double a;
  double p;
};

std::vector<PairRatio> pair_ratios(const Graph& g) {
  const double two_m = g.total_weight();
  if (!(two_m > 0.0)) throw DomainError("graph has no weight");
  std::vector<PairRatio> out;
  out.reserve(g.edges().size());
  const auto k = g.strengths();
  for (const auto& e : g.edges()) {
    if (e.i == e.j || !(e.w > 0.0)) continue;
    const double kk = k[e.i] * k[e.j];
    out.push_back({e.w * two_m / kk, e.w, kk / two_m});
  }
  return out;
}

}  // namespace

double gamma_max(const Graph& g) {
  const auto ratios = pair_ratios(g);
  if (ratios.empty()) throw DomainError("gamma_max: no node pair with positive A_ij and P_ij");
  double best = 0.0;
  for (const auto& r : ratios) best = std::max(best, r.gamma);
  return best;
}

EventProfile::EventProfile(const Graph& g) {
  auto ratios = pair_ratios(g);
  if (ratios.empty()) throw DomainError("event profile: no node pair with positive A_ij and P_ij");
  std::sort(ratios.begin(), ratios.end(), [](const PairRatio& x, const PairRatio& y) { return x.gamma < y.gamma; });
  for (const auto& r : ratios) {
    if (events_.empty() || events_.back().gamma != r.gamma) events_.push_back({r.gamma, 0, 0.0, 0.0});
    auto& ev = events_.back();
    ev.multiplicity += 2;  // ordered pairs (i, j) and (j, i)
    ev.a_sum += 2.0 * r.a;
    ev.p_sum += 2.0 * r.p;
  }

  // Null weight on pairs with A_ij = 0: all off-diagonal P minus the edge pairs.
  const double two_m = g.total_weight();
  CompensatedSum p_offdiag;
  p_offdiag.add(two_m);
  for (double k : g.strengths()) p_offdiag.add(-k * k / two_m);
  for (const auto& ev : events_) p_offdiag.add(-ev.p_sum);
  const double p_zero = std::max(0.0, p_offdiag.value());

  const auto n_ev = events_.size();
  a_neg_.assign(n_ev + 1, 0.0);
  p_neg_.assign(n_ev + 1, 0.0);
  a_pos_.assign(n_ev + 1, 0.0);
  p_pos_.assign(n_ev + 1, 0.0);
  {
    CompensatedSum a, p;
    p.add(p_zero);
    a_neg_[0] = a.value();
    p_neg_[0] = p.value();
    for (std::size_t k = 0; k < n_ev; ++k) {
      a.add(events_[k].a_sum);
      p.add(events_[k].p_sum);
      a_neg_[k + 1] = a.value();
      p_neg_[k + 1] = p.value();
    }
  }
  {
    CompensatedSum a, p;
    for (std::size_t k = n_ev; k-- > 0;) {
      a.add(events_[k].a_sum);
      p.add(events_[k].p_sum);
      a_pos_[k] = a.value();
      p_pos_[k] = p.value();
    }
  }
  beta_at_event_.resize(n_ev);
  for (std::size_t k = 0; k < n_ev; ++k) beta_at_event_[k] = beta_in(k + 1, events_[k].gamma);
}

std::size_t EventProfile::interval_of(double gamma) const {
  const auto it = std::upper_bound(events_.begin(), events_.end(), gamma,
                                   [](double x, const ResolutionEvent& ev) { return x < ev.gamma; });
  return static_cast<std::size_t>(it - events_.begin());
}

double EventProfile::beta_in(std::size_t k, double gamma) const {
  const double neg = gamma * p_neg_[k] - a_neg_[k];
  const double pos = a_pos_[k] - gamma * p_pos_[k];
  const double total = neg + pos;
  if (!(total > 0.0)) return 0.0;
  return std::clamp(neg / total, 0.0, 1.0);
}

double EventProfile::beta(double gamma) const {
  if (gamma <= 0.0) return 0.0;
  const auto k = interval_of(gamma);
  if (k == events_.size()) return 1.0;
  return beta_in(k, gamma);
}

double EventProfile::gamma_of_beta(double beta) const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("gamma_of_beta: beta must lie in [0, 1]");
  if (beta == 0.0) return 0.0;
  if (beta >= beta_at_event_.back()) return events_.back().gamma;
  // First event whose beta is >= target; the target lies in the interval that ends there.
  const auto it = std::lower_bound(beta_at_event_.begin(), beta_at_event_.end(), beta);
  const auto k = static_cast<std::size_t>(it - beta_at_event_.begin());
  const double lo = k == 0 ? 0.0 : events_[k - 1].gamma;
  const double hi = events_[k].gamma;
  const double num = a_neg_[k] + beta * (a_pos_[k] - a_neg_[k]);
  const double den = p_neg_[k] + beta * (p_pos_[k] - p_neg_[k]);
  return std::clamp(num / den, lo, hi);
}

double trivial_crossing(const Graph& g, const Partition& p) {
  const double two_m = g.total_weight();
  double a_in = 0.0;
  for (const auto& e : g.edges()) {
    if (p[e.i] == p[e.j]) a_in += e.i == e.j ? e.w : 2.0 * e.w;
  }
  std::vector<double> strength(p.num_clusters(), 0.0);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) strength[p[i]] += g.strength(i);
  double p_in = 0.0;
  for (double s : strength) p_in += s * s / two_m;
  const double den = two_m - p_in;
  if (!(den > 1e-12 * two_m)) return std::numeric_limits<double>::infinity();
  return (two_m - a_in) / den;
}

double estimate_gamma_min(const Graph& g, std::uint64_t seed, const GammaMinOptions& options) {
  if (options.samples_per_iter == 0) throw DomainError("estimate_gamma_min: samples_per_iter must be >= 1");
  const double gmax = gamma_max(g);
  const double eps = options.epsilon > 0.0 ? options.epsilon : 1e-3 * gmax;
  const auto n = g.num_nodes();

  double best = std::numeric_limits<double>::infinity();
  double at = 1.0;
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    const ModularityProblem problem(g, at);
    std::vector<Partition> sample(options.samples_per_iter);
    parallel_for(sample.size(), options.workers, [&](std::size_t s) {
      sample[s] = iterated_louvain(problem, derive_seed(derive_seed(seed, iter), s));
    });
    const double trivial_q = modularity_score(problem, Partition::all_in_one(n));
    bool improved = false;
    for (const auto& p : sample) {
      if (p.is_trivial() || !(modularity_score(problem, p) > trivial_q)) continue;
      const double x = trivial_crossing(g, p);
      if (x < best) {
        best = x;
        improved = true;
      }
    }
    if (!improved) {
      if (std::isfinite(best)) return best;
      best = trivial_crossing(g, Partition::singletons(n));
      if (!std::isfinite(best)) throw DomainError("estimate_gamma_min: graph has no resolvable structure");
    }
    at = best - eps;
  }
  throw GammaMinError("estimate_gamma_min did not converge", best);
}

GammaStrategy parse_gamma_strategy(std::string_view name) {
  if (name == "event") return GammaStrategy::event;
  if (name == "linear") return GammaStrategy::linear;
  if (name == "exponential" || name == "log") return GammaStrategy::exponential;
  throw DomainError("unknown gamma sampling strategy '" + std::string(name) + "'");
}

std::string_view to_string(GammaStrategy s) {
  switch (s) {
    case GammaStrategy::event: return "event";
    case GammaStrategy::linear: return "linear";
    case GammaStrategy::exponential: return "exponential";
  }
  return "?";
}

std::vector<double> sample_gammas(const EventProfile& profile, GammaStrategy strategy, std::size_t count,
                                  double gamma_lo, double gamma_hi) {
  if (count < 2) throw DomainError("sample_gammas: count must be >= 2");
  if (!(gamma_lo < gamma_hi)) throw DomainError("sample_gammas: need gamma_min < gamma_max");
  std::vector<double> out(count);
  const double steps = static_cast<double>(count - 1);
  switch (strategy) {
    case GammaStrategy::linear:
      for (std::size_t t = 0; t < count; ++t) out[t] = gamma_lo + (gamma_hi - gamma_lo) * static_cast<double>(t) / steps;
      break;
    case GammaStrategy::exponential: {
      if (!(gamma_lo > 0.0)) {
        throw DomainError(
            "exponential sampling needs gamma_min > 0; pass a positive lower bound "
            "(for example the smallest event gamma / 1000)");
      }
      const double ratio = gamma_hi / gamma_lo;
      for (std::size_t t = 0; t < count; ++t) out[t] = gamma_lo * std::pow(ratio, static_cast<double>(t) / steps);
      break;
    }
    case GammaStrategy::event: {
      const double b_lo = profile.beta(gamma_lo);
      const double b_hi = profile.beta(gamma_hi);
      for (std::size_t t = 0; t < count; ++t) {
        const double b = b_lo + (b_hi - b_lo) * static_cast<double>(t) / steps;
        out[t] = std::clamp(profile.gamma_of_beta(std::min(b, 1.0)), gamma_lo, gamma_hi);
      }
      break;
    }
  }
  if (strategy != GammaStrategy::event) out.back() = gamma_hi;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sample_gammas(const Graph& g, GammaStrategy strategy, std::size_t count, double gamma_lo,
                                  double gamma_hi) {
  return sample_gammas(EventProfile(g), strategy, count, gamma_lo, gamma_hi);
}

}  // namespace hiercons
