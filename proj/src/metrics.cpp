#include "hiercons/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hiercons/error.hpp"
#include "hiercons/random.hpp"

namespace hiercons {

ContingencyTable::ContingencyTable(const Partition& g, const Partition& h) : n_(g.size()) {
  if (g.size() != h.size()) throw DomainError("partitions cover different node counts");
  a_.assign(g.num_clusters(), 0);
  b_.assign(h.num_clusters(), 0);
  counts_.assign(a_.size() * b_.size(), 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ++a_[g[i]];
    ++b_[h[i]];
    ++counts_[g[i] * b_.size() + h[i]];
  }
}

double entropy(const Partition& p) {
  const double n = static_cast<double>(p.size());
  double h = 0.0;
  for (const auto s : p.cluster_sizes()) {
    const double q = static_cast<double>(s) / n;
    h -= q * std::log(q);
  }
  return h;
}

namespace {

double mi_of(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total());
  double mi = 0.0;
  for (std::size_t c = 0; c < t.rows(); ++c) {
    const double a = static_cast<double>(t.row_sums()[c]);
    for (std::size_t d = 0; d < t.cols(); ++d) {
      const auto ncd = t.count(c, d);
      if (ncd == 0) continue;
      const double x = static_cast<double>(ncd);
      mi += x / n * std::log(n * x / (a * static_cast<double>(t.col_sums()[d])));
    }
  }
  return std::max(0.0, mi);
}

double lfact(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

double mutual_information(const Partition& g, const Partition& h) { return mi_of(ContingencyTable(g, h)); }

double expected_mi(const Partition& g, const Partition& h) {
  const ContingencyTable t(g, h);
  const std::size_t n = t.total();
  const double nn = static_cast<double>(n);
  const double lf_n = lfact(n);
  double emi = 0.0;
  for (const auto a : t.row_sums()) {
    for (const auto b : t.col_sums()) {
      const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
      const std::size_t hi = std::min(a, b);
      const double fixed = lfact(a) + lfact(b) + lfact(n - a) + lfact(n - b) - lf_n;
      const double ab = static_cast<double>(a) * static_cast<double>(b);
      for (std::size_t k = lo; k <= hi; ++k) {
        const double x = static_cast<double>(k);
        const double log_p = fixed - lfact(k) - lfact(a - k) - lfact(b - k) - lfact(n + k - a - b);
        emi += x / nn * std::log(nn * x / ab) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double expected_mi_montecarlo(const Partition& g, const Partition& h, std::size_t trials, std::uint64_t seed) {
  if (g.size() != h.size()) throw DomainError("partitions cover different node counts");
  if (trials == 0) throw DomainError("expected_mi_montecarlo needs at least one trial");
  Rng rng(seed);
  std::vector<std::size_t> labels(h.labels().begin(), h.labels().end());
  double total = 0.0;
  for (std::size_t s = 0; s < trials; ++s) {
    shuffle(labels.begin(), labels.end(), rng);
    total += mutual_information(g, Partition(labels));
  }
  return total / static_cast<double>(trials);
}

double nmi_max(const Partition& g, const Partition& h) {
  const double hg = entropy(g);
  const double hh = entropy(h);
  const double top = std::max(hg, hh);
  if (top == 0.0) {
    if (g == h) return 1.0;
    throw DomainError("nmi_max is undefined for two distinct zero-entropy partitions");
  }
  return std::clamp(mutual_information(g, h) / top, 0.0, 1.0);
}

AmiResult ami_max_checked(const Partition& g, const Partition& h) {
  if (g.size() != h.size()) throw DomainError("partitions cover different node counts");
  if (g == h) return {1.0, false};
  // Fixed argument order makes the floating-point result exactly symmetric.
  const bool swap = std::lexicographical_compare(h.labels().begin(), h.labels().end(), g.labels().begin(),
                                                 g.labels().end());
  const Partition& x = swap ? h : g;
  const Partition& y = swap ? g : h;
  const double mi = mutual_information(x, y);
  const double emi = expected_mi(x, y);
  const double den = std::max(entropy(x), entropy(y)) - emi;
  if (std::abs(den) <= 1e-15) return {0.0, true};
  return {std::min(1.0, (mi - emi) / den), false};
}

double ami_max(const Partition& g, const Partition& h) { return ami_max_checked(g, h).value; }

}  // namespace hiercons
