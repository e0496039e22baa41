#include "hiercons/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <unordered_set>

#include "hiercons/error.hpp"
#include "hiercons/random.hpp"

namespace hiercons {

void HierBenchmarkSpec::validate() const {
  if (n < 4) throw DomainError("benchmark needs n >= 4");
  double total = 0.0;
  for (const double x : p) {
    if (!(x >= 0.0)) throw DomainError("benchmark level fractions must be non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("benchmark level fractions must sum to 1");
  if (k_min < 1 || k_max < k_min) throw DomainError("benchmark needs 1 <= k_min <= k_max");
  if (!(child_mean > 0.0)) throw DomainError("benchmark child_mean must be positive");
  if (child_cutoff < 2) throw DomainError("benchmark child_cutoff must be >= 2");
  if (!(dirichlet_sigma > 0.0)) throw DomainError("benchmark dirichlet_sigma must be positive");
}

namespace {

constexpr std::size_t kMaxDraws = 1'000'000;

/// Inverse-CDF sampling from non-negative weights.
class CumulativeSampler {
 public:
  explicit CumulativeSampler(std::span<const double> weights) : cum_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cum_.begin());
  }
  double total() const { return cum_.empty() ? 0.0 : cum_.back(); }
  std::size_t operator()(Rng& rng) const {
    const double u = uniform01(rng) * total();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    return std::min(static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
  }

 private:
  std::vector<double> cum_;
};

struct SplitState {
  Rng rng;
  std::size_t draws = 0;
};

void count_draw(SplitState& s) {
  if (++s.draws > kMaxDraws) throw DomainError("benchmark hierarchy sampling exceeded the draw cap");
}

/// Child label per member of one community.
std::vector<std::size_t> split_community(std::size_t size, const HierBenchmarkSpec& spec, bool children_split,
                                         SplitState& s) {
  std::poisson_distribution<std::size_t> poisson(spec.child_mean);
  std::gamma_distribution<double> gamma(spec.dirichlet_sigma, 1.0);
  const std::size_t min_child = children_split ? 2 : 1;
  for (;;) {
    std::size_t c = 0;
    do {
      count_draw(s);
      c = poisson(s.rng);
    } while (c < spec.child_cutoff);
    std::vector<double> w(c);
    for (auto& x : w) x = gamma(s.rng);
    const CumulativeSampler pick(w);
    std::vector<std::size_t> label(size);
    std::vector<std::size_t> sizes(c, 0);
    for (auto& x : label) {
      x = pick(s.rng);
      ++sizes[x];
    }
    count_draw(s);
    std::size_t nonempty = 0;
    bool ok = true;
    for (const auto sz : sizes) {
      if (sz == 0) continue;
      ++nonempty;
      if (sz < min_child) ok = false;
    }
    if (ok && nonempty >= 2) return label;  // empty children vanish when relabelled
  }
}

}  // namespace

PlantedHierarchy sample_hierarchy(const HierBenchmarkSpec& spec) {
  spec.validate();
  SplitState s{Rng(derive_seed(spec.seed, 1)), 0};
  const auto n = spec.n;
  const auto top = split_community(n, spec, true, s);
  Partition level1(top);

  std::vector<std::size_t> fine(n, 0);
  std::size_t offset = 0;
  for (const auto& members : level1.members()) {
    const auto sub = split_community(members.size(), spec, false, s);
    for (std::size_t k = 0; k < members.size(); ++k) fine[members[k]] = offset + sub[k];
    offset += *std::max_element(sub.begin(), sub.end()) + 1;
  }
  PlantedHierarchy h{std::move(level1), Partition(fine)};
  if (!h.level2.refines(h.level1)) throw Error("internal: planted level 2 does not refine level 1");
  return h;
}

namespace {

std::vector<std::size_t> sample_degrees(const HierBenchmarkSpec& spec, Rng& rng) {
  std::vector<double> w;
  for (std::size_t k = spec.k_min; k <= spec.k_max; ++k) {
    w.push_back(std::pow(static_cast<double>(k), -spec.degree_exponent));
  }
  const CumulativeSampler pick(w);
  std::vector<std::size_t> k(spec.n);
  for (auto& x : k) x = spec.k_min + pick(rng);
  return k;
}

struct Block {
  std::vector<std::size_t> members;
  CumulativeSampler within;
};

std::vector<Block> blocks_of(const Partition& p, const std::vector<double>& k) {
  std::vector<Block> out;
  for (auto& members : p.members()) {
    std::vector<double> w(members.size());
    for (std::size_t t = 0; t < members.size(); ++t) w[t] = k[members[t]];
    out.push_back({std::move(members), CumulativeSampler(w)});
  }
  return out;
}

}  // namespace

BenchmarkNetwork generate_network_detailed(const HierBenchmarkSpec& spec, const PlantedHierarchy& h) {
  spec.validate();
  if (h.level1.size() != spec.n || h.level2.size() != spec.n) {
    throw DomainError("planted hierarchy does not match the benchmark size");
  }
  if (!h.level2.refines(h.level1)) throw DomainError("planted level 2 must refine level 1");
  Rng rng(derive_seed(spec.seed, 2));
  BenchmarkNetwork out;
  out.target_degrees = sample_degrees(spec, rng);
  const std::vector<double> k(out.target_degrees.begin(), out.target_degrees.end());
  const auto total_degree = std::accumulate(out.target_degrees.begin(), out.target_degrees.end(), std::size_t{0});
  const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(total_degree) / 2.0));

  std::vector<std::size_t> all(spec.n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<Block> level0;
  level0.push_back({all, CumulativeSampler(k)});
  const std::array<std::vector<Block>, 3> levels{std::move(level0), blocks_of(h.level1, k), blocks_of(h.level2, k)};
  std::array<CumulativeSampler, 3> block_pick{CumulativeSampler({}), CumulativeSampler({}), CumulativeSampler({})};
  for (std::size_t l = 0; l < 3; ++l) {
    std::vector<double> w;
    for (const auto& b : levels[l]) w.push_back(b.members.size() >= 2 ? b.within.total() : 0.0);
    block_pick[l] = CumulativeSampler(w);
    if (spec.p[l] > 0.0 && !(block_pick[l].total() > 0.0)) {
      throw DomainError("benchmark level " + std::to_string(l) + " has no block with two or more nodes");
    }
  }
  const CumulativeSampler level_pick(spec.p);

  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto l = level_pick(rng);
    ++out.level_edges[l];
    std::size_t i = 0, j = 0;
    for (std::size_t attempt = 0;; ++attempt) {
      const auto& block = levels[l][block_pick[l](rng)];
      do {
        i = block.members[block.within(rng)];
        j = block.members[block.within(rng)];
      } while (i == j);
      if (i > j) std::swap(i, j);
      const auto key = static_cast<std::uint64_t>(i) * spec.n + j;
      if (seen.insert(key).second || attempt >= 100) break;
    }
    edges.push_back({i, j, 1.0});
  }
  out.graph = Graph::from_edges(spec.n, edges);
  return out;
}

Graph generate_network(const HierBenchmarkSpec& spec, const PlantedHierarchy& h) {
  return generate_network_detailed(spec, h).graph;
}

}  // namespace hiercons
