#pragma once

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library beyond Partition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "hiercons/dense_matrix.hpp"
#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace oracle {

/// Calls `visit` with every set partition of {0..n-1} as restricted growth strings.
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> a(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t max_label) {
    if (i == n) {
      visit(a);
      return;
    }
    for (std::size_t c = 0; c <= max_label + 1; ++c) {
      a[i] = c;
      rec(i + 1, std::max(max_label, c));
    }
  };
  if (n == 0) {
    visit(a);
    return;
  }
  a[0] = 0;
  rec(1, 0);
}

/// sum_ij B_ij delta(g_i, g_j) straight from the definition.
inline double quality(const std::vector<std::vector<double>>& b, const std::vector<std::size_t>& g) {
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[i] == g[j]) q += b[i][j];
    }
  }
  return q;
}

/// Dense A - gamma k k^T / 2m from an edge list, self-loops on the diagonal.
inline std::vector<std::vector<double>> modularity_matrix(std::size_t n, const std::vector<hiercons::Edge>& edges,
                                                          double gamma) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.i][e.j] += e.w;
    if (e.i != e.j) a[e.j][e.i] += e.w;
  }
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] -= gamma * k[i] * k[j] / two_m;
  }
  return a;
}

inline double brute_force_max(const std::vector<std::vector<double>>& b) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_set_partition(b.size(), [&](const std::vector<std::size_t>& g) { best = std::max(best, quality(b, g)); });
  return best;
}

inline double entropy(const std::vector<std::size_t>& g) {
  std::vector<double> count(g.size() + 1, 0.0);
  for (auto c : g) count[c] += 1.0;
  double h = 0.0;
  for (double c : count) {
    if (c > 0) h -= c / g.size() * std::log(c / g.size());
  }
  return h;
}

/// Mutual information from joint frequencies, written independently of the library.
inline double mutual_information(const std::vector<std::size_t>& g, const std::vector<std::size_t>& h) {
  const double n = static_cast<double>(g.size());
  std::vector<std::vector<double>> joint(g.size(), std::vector<double>(g.size(), 0.0));
  std::vector<double> pg(g.size(), 0.0), ph(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    joint[g[i]][h[i]] += 1.0 / n;
    pg[g[i]] += 1.0 / n;
    ph[h[i]] += 1.0 / n;
  }
  double mi = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    for (std::size_t d = 0; d < g.size(); ++d) {
      if (joint[c][d] > 0) mi += joint[c][d] * std::log(joint[c][d] / (pg[c] * ph[d]));
    }
  }
  return mi;
}

/// Average of I(g, h o pi) over all n! node permutations pi.
inline double expected_mi_enumerated(const std::vector<std::size_t>& g, const std::vector<std::size_t>& h) {
  std::vector<std::size_t> perm(h.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double total = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> hp(h.size());
  do {
    for (std::size_t i = 0; i < h.size(); ++i) hp[i] = h[perm[i]];
    total += mutual_information(g, hp);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<double>(count);
}

/// Probability that two fixed distinct nodes share a cluster, by enumerating
/// every assignment of the labels in `g` to nodes.
inline double permutation_pair_prob_enumerated(const std::vector<std::size_t>& g) {
  std::vector<std::size_t> perm(g.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t together = 0, total = 0;
  do {
    together += g[perm[0]] == g[perm[1]] ? 1 : 0;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(together) / static_cast<double>(total);
}

inline std::vector<hiercons::Edge> two_triangles() {
  return {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}};
}

/// Random weighted graph on n nodes, each pair present with probability `density`.
inline std::vector<hiercons::Edge> random_edges(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<hiercons::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u(rng) < density) edges.push_back({i, j, 0.1 + u(rng)});
    }
  }
  if (edges.empty()) edges.push_back({0, 1, 1.0});
  return edges;
}

/// Random partition with between 1 and max_k labels.
inline hiercons::Partition random_partition(std::size_t n, std::size_t max_k, std::mt19937_64& rng) {
  const auto k = std::uniform_int_distribution<std::size_t>(1, max_k)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::vector<std::size_t> labels(n);
  for (auto& x : labels) x = pick(rng);
  return hiercons::Partition(labels);
}

/// Noisy two-block ensemble: blocks {0..9} and {10..19}; in each partition a
/// few random nodes are moved into the other block or split off, so that
/// within-block co-classification stays >= 0.8 and cross-block <= 0.2.
// Two blocks of 10. Every node is perturbed (moved across, split off, or put
// in a stray group) in l / 20 randomly chosen partitions, so within-block
// entries of C lie in [0.9, 0.95] and cross-block ones in [0, 0.1] for l = 100.
inline std::vector<hiercons::Partition> noisy_two_block(std::size_t l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> labels(l, std::vector<std::size_t>(20));
  for (auto& row : labels) {
    for (std::size_t i = 0; i < 20; ++i) row[i] = i < 10 ? 0 : 1;
  }
  std::vector<std::size_t> slots(l);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  std::uniform_int_distribution<int> action(0, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    std::shuffle(slots.begin(), slots.end(), rng);
    for (std::size_t k = 0; k < l / 20; ++k) {
      auto& row = labels[slots[k]];
      switch (action(rng)) {
        case 0: row[i] = 1 - row[i]; break;
        case 1: row[i] = 3 + i; break;
        default: row[i] = 2; break;
      }
    }
  }
  std::vector<hiercons::Partition> out;
  for (const auto& row : labels) out.emplace_back(row);
  return out;
}

inline hiercons::Partition two_blocks() {
  std::vector<std::size_t> labels(20);
  for (std::size_t i = 0; i < 20; ++i) labels[i] = i < 10 ? 0 : 1;
  return hiercons::Partition(labels);
}

}  // namespace oracle
