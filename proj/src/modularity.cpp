#include "hiercons/modularity.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>

#include "hiercons/error.hpp"
#include "hiercons/random.hpp"

namespace hiercons {

QualityProblem::QualityProblem(DenseMatrix b) : b_(std::move(b)) {
  const auto n = b_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (b_(i, j) + b_(j, i));
      b_(i, j) = s;
      b_(j, i) = s;
    }
  }
}

QualityProblem QualityProblem::from_graph(const Graph& g, double gamma) {
  DenseMatrix b = g.dense_adjacency();
  const DenseMatrix p = config_null_matrix(g);
  auto bd = b.data();
  const auto pd = p.data();
  for (std::size_t k = 0; k < bd.size(); ++k) bd[k] -= gamma * pd[k];
  return QualityProblem(std::move(b));
}

ModularityProblem::ModularityProblem(const Graph& g, double gamma) : graph_(&g), gamma_(gamma) {
  if (!(g.total_weight() > 0.0)) throw DomainError("modularity needs a graph with total weight 2m > 0");
  if (!std::isfinite(gamma)) throw DomainError("resolution parameter must be finite");
}

double modularity_score(const QualityProblem& problem, const Partition& p) {
  const auto n = problem.size();
  if (p.size() != n) throw DomainError("partition size does not match problem size");
  const auto& b = problem.matrix();
  const auto labels = p.labels();
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = b.row(i);
    const auto li = labels[i];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] == li) s += row[j];
    }
    q += s;
  }
  return q;
}

double modularity_score(const ModularityProblem& problem, const Partition& p) {
  const auto& g = problem.graph();
  if (p.size() != g.num_nodes()) throw DomainError("partition size does not match problem size");
  double internal = 0.0;
  for (const auto& e : g.edges()) {
    if (p[e.i] != p[e.j]) continue;
    internal += e.i == e.j ? e.w : 2.0 * e.w;
  }
  std::vector<double> strength(p.num_clusters(), 0.0);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) strength[p[i]] += g.strength(i);
  double null_term = 0.0;
  for (double s : strength) null_term += s * s;
  return internal - problem.gamma() * null_term / g.total_weight();
}

namespace {

// Picks index k with probability gains[k] / sum(gains).
std::size_t pick_weighted(std::span<const double> gains, double total, Rng& rng) {
  double u = uniform01(rng) * total;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    u -= gains[k];
    if (u < 0.0) return k;
  }
  return gains.size() - 1;
}

// Community bookkeeping shared by both level types.
struct Communities {
  std::vector<std::size_t> label;
  std::vector<std::size_t> size;
  std::vector<std::size_t> free_ids;

  explicit Communities(std::vector<std::size_t> labels) : label(std::move(labels)) {
    const auto n = label.size();
    size.assign(n, 0);
    for (auto c : label) ++size[c];
    for (std::size_t c = n; c-- > 0;) {
      if (size[c] == 0) free_ids.push_back(c);
    }
  }

  std::size_t take_free() {
    const auto c = free_ids.back();
    free_ids.pop_back();
    return c;
  }

  void move(std::size_t node, std::size_t to) {
    const auto from = label[node];
    --size[from];
    if (size[from] == 0) free_ids.push_back(from);
    ++size[to];
    label[node] = to;
  }

  // Renumbers labels to 0..k-1 by first appearance; returns k.
  std::size_t compact() {
    std::vector<std::size_t> remap(label.size(), SIZE_MAX);
    std::size_t next = 0;
    for (auto& c : label) {
      if (remap[c] == SIZE_MAX) remap[c] = next++;
      c = remap[c];
    }
    return next;
  }
};

// ---------------------------------------------------------------------------
// Dense levels

struct DenseLevel {
  std::size_t n = 0;
  std::span<const double> b;  // row-major n x n, points into `owned` or the caller's matrix
  std::vector<double> owned;
  double tol = 0.0;

  double at(std::size_t i, std::size_t j) const { return b[i * n + j]; }
  std::size_t size() const { return n; }
};

double gain_tolerance(std::span<const double> b, std::size_t n) {
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(b[i * n + j]);
    scale = std::max(scale, s);
  }
  return 1e-13 * std::max(scale, 1e-300);
}

DenseLevel dense_view(const DenseMatrix& m) {
  DenseLevel lvl;
  lvl.n = m.size();
  lvl.b = m.data();
  lvl.tol = gain_tolerance(lvl.b, lvl.n);
  return lvl;
}

// Phase one on a dense level. Returns the total gain.
double move_nodes(const DenseLevel& lvl, Communities& comm, Rng& rng, bool& moved) {
  const auto n = lvl.n;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> w(n, 0.0);
  std::vector<double> gains;
  std::vector<std::size_t> targets;
  gains.reserve(n + 1);
  targets.reserve(n + 1);
  double total_gain = 0.0;
  moved = false;

  for (bool any = true; any;) {
    any = false;
    shuffle(order.begin(), order.end(), rng);
    for (const auto i : order) {
      const auto row = lvl.b.subspan(i * n, n);
      const auto* lab = comm.label.data();
      for (std::size_t j = 0; j < n; ++j) w[lab[j]] += row[j];
      const auto a = comm.label[i];
      w[a] -= row[i];
      const double base = w[a];

      gains.clear();
      targets.clear();
      double total = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != a && comm.size[c] > 0) {
          const double g = 2.0 * (w[c] - base);
          if (g > lvl.tol) {
            gains.push_back(g);
            targets.push_back(c);
            total += g;
          }
        }
        w[c] = 0.0;
      }
      if (comm.size[a] > 1) {
        const double g = -2.0 * base;
        if (g > lvl.tol) {
          gains.push_back(g);
          targets.push_back(SIZE_MAX);
          total += g;
        }
      }
      if (targets.empty()) continue;
      const auto k = pick_weighted(gains, total, rng);
      const auto to = targets[k] == SIZE_MAX ? comm.take_free() : targets[k];
      comm.move(i, to);
      total_gain += gains[k];
      any = moved = true;
    }
  }
  return total_gain;
}

DenseLevel aggregate(const DenseLevel& lvl, const Communities& comm, std::size_t k) {
  DenseLevel out;
  out.n = k;
  out.owned.assign(k * k, 0.0);
  std::vector<double> tmp(k);
  for (std::size_t i = 0; i < lvl.n; ++i) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    const auto row = lvl.b.subspan(i * lvl.n, lvl.n);
    for (std::size_t j = 0; j < lvl.n; ++j) tmp[comm.label[j]] += row[j];
    double* dst = out.owned.data() + comm.label[i] * k;
    for (std::size_t c = 0; c < k; ++c) dst[c] += tmp[c];
  }
  out.b = out.owned;
  out.tol = lvl.tol;
  return out;
}

// ---------------------------------------------------------------------------
// Sparse levels: B_ij = A_ij - gamma k_i k_j / 2m

struct SparseLevel {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> adj;  // off-diagonal only
  std::vector<double> weight;
  std::vector<double> k;
  double gamma = 1.0;
  double two_m = 1.0;
  double tol = 0.0;

  std::size_t size() const { return k.size(); }
};

SparseLevel sparse_view(const ModularityProblem& problem) {
  const auto& g = problem.graph();
  const auto n = g.num_nodes();
  SparseLevel lvl;
  lvl.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) lvl.offsets[i + 1] = lvl.offsets[i] + g.neighbors(i).size();
  lvl.adj.reserve(lvl.offsets[n]);
  lvl.weight.reserve(lvl.offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = g.neighbors(i);
    const auto wt = g.neighbor_weights(i);
    lvl.adj.insert(lvl.adj.end(), nb.begin(), nb.end());
    lvl.weight.insert(lvl.weight.end(), wt.begin(), wt.end());
  }
  lvl.k.assign(g.strengths().begin(), g.strengths().end());
  lvl.gamma = problem.gamma();
  lvl.two_m = g.total_weight();
  const double kmax = *std::max_element(lvl.k.begin(), lvl.k.end());
  lvl.tol = 1e-13 * std::max(kmax * (1.0 + std::abs(lvl.gamma)), 1e-300);
  return lvl;
}

double move_nodes(const SparseLevel& lvl, Communities& comm, Rng& rng, bool& moved) {
  const auto n = lvl.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> w(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> touched;
  std::vector<double> gains;
  std::vector<std::size_t> targets;
  std::vector<double> ctot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) ctot[comm.label[i]] += lvl.k[i];
  double total_gain = 0.0;
  moved = false;

  for (bool any = true; any;) {
    any = false;
    shuffle(order.begin(), order.end(), rng);
    for (const auto i : order) {
      const auto a = comm.label[i];
      touched.clear();
      for (auto e = lvl.offsets[i]; e < lvl.offsets[i + 1]; ++e) {
        const auto c = comm.label[lvl.adj[e]];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        w[c] += lvl.weight[e];
      }
      const double ki = lvl.k[i];
      const double factor = lvl.gamma * ki / lvl.two_m;
      const double base = w[a] - factor * (ctot[a] - ki);

      gains.clear();
      targets.clear();
      double total = 0.0;
      for (const auto c : touched) {
        if (c != a) {
          const double g = 2.0 * ((w[c] - factor * ctot[c]) - base);
          if (g > lvl.tol) {
            gains.push_back(g);
            targets.push_back(c);
            total += g;
          }
        }
        w[c] = 0.0;
        seen[c] = 0;
      }
      if (comm.size[a] > 1) {
        const double g = -2.0 * base;
        if (g > lvl.tol) {
          gains.push_back(g);
          targets.push_back(SIZE_MAX);
          total += g;
        }
      }
      if (targets.empty()) continue;
      const auto k = pick_weighted(gains, total, rng);
      const auto to = targets[k] == SIZE_MAX ? comm.take_free() : targets[k];
      ctot[a] -= ki;
      ctot[to] += ki;
      comm.move(i, to);
      total_gain += gains[k];
      any = moved = true;
    }
  }
  return total_gain;
}

SparseLevel aggregate(const SparseLevel& lvl, const Communities& comm, std::size_t k) {
  SparseLevel out;
  out.gamma = lvl.gamma;
  out.two_m = lvl.two_m;
  out.tol = lvl.tol;
  out.k.assign(k, 0.0);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < lvl.size(); ++i) {
    members[comm.label[i]].push_back(i);
    out.k[comm.label[i]] += lvl.k[i];
  }
  std::vector<double> w(k, 0.0);
  std::vector<char> seen(k, 0);
  std::vector<std::size_t> touched;
  out.offsets.assign(k + 1, 0);
  for (std::size_t c = 0; c < k; ++c) {
    touched.clear();
    for (const auto i : members[c]) {
      for (auto e = lvl.offsets[i]; e < lvl.offsets[i + 1]; ++e) {
        const auto d = comm.label[lvl.adj[e]];
        if (d == c) continue;  // internal weight only matters for the score
        if (!seen[d]) {
          seen[d] = 1;
          touched.push_back(d);
        }
        w[d] += lvl.weight[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const auto d : touched) {
      out.adj.push_back(d);
      out.weight.push_back(w[d]);
      w[d] = 0.0;
      seen[d] = 0;
    }
    out.offsets[c + 1] = out.adj.size();
  }
  return out;
}

// ---------------------------------------------------------------------------

template <class Level, class Problem>
Partition run_louvain(const Level& level0, const Problem& problem, std::uint64_t seed,
                      const Partition* init, LouvainTrace* trace) {
  const auto n = level0.size();
  if (init != nullptr && init->size() != n) throw DomainError("initial partition size does not match problem size");
  Rng rng(seed);

  std::vector<std::size_t> node_of(n);  // original node -> current level node
  std::iota(node_of.begin(), node_of.end(), 0);
  std::vector<std::size_t> start(n);
  if (init != nullptr) {
    start.assign(init->labels().begin(), init->labels().end());
  } else {
    std::iota(start.begin(), start.end(), 0);
  }

  auto flatten = [&](const Communities& comm) {
    std::vector<std::size_t> labels(n);
    for (std::size_t v = 0; v < n; ++v) labels[v] = comm.label[node_of[v]];
    return Partition(labels);
  };

  if (trace != nullptr) trace->phase_scores.push_back(modularity_score(problem, Partition(start)));

  const Level* cur = &level0;
  std::optional<Level> owned;
  Communities comm(std::move(start));
  for (;;) {
    bool moved = false;
    move_nodes(*cur, comm, rng, moved);
    if (trace != nullptr) trace->phase_scores.push_back(modularity_score(problem, flatten(comm)));
    const auto k = comm.compact();
    for (auto& v : node_of) v = comm.label[v];
    if (k == cur->size()) break;
    Level next = aggregate(*cur, comm, k);
    owned = std::move(next);
    cur = &*owned;
    std::vector<std::size_t> ids(k);
    std::iota(ids.begin(), ids.end(), 0);
    comm = Communities(std::move(ids));
    if (trace != nullptr) trace->phase_scores.push_back(modularity_score(problem, flatten(comm)));
  }
  return Partition(node_of);
}

template <class Problem>
Partition iterate(const Problem& problem, std::uint64_t seed) {
  constexpr double kTolerance = 1e-10;
  Partition best = louvain_once(problem, derive_seed(seed, 0));
  for (std::uint64_t pass = 1;; ++pass) {
    const double before = modularity_score(problem, best);
    Partition next = louvain_once(problem, derive_seed(seed, pass), &best);
    const double after = modularity_score(problem, next);
    if (after > before) best = std::move(next);
    if (after - before <= kTolerance) break;
  }
  return best;
}

}  // namespace

Partition louvain_once(const QualityProblem& problem, std::uint64_t seed, const Partition* init,
                       LouvainTrace* trace) {
  if (problem.size() == 0) return Partition{};
  const auto lvl = dense_view(problem.matrix());
  return run_louvain(lvl, problem, seed, init, trace);
}

Partition louvain_once(const ModularityProblem& problem, std::uint64_t seed, const Partition* init,
                       LouvainTrace* trace) {
  const auto lvl = sparse_view(problem);
  return run_louvain(lvl, problem, seed, init, trace);
}

Partition iterated_louvain(const QualityProblem& problem, std::uint64_t seed) {
  if (problem.size() == 0) return Partition{};
  return iterate(problem, seed);
}

Partition iterated_louvain(const ModularityProblem& problem, std::uint64_t seed) {
  return iterate(problem, seed);
}

}  // namespace hiercons
