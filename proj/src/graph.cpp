#include "hiercons/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "hiercons/error.hpp"

namespace hiercons {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n) throw DomainError("edge endpoint out of range");
    if (!(e.w >= 0.0) || !std::isfinite(e.w)) throw DomainError("edge weights must be finite and non-negative");
    canon.push_back(e.i <= e.j ? e : Edge{e.j, e.i, e.w});
  }
  std::sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<Edge> merged;
  merged.reserve(canon.size());
  for (const auto& e : canon) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j) {
      merged.back().w += e.w;
    } else {
      merged.push_back(e);
    }
  }

  Graph g;
  g.edges_ = std::move(merged);
  g.strengths_.assign(n, 0.0);
  g.self_loops_.assign(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : g.edges_) {
    if (e.i == e.j) {
      g.self_loops_[e.i] += e.w;
      g.strengths_[e.i] += e.w;
    } else {
      g.strengths_[e.i] += e.w;
      g.strengths_[e.j] += e.w;
      ++degree[e.i];
      ++degree[e.j];
    }
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adj_.resize(g.offsets_[n]);
  g.adj_w_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (i, j): every row receives its lower neighbours (as
  // the j side) before its upper ones (as the i side), each ascending.
  for (const auto& e : g.edges_) {
    if (e.i == e.j) continue;
    g.adj_[fill[e.i]] = e.j;
    g.adj_w_[fill[e.i]++] = e.w;
    g.adj_[fill[e.j]] = e.i;
    g.adj_w_[fill[e.j]++] = e.w;
  }
  g.total_weight_ = 0.0;
  for (double k : g.strengths_) g.total_weight_ += k;
  return g;
}

double Graph::weight(std::size_t i, std::size_t j) const {
  if (i == j) return self_loops_[i];
  const auto nb = neighbors(i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return neighbor_weights(i)[static_cast<std::size_t>(it - nb.begin())];
}

DenseMatrix Graph::dense_adjacency() const {
  DenseMatrix a(num_nodes());
  for (const auto& e : edges_) {
    a(e.i, e.j) = e.w;
    a(e.j, e.i) = e.w;
  }
  return a;
}

DenseMatrix config_null_matrix(const Graph& g) {
  const double two_m = g.total_weight();
  if (!(two_m > 0.0)) throw DomainError("configuration null model needs total weight 2m > 0");
  const auto n = g.num_nodes();
  DenseMatrix p(n);
  const auto k = g.strengths();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = p.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = k[i] * k[j] / two_m;
  }
  return p;
}

namespace {

std::optional<unsigned long long> as_index(const std::string& s) {
  unsigned long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

struct RawArc {
  std::string src, dst;
  double w;
  std::size_t line;
};

}  // namespace

EdgeListFile read_edge_list(std::istream& in, DirectedPolicy policy) {
  std::vector<RawArc> arcs;
  std::vector<std::string> first_seen;
  std::unordered_map<std::string, bool> seen;
  auto note = [&](const std::string& id) {
    if (seen.emplace(id, true).second) first_seen.push_back(id);
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#' || tok[0][0] == '%') continue;
    if (tok.size() > 3) throw ParseError("expected `src dst [weight]`", lineno);
    if (tok.size() == 1) {
      note(tok[0]);
      continue;
    }
    double w = 1.0;
    if (tok.size() == 3) {
      const char* b = tok[2].data();
      const char* e = b + tok[2].size();
      const auto [ptr, ec] = std::from_chars(b, e, w);
      if (ec != std::errc() || ptr != e || !std::isfinite(w)) throw ParseError("bad weight '" + tok[2] + "'", lineno);
      if (w < 0.0) throw DomainError("line " + std::to_string(lineno) + ": negative weight");
    }
    note(tok[0]);
    note(tok[1]);
    arcs.push_back({tok[0], tok[1], w, lineno});
  }
  if (arcs.empty()) throw ParseError("no edges");

  // Internal id assignment.
  bool numeric = std::all_of(first_seen.begin(), first_seen.end(),
                             [](const std::string& s) { return as_index(s).has_value(); });
  std::vector<std::string> order = first_seen;
  if (numeric) {
    std::sort(order.begin(), order.end(), [](const std::string& a, const std::string& b) {
      return *as_index(a) < *as_index(b);
    });
    // "01" and "1" name the same node numerically; refuse the ambiguity.
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (*as_index(order[k]) == *as_index(order[k - 1])) {
        throw ParseError("node ids '" + order[k - 1] + "' and '" + order[k] + "' are numerically equal");
      }
    }
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < order.size(); ++k) index.emplace(order[k], k);
  const std::size_t n = order.size();

  // Sum repeated arcs per orientation first.
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  for (const auto& a : arcs) directed[{index.at(a.src), index.at(a.dst)}] += a.w;

  std::vector<Edge> edges;
  edges.reserve(directed.size());
  for (const auto& [key, w] : directed) {
    const auto [i, j] = key;
    if (i == j) {
      edges.push_back({i, i, w});
      continue;
    }
    const auto rev = directed.find({j, i});
    if (policy == DirectedPolicy::reject) {
      if (rev != directed.end()) {
        if (rev->second != w) {
          throw DomainError("asymmetric weights between '" + order[i] + "' and '" + order[j] +
                            "' (directed input rejected)");
        }
        if (i > j) continue;  // already emitted from the (j, i) side
      }
      edges.push_back({i, j, w});
    } else {
      edges.push_back({i, j, w});  // from_edges sums both orientations
    }
  }
  return EdgeListFile{Graph::from_edges(n, edges), std::move(order)};
}

EdgeListFile load_edge_list(const std::filesystem::path& path, DirectedPolicy policy) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_edge_list(in, policy);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  std::vector<bool> touched(g.num_nodes(), false);
  char buf[64];
  for (const auto& e : g.edges()) {
    touched[e.i] = touched[e.j] = true;
    const auto r = std::to_chars(buf, buf + sizeof buf, e.w);
    out << e.i << ' ' << e.j << ' ' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
  }
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (!touched[i]) out << i << '\n';
  }
}

}  // namespace hiercons
