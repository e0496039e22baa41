#include "hiercons/consensus.hpp"

#include <algorithm>
#include <string>

#include "hiercons/modularity.hpp"
#include "hiercons/parallel.hpp"
#include "hiercons/random.hpp"

namespace hiercons {

namespace {

PartitionEnsemble cluster_ensemble(const QualityProblem& problem, std::size_t l, std::uint64_t seed,
                                   std::size_t workers) {
  PartitionEnsemble next;
  next.partitions.resize(l);
  parallel_for(l, workers, [&](std::size_t t) { next.partitions[t] = iterated_louvain(problem, derive_seed(seed, t)); });
  return next;
}

}  // namespace

Partition consensus_partition(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                              const ConsensusOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  e.validate();
  const auto l = e.size();
  PartitionEnsemble current{e.partitions, {}};
  for (std::size_t iter = 0;; ++iter) {
    DenseMatrix c = coclassification(current);
    if (is_binary(c)) return current.partitions.front();
    if (iter == options.max_iter) {
      throw ConsensusIterationError("consensus did not converge after " + std::to_string(options.max_iter) +
                                        " iterations",
                                    current.partitions.front());
    }
    const DenseMatrix p = consensus_null_matrix(current, alpha, options.method);
    auto cd = c.data();
    const auto pd = p.data();
    for (std::size_t k = 0; k < cd.size(); ++k) cd[k] -= pd[k];
    const QualityProblem problem(std::move(c));
    current = cluster_ensemble(problem, l, derive_seed(seed, iter), options.workers);
  }
}

Partition consensus_partition(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                              std::span<const std::size_t> subset, const ConsensusOptions& options) {
  return consensus_partition(e.restrict_to(subset), alpha, seed, options);
}

Clusterer modularity_clusterer(double gamma) {
  return [gamma](const Graph& g, std::uint64_t seed) {
    if (!(g.total_weight() > 0.0)) return Partition::singletons(g.num_nodes());
    return iterated_louvain(ModularityProblem(g, gamma), seed);
  };
}

Partition lf_consensus(const PartitionEnsemble& e, double tau, const Clusterer& clusterer, std::size_t max_iter,
                       std::uint64_t seed, std::size_t workers) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("lf_consensus: tau must lie in [0, 1]");
  e.validate();
  const auto n = e.num_nodes();
  const auto l = e.size();
  PartitionEnsemble current{e.partitions, {}};
  for (std::size_t iter = 0;; ++iter) {
    const DenseMatrix c = coclassification(current);
    if (is_binary(c)) return current.partitions.front();
    if (iter == max_iter) {
      throw ConsensusIterationError("lf_consensus did not converge after " + std::to_string(max_iter) + " iterations",
                                    current.partitions.front());
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = c(i, j);
        if (w >= tau && w > 0.0) edges.push_back({i, j, w});
      }
    }
    const Graph g = Graph::from_edges(n, edges);
    const auto iter_seed = derive_seed(seed, iter);
    PartitionEnsemble next;
    next.partitions.resize(l);
    parallel_for(l, workers, [&](std::size_t t) { next.partitions[t] = clusterer(g, derive_seed(iter_seed, t)); });
    current = std::move(next);
  }
}

ConsensusTree::ConsensusTree(std::size_t num_items, std::vector<TreeNode> nodes)
    : n_(num_items), nodes_(std::move(nodes)) {
  validate();
}

std::size_t ConsensusTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& v) { return v.children.empty(); }));
}

std::size_t ConsensusTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  // Children always have larger ids than their parent.
  for (const auto& v : nodes_) {
    if (v.parent) d[v.id] = d[*v.parent] + 1;
    best = std::max(best, d[v.id]);
  }
  return best;
}

namespace {

Partition partition_from_clusters(std::size_t n, const std::vector<const TreeNode*>& clusters) {
  std::vector<std::size_t> labels(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto i : clusters[c]->members) labels[i] = c;
  }
  return Partition(labels);
}

}  // namespace

Partition ConsensusTree::leaf_partition() const {
  std::vector<const TreeNode*> leaves;
  for (const auto& v : nodes_) {
    if (v.children.empty()) leaves.push_back(&v);
  }
  return partition_from_clusters(n_, leaves);
}

Partition ConsensusTree::coarse_partition() const {
  std::vector<const TreeNode*> top;
  for (const auto c : root().children) top.push_back(&nodes_[c]);
  if (top.empty()) top.push_back(&root());
  return partition_from_clusters(n_, top);
}

void ConsensusTree::validate() const {
  if (nodes_.empty()) throw DomainError("consensus tree has no nodes");
  if (nodes_.front().parent) throw DomainError("consensus tree root has a parent");
  if (nodes_.front().members.size() != n_) throw DomainError("consensus tree root does not cover all nodes");
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& v = nodes_[id];
    if (v.id != id) throw DomainError("consensus tree node ids are not sequential");
    if (id > 0 && (!v.parent || *v.parent >= id)) throw DomainError("consensus tree node has an invalid parent");
    if (!std::is_sorted(v.members.begin(), v.members.end())) throw DomainError("tree node members are not sorted");
    if (v.children.empty()) continue;
    std::vector<std::size_t> joined;
    for (const auto c : v.children) {
      if (c >= nodes_.size() || nodes_[c].parent != id) throw DomainError("consensus tree child link is broken");
      joined.insert(joined.end(), nodes_[c].members.begin(), nodes_[c].members.end());
    }
    std::sort(joined.begin(), joined.end());
    if (joined != v.members) throw DomainError("children of tree node " + std::to_string(id) + " do not partition it");
  }
}

double mean_coclassification(std::span<const std::size_t> members, const DenseMatrix& c) {
  const auto s = members.size();
  if (s < 2) return 1.0;
  double total = 0.0;
  for (const auto i : members) {
    for (const auto j : members) {
      if (i != j) total += c(i, j);
    }
  }
  return total / (static_cast<double>(s) * static_cast<double>(s - 1));
}

ConsensusTree hierarchical_consensus(const PartitionEnsemble& e, double alpha, std::uint64_t seed,
                                     const HierarchyOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("significance level must lie in (0, 1)");
  e.validate();
  const auto n = e.num_nodes();
  const DenseMatrix c = coclassification(e);
  const auto& strength = options.strength ? options.strength : StrengthFunction(mean_coclassification);

  std::vector<TreeNode> nodes;
  auto add_node = [&](std::optional<std::size_t> parent, std::vector<std::size_t> members) {
    TreeNode v;
    v.id = nodes.size();
    v.parent = parent;
    v.strength = strength(members, c);
    v.members = std::move(members);
    nodes.push_back(std::move(v));
    return nodes.back().id;
  };

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::size_t> stack{add_node(std::nullopt, std::move(all))};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    const auto members = nodes[id].members;
    if (members.size() < 2) continue;
    const auto sub_seed = derive_seed(derive_seed(seed, members.front()), members.size());
    const Partition split = consensus_partition(e, alpha, sub_seed, members, options.consensus);
    if (split.is_trivial()) continue;
    std::vector<std::size_t> children;
    for (const auto& cluster : split.members()) {
      std::vector<std::size_t> child(cluster.size());
      for (std::size_t k = 0; k < cluster.size(); ++k) child[k] = members[cluster[k]];
      children.push_back(add_node(id, std::move(child)));
    }
    nodes[id].children = children;
    // Partition::members() orders clusters by smallest member, so pushing in
    // reverse visits the smallest-id child first.
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }
  return ConsensusTree(n, std::move(nodes));
}

Partition cut_tree(const ConsensusTree& t, double threshold) {
  std::vector<const TreeNode*> clusters;
  std::vector<std::size_t> stack;
  const auto& root = t.root();
  if (root.children.empty()) return t.coarse_partition();
  for (auto it = root.children.rbegin(); it != root.children.rend(); ++it) stack.push_back(*it);
  while (!stack.empty()) {
    const auto& v = t.node(stack.back());
    stack.pop_back();
    if (v.children.empty() || v.strength > threshold) {
      clusters.push_back(&v);
      continue;
    }
    for (auto it = v.children.rbegin(); it != v.children.rend(); ++it) stack.push_back(*it);
  }
  std::vector<std::size_t> labels(t.num_items(), 0);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (const auto i : clusters[k]->members) labels[i] = k;
  }
  return Partition(labels);
}

std::vector<TreeCut> all_cuts(const ConsensusTree& t) {
  std::vector<double> levels;
  for (const auto& v : t.nodes()) {
    if (v.parent && !v.children.empty()) levels.push_back(v.strength);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<TreeCut> cuts;
  cuts.push_back({-std::numeric_limits<double>::infinity(), cut_tree(t, -std::numeric_limits<double>::infinity())});
  for (const double x : levels) {
    auto p = cut_tree(t, x);
    if (p != cuts.back().partition) cuts.push_back({x, std::move(p)});
  }
  return cuts;
}

}  // namespace hiercons
