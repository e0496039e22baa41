#include <random>

#include "doctest.h"
#include "hiercons/error.hpp"
#include "hiercons/benchmark.hpp"
#include "hiercons/consensus.hpp"
#include "hiercons/metrics.hpp"
#include "hiercons/modularity.hpp"
#include "hiercons/resolution.hpp"
#include "oracles.hpp"

using namespace hiercons;

namespace {

PartitionEnsemble repeat(const Partition& p, std::size_t l) {
  return PartitionEnsemble{std::vector<Partition>(l, p), {}};
}

PartitionEnsemble noisy(std::uint64_t seed = 5) { return PartitionEnsemble{oracle::noisy_two_block(100, seed), {}}; }

/// Consensus objective evaluated from scratch: sum_ij (C_ij - P_ij) delta.
double qc(const PartitionEnsemble& e, double alpha, const Partition& g) {
  const auto c = coclassification(e);
  const auto p = consensus_null_matrix(e, alpha);
  std::vector<std::vector<double>> b(g.size(), std::vector<double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) b[i][j] = c(i, j) - p(i, j);
  return oracle::quality(b, std::vector<std::size_t>(g.labels().begin(), g.labels().end()));
}

/// Tree built by hand: node list given as (parent, members, strength).
ConsensusTree make_tree(std::size_t n, const std::vector<std::tuple<long, std::vector<std::size_t>, double>>& spec) {
  std::vector<TreeNode> nodes;
  for (std::size_t id = 0; id < spec.size(); ++id) {
    TreeNode v;
    v.id = id;
    const auto& [parent, members, strength] = spec[id];
    if (parent >= 0) {
      v.parent = static_cast<std::size_t>(parent);
      nodes[v.parent.value()].children.push_back(id);
    }
    v.members = members;
    v.strength = strength;
    nodes.push_back(v);
  }
  return ConsensusTree(n, std::move(nodes));
}

/// Random tree: split clusters recursively at random with random strengths.
ConsensusTree random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<TreeNode> nodes(1);
  nodes[0].members.resize(n);
  std::iota(nodes[0].members.begin(), nodes[0].members.end(), std::size_t{0});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nodes[0].strength = u(rng);
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const auto members = nodes[id].members;
    if (members.size() < 2 || (id > 0 && u(rng) < 0.3)) continue;
    const auto p = oracle::random_partition(members.size(), 3, rng);
    if (p.is_trivial()) continue;
    for (const auto& cluster : p.members()) {
      TreeNode c;
      c.id = nodes.size();
      c.parent = id;
      for (const auto k : cluster) c.members.push_back(members[k]);
      c.strength = std::round(u(rng) * 10) / 10;  // coarse grid, so ties occur
      nodes[id].children.push_back(c.id);
      nodes.push_back(c);
    }
  }
  return ConsensusTree(n, std::move(nodes));
}

}  // namespace

TEST_CASE("consensus of an already binary ensemble returns its partition") {
  const auto blocks = oracle::two_blocks();
  CHECK(consensus_partition(repeat(blocks, 7), 0.05, 1) == blocks);
  CHECK(consensus_partition(repeat(Partition::singletons(6), 4), 0.05, 1).is_singletons());
}

TEST_CASE("consensus on the noisy two-block ensemble") {
  const auto e = noisy();
  const auto c = coclassification(e);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 20; ++j) {
      if (i == j) continue;
      if ((i < 10) == (j < 10)) {
        CHECK(c(i, j) >= 0.8);
      } else {
        CHECK(c(i, j) <= 0.2);
      }
    }
  }
  // Candidate comparison: the two blocks beat every partition in the ensemble,
  // the trivial partitions and all single-node moves away from the blocks.
  const auto blocks = oracle::two_blocks();
  const double best = qc(e, 0.05, blocks);
  CHECK(best > qc(e, 0.05, Partition::all_in_one(20)));
  CHECK(best > qc(e, 0.05, Partition::singletons(20)));
  for (const auto& p : e.partitions) {
    if (p != blocks) CHECK(best > qc(e, 0.05, p));
  }
  for (std::size_t i = 0; i < 20; ++i) {
    std::vector<std::size_t> labels(blocks.labels().begin(), blocks.labels().end());
    for (const std::size_t target : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
      if (target == labels[i]) continue;
      auto moved = labels;
      moved[i] = target;
      CHECK(best > qc(e, 0.05, Partition(moved)));
    }
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(consensus_partition(e, 0.05, seed) == blocks);
}

TEST_CASE("consensus errors") {
  CHECK_THROWS_AS(consensus_partition(noisy(), 0.0, 1), DomainError);
  CHECK_THROWS_AS(consensus_partition(PartitionEnsemble{}, 0.05, 1), DomainError);
  ConsensusOptions capped;
  capped.max_iter = 0;
  try {
    consensus_partition(noisy(), 0.05, 1, capped);
    FAIL("expected the iteration cap to trigger");
  } catch (const ConsensusIterationError& err) {
    CHECK(err.last_partition().size() == 20);
  }
}

TEST_CASE("consensus does not depend on the worker count") {
  ConsensusOptions one, many;
  one.workers = 1;
  many.workers = 3;
  const PartitionEnsemble e{oracle::noisy_two_block(40, 9), {}};
  CHECK(consensus_partition(e, 0.1, 3, one) == consensus_partition(e, 0.1, 3, many));
}

TEST_CASE("LF baseline examples") {
  const auto cl = modularity_clusterer();
  const auto blocks = oracle::two_blocks();
  CHECK(lf_consensus(repeat(blocks, 5), 0.0, cl, 20, 1) == blocks);
  // Only (0,1) and (2,3) are always together; the 1-level set has components {0,1}, {2,3}, {4}.
  const PartitionEnsemble e{{Partition(std::vector<std::size_t>{0, 0, 1, 1, 1}),
                             Partition(std::vector<std::size_t>{0, 0, 1, 1, 2})},
                            {}};
  CHECK(lf_consensus(e, 1.0, cl, 20, 1) == Partition(std::vector<std::size_t>{0, 0, 1, 1, 2}));
  CHECK(lf_consensus(noisy(), 0.9, cl, 50, 1) == blocks);
  CHECK_THROWS_AS(lf_consensus(e, 1.5, cl, 20, 1), DomainError);
  CHECK_THROWS_AS(lf_consensus(noisy(), 0.9, cl, 0, 1), ConsensusIterationError);
}

TEST_CASE("hierarchical consensus on trivial ensembles") {
  const auto blocks = oracle::two_blocks();
  const auto t = hierarchical_consensus(repeat(blocks, 10), 0.05, 1);
  CHECK(t.nodes().size() == 3);
  CHECK(t.root().children.size() == 2);
  CHECK(t.num_leaves() == 2);
  CHECK(t.leaf_partition() == blocks);
  CHECK(t.coarse_partition() == blocks);
  CHECK(t.root().strength == doctest::Approx(90.0 / 190.0));
  CHECK(t.node(1).strength == 1.0);

  const auto s = hierarchical_consensus(repeat(Partition::singletons(6), 5), 0.05, 1);
  CHECK(s.num_leaves() == 6);
  CHECK(s.depth() == 1);
  CHECK(s.leaf_partition().is_singletons());

  const auto one = hierarchical_consensus(repeat(Partition::all_in_one(6), 5), 0.05, 1);
  CHECK(one.nodes().size() == 1);
  CHECK(one.coarse_partition().is_trivial());
}

TEST_CASE("hierarchical consensus uses a pluggable strength") {
  HierarchyOptions opts;
  opts.strength = [](std::span<const std::size_t> members, const DenseMatrix&) {
    return static_cast<double>(members.size());
  };
  const auto t = hierarchical_consensus(repeat(oracle::two_blocks(), 3), 0.05, 1, opts);
  CHECK(t.root().strength == 20.0);
  CHECK(t.node(1).strength == 10.0);
}

TEST_CASE("hierarchical consensus on a small benchmark") {
  HierBenchmarkSpec spec;
  spec.n = 200;
  spec.p = {0.1, 0.2, 0.7};
  spec.seed = 3;
  const auto h = sample_hierarchy(spec);
  const auto g = generate_network(spec, h);
  const auto gammas = sample_gammas(g, GammaStrategy::event, 60, estimate_gamma_min(g, 1), gamma_max(g));
  const auto e = generate_ensemble(g, gammas, 2);
  const auto t = hierarchical_consensus(e, 0.05, 7);
  CHECK_NOTHROW(t.validate());
  for (const auto& v : t.nodes()) {
    if (v.members.size() > 1) {
      CHECK(v.strength >= 0.0);
      CHECK(v.strength <= 1.0);
    }
  }
  // The best cut is at least as good as the coarsest one.
  const auto cuts = all_cuts(t);
  double best = -1.0;
  for (const auto& cut : cuts) best = std::max(best, ami_max(cut.partition, h.level1));
  CHECK(best >= ami_max(t.coarse_partition(), h.level1));
  CHECK(hierarchical_consensus(e, 0.05, 7).leaf_partition() == t.leaf_partition());
}

TEST_CASE("cut_tree and all_cuts on hand-built trees") {
  const auto pair = make_tree(4, {{-1, {0, 1, 2, 3}, 0.3}, {0, {0, 1}, 1.0}, {0, {2, 3}, 1.0}});
  const auto cuts = all_cuts(pair);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].partition == Partition(std::vector<std::size_t>{0, 0, 1, 1}));

  // root -> A{0..3} (0.6) -> {0,1}, {2,3}; root -> B{4..7} (0.6) -> {4,5}, {6,7}
  const auto twin = make_tree(8, {{-1, {0, 1, 2, 3, 4, 5, 6, 7}, 0.2},
                                  {0, {0, 1, 2, 3}, 0.6},
                                  {0, {4, 5, 6, 7}, 0.6},
                                  {1, {0, 1}, 1.0},
                                  {1, {2, 3}, 1.0},
                                  {2, {4, 5}, 1.0},
                                  {2, {6, 7}, 1.0}});
  const auto tc = all_cuts(twin);
  REQUIRE(tc.size() == 2);
  CHECK(tc[0].partition.num_clusters() == 2);
  CHECK(tc[1].partition.num_clusters() == 4);
  CHECK(tc[1].threshold == 0.6);
  CHECK(cut_tree(twin, 0.0) == twin.coarse_partition());
  CHECK(cut_tree(twin, 0.7) == twin.leaf_partition());
  CHECK(cut_tree(twin, 0.6) == twin.leaf_partition());
  CHECK(cut_tree(twin, 0.59) == twin.coarse_partition());

  std::vector<TreeNode> broken(1);
  broken[0].members = {0, 1};
  CHECK_THROWS_AS(ConsensusTree(3, broken), DomainError);
}

TEST_CASE("property: cuts over random trees form a refinement chain") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_tree(3 + trial % 30, rng);
    const auto cuts = all_cuts(t);
    REQUIRE(!cuts.empty());
    CHECK(cuts.front().partition == t.coarse_partition());
    CHECK(cuts.back().partition == t.leaf_partition());
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      CHECK(cuts[k].partition.refines(cuts[k - 1].partition));
      CHECK(cuts[k].partition != cuts[k - 1].partition);
      CHECK(cuts[k].threshold > cuts[k - 1].threshold);
    }
    for (const double x : {-1.0, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0}) CHECK(cut_tree(t, x).size() == t.num_items());
  }
}
