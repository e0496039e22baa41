#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hiercons/graph.hpp"
#include "hiercons/partition.hpp"

namespace hiercons {

/// Two-level hierarchical degree-corrected block model.
struct HierBenchmarkSpec {
  std::size_t n = 1000;
  std::array<double, 3> p{0.2, 0.2, 0.6};  // edge fractions placed at levels 0, 1, 2
  double degree_exponent = 2.0;
  std::size_t k_min = 5;
  std::size_t k_max = 70;
  double child_mean = 4.0;
  std::size_t child_cutoff = 2;
  double dirichlet_sigma = 1.5;
  std::uint64_t seed = 0;

  /// Throws DomainError on invalid parameters.
  void validate() const;
};

struct PlantedHierarchy {
  Partition level1;
  Partition level2;  // refines level1
};

/// Splits the root, then every level-1 community, into c ~ Poisson(child_mean)
/// children (redrawn until c >= child_cutoff) with Dirichlet(sigma)
/// assignment probabilities. An assignment is redrawn when it leaves fewer
/// than two non-empty children, or, at level 1, any child too small to split.
PlantedHierarchy sample_hierarchy(const HierBenchmarkSpec& spec);

struct BenchmarkNetwork {
  Graph graph;
  std::vector<std::size_t> target_degrees;
  std::array<std::size_t, 3> level_edges{};  // edges placed at each level
};

/// m = round(sum k / 2) edges, each placed at level l with probability p_l.
/// Level 0 draws both endpoints proportional to degree over all nodes; levels 1
/// and 2 first draw a block proportional to its total degree. Self-loops are
/// always redrawn; repeated edges are redrawn up to 100 times and then added
/// as weight.
BenchmarkNetwork generate_network_detailed(const HierBenchmarkSpec& spec, const PlantedHierarchy& h);
Graph generate_network(const HierBenchmarkSpec& spec, const PlantedHierarchy& h);

}  // namespace hiercons
