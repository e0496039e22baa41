#include <sstream>

#include "doctest.h"
#include "hiercons/error.hpp"
#include "hiercons/io.hpp"
#include "oracles.hpp"

using namespace hiercons;

TEST_CASE("partition CSV round trip") {
  const Partition p(std::vector<std::size_t>{0, 1, 1, 2, 0});
  std::stringstream ss;
  io::write_partition_csv(ss, p);
  CHECK(ss.str() == "cluster\n0\n1\n1\n2\n0\n");
  CHECK(io::read_partition_csv(ss) == p);
  std::istringstream headerless("3\n3\n1\n");
  CHECK(io::read_partition_csv(headerless) == Partition(std::vector<std::size_t>{0, 0, 1}));
  std::istringstream bad("cluster\n1\nx\n");
  CHECK_THROWS_AS(io::read_partition_csv(bad), ParseError);
}

TEST_CASE("ensemble CSV round trip with and without gammas") {
  PartitionEnsemble e{{Partition(std::vector<std::size_t>{0, 0, 1}), Partition(std::vector<std::size_t>{0, 1, 2})},
                      {0.1, 2.0 / 3.0}};
  std::stringstream ss;
  io::write_ensemble_csv(ss, e);
  const auto back = io::read_ensemble_csv(ss);
  CHECK(back.partitions == e.partitions);
  CHECK(back.gammas == e.gammas);

  e.gammas.clear();
  std::stringstream s2;
  io::write_ensemble_csv(s2, e);
  CHECK(s2.str().rfind("t0,t1\n", 0) == 0);
  const auto b2 = io::read_ensemble_csv(s2);
  CHECK(b2.gammas.empty());
  CHECK(b2.partitions == e.partitions);

  std::istringstream ragged("t0,t1\n0,0\n1\n");
  CHECK_THROWS_AS(io::read_ensemble_csv(ragged), ParseError);
}

TEST_CASE("binary matrix round trip is exact") {
  DenseMatrix m(3);
  for (std::size_t k = 0; k < 9; ++k) m.data()[k] = 1.0 / (k + 1.0);
  std::stringstream ss;
  io::write_matrix_binary(ss, m);
  CHECK(ss.str().size() == 8 + 9 * 8);
  CHECK(io::read_matrix_binary(ss) == m);
}

TEST_CASE("tree JSON round trip and flat CSV") {
  std::vector<TreeNode> nodes(3);
  nodes[0].members = {0, 1, 2};
  nodes[0].children = {1, 2};
  nodes[0].strength = 0.25;
  nodes[1] = {1, 0, {}, {0, 2}, 0.9};
  nodes[2] = {2, 0, {}, {1}, 1.0};
  const ConsensusTree t(3, nodes);
  const auto j = io::tree_to_json(t);
  CHECK(j["version"] == io::kTreeFormatVersion);
  const auto back = io::tree_from_json(nlohmann::json::parse(j.dump()));
  REQUIRE(back.nodes().size() == 3);
  CHECK(back.node(1).members == std::vector<std::size_t>{0, 2});
  CHECK(back.root().strength == 0.25);
  std::ostringstream csv;
  io::write_tree_csv(csv, t);
  CHECK(csv.str() == "node_id,leaf_cluster,coarse_cluster\n0,0,0\n1,1,1\n2,0,0\n");
  CHECK_THROWS_AS(io::tree_from_json(nlohmann::json::parse(R"({"format":"x"})")), ParseError);
}
