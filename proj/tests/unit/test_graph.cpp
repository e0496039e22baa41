#include <sstream>

#include "doctest.h"
#include "hiercons/error.hpp"
#include "hiercons/graph.hpp"
#include "oracles.hpp"

using namespace hiercons;

namespace {

EdgeListFile parse(const std::string& text, DirectedPolicy policy = DirectedPolicy::symmetrize) {
  std::istringstream in(text);
  return read_edge_list(in, policy);
}

}  // namespace

TEST_CASE("edge list: unweighted triangle") {
  const auto f = parse("0 1\n1 2\n2 0\n");
  CHECK(f.graph.num_nodes() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(f.graph.strength(i) == 2.0);
  CHECK(f.graph.total_weight() == 6.0);
}

TEST_CASE("edge list: reverse duplicates are summed under symmetrize") {
  const auto f = parse("0 1 2.0\n1 0 2.0\n");
  CHECK(f.graph.edges().size() == 1);
  CHECK(f.graph.weight(0, 1) == 4.0);
  CHECK(f.graph.total_weight() == 8.0);
}

TEST_CASE("edge list: errors") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("# only a comment\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 -1\n"), DomainError);
  CHECK_THROWS_AS(parse("0 1 x\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 1\n1 0 2\n", DirectedPolicy::reject), DomainError);
  CHECK_NOTHROW(parse("0 1 1\n1 0 1\n", DirectedPolicy::reject));
  try {
    parse("0 1\n\n1 2 bad\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("edge list: string ids keep first-appearance order and map back") {
  const auto f = parse("b a\na c 2\n");
  REQUIRE(f.node_ids == std::vector<std::string>{"b", "a", "c"});
  CHECK(f.graph.weight(0, 1) == 1.0);
  CHECK(f.graph.weight(1, 2) == 2.0);
}

TEST_CASE("edge list: numeric ids are ordered numerically; lone ids declare nodes") {
  const auto f = parse("10 2\n7\n");
  REQUIRE(f.node_ids == std::vector<std::string>{"2", "7", "10"});
  CHECK(f.graph.strength(1) == 0.0);
  CHECK(f.graph.weight(0, 2) == 1.0);
}

TEST_CASE("self-loops add their weight once to the strength") {
  const auto g = Graph::from_edges(2, std::vector<Edge>{{0, 0, 3.0}, {0, 1, 1.0}});
  CHECK(g.strength(0) == 4.0);
  CHECK(g.self_loop(0) == 3.0);
  CHECK(g.total_weight() == 5.0);
  const auto a = g.dense_adjacency();
  CHECK(a(0, 0) == 3.0);
}

TEST_CASE("from_edges rejects invalid input") {
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 2, 1.0}}), DomainError);
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 1, -1.0}}), DomainError);
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 1, std::nan("")}}), DomainError);
}

TEST_CASE("config null matrix examples") {
  SUBCASE("triangle") {
    const auto p = config_null_matrix(Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(p(i, j) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("two triangles") {
    const auto p = config_null_matrix(Graph::from_edges(6, oracle::two_triangles()));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) CHECK(p(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("star K1,3") {
    const auto p = config_null_matrix(Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}));
    CHECK(p(0, 1) == doctest::Approx(0.5));
    CHECK(p(1, 2) == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("empty graph") {
    CHECK_THROWS_AS(config_null_matrix(Graph::from_edges(3, std::vector<Edge>{})), DomainError);
  }
}

TEST_CASE("property: strengths, null matrix sum, and write/reload round trip") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const auto edges = oracle::random_edges(n, 0.4, rng);
    const auto g = Graph::from_edges(n, edges);
    const auto a = g.dense_adjacency();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(a(i, j) == a(j, i));
        row += a(i, j);
      }
      CHECK(row == doctest::Approx(g.strength(i)).epsilon(1e-12));
      total += row;
    }
    CHECK(total == doctest::Approx(g.total_weight()).epsilon(1e-9));
    const auto p = config_null_matrix(g);
    double psum = 0.0;
    for (const double x : p.data()) psum += x;
    CHECK(std::abs(psum - g.total_weight()) <= 1e-9 * g.total_weight());

    std::stringstream ss;
    write_edge_list(ss, g);
    const auto back = read_edge_list(ss);
    REQUIRE(back.graph.num_nodes() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(back.graph.strength(i) == g.strength(i));
  }
}
