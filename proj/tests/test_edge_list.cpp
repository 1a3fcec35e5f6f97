#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ldpic/edge_list.hpp"
#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"

using ldpic::Graph;

namespace {

ldpic::EdgeListResult read_string(const std::string& text) {
  std::istringstream in(text);
  return ldpic::read_edge_list(in);
}

std::string write_string(const Graph& g) {
  std::ostringstream out;
  ldpic::write_edge_list(out, g);
  return out.str();
}

bool same_graph(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count()) return false;
  for (int i = 0; i < a.node_count(); ++i)
    if (a.neighbors(i) != b.neighbors(i)) return false;
  return true;
}

// Random graph with minimum degree >= 1: a cycle plus random chords.
Graph random_connected_graph(int n, double p, std::uint64_t seed) {
  ldpic::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng.uniform01() < p) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("edge list reader handles the basic forms", "[edge_list]") {
  const auto path = read_string("0 1\n1 2\n");
  CHECK(path.graph.node_count() == 3);
  CHECK(path.graph.edge_count() == 2);
  CHECK(path.graph.has_edge(0, 1));
  CHECK(path.graph.has_edge(1, 2));
  CHECK_FALSE(path.graph.has_edge(0, 2));

  const auto dedup = read_string("0 1\n1 0\n");
  CHECK(dedup.graph.node_count() == 2);
  CHECK(dedup.graph.edge_count() == 1);

  const auto loop = read_string("0 0\n0 1\n");
  CHECK(loop.graph.node_count() == 2);
  CHECK(loop.graph.edge_count() == 1);
  CHECK(loop.graph.has_edge(0, 1));
}

TEST_CASE("edge list reader skips comments and blank lines", "[edge_list]") {
  const auto r = read_string("# header\n\n  \t\n0 1\n# mid comment\n1 2\n\n");
  CHECK(r.graph.node_count() == 3);
  CHECK(r.graph.edge_count() == 2);
}

TEST_CASE("edge list reader compacts labels in ascending order", "[edge_list]") {
  const auto r = read_string("10 3\n7 10\n");
  CHECK(r.graph.node_count() == 3);
  CHECK(r.original_label == std::vector<std::uint64_t>{3, 7, 10});
  // 3 -> 0, 7 -> 1, 10 -> 2.
  CHECK(r.graph.has_edge(2, 0));
  CHECK(r.graph.has_edge(1, 2));
  CHECK_FALSE(r.graph.has_edge(0, 1));

  // Line order does not matter for the result.
  const auto r2 = read_string("7 10\n10 3\n");
  CHECK(same_graph(r.graph, r2.graph));
  CHECK(r.original_label == r2.original_label);
}

TEST_CASE("edge list parse errors carry 1-based line numbers", "[edge_list]") {
  const auto expect_error_on_line = [](const std::string& text, long long line) {
    try {
      read_string(text);
      FAIL("expected parse_error");
    } catch (const ldpic::parse_error& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) !=
            std::string::npos);
    }
  };
  expect_error_on_line("0 x\n", 1);
  expect_error_on_line("# ok\n\n0 1 2\n", 3);
  expect_error_on_line("0 1\nabc\n", 2);
  expect_error_on_line("0\n", 1);
  expect_error_on_line("0 1\n3 -1\n", 2);
}

TEST_CASE("edge list writer emits sorted u<v lines", "[edge_list]") {
  const Graph g = Graph::from_edges(4, {{3, 1}, {0, 2}, {1, 0}});
  CHECK(write_string(g) == "0 1\n0 2\n1 3\n");
  CHECK(write_string(Graph(3)).empty());
}

TEST_CASE("write then read is the identity without isolated nodes", "[edge_list]") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = random_connected_graph(20, 0.15, seed * 5);
    const std::string text = write_string(g);
    const auto back = read_string(text);
    REQUIRE(same_graph(g, back.graph));
    for (int i = 0; i < g.node_count(); ++i)
      CHECK(back.original_label[i] == static_cast<std::uint64_t>(i));
    // Second trip is byte-identical.
    CHECK(write_string(back.graph) == text);
  }
}

TEST_CASE("edge list file round trip", "[edge_list]") {
  const Graph g = random_connected_graph(15, 0.2, 99);
  const std::string path = "test_edge_list_roundtrip.tmp";
  ldpic::write_edge_list_file(path, g);
  const auto back = ldpic::read_edge_list_file(path);
  CHECK(same_graph(g, back.graph));
  std::remove(path.c_str());

  CHECK_THROWS_AS(ldpic::read_edge_list_file("does_not_exist_anywhere.tmp"),
                  std::runtime_error);
}
