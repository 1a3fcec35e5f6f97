#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"
#include "oracles.hpp"

using ldpic::Cut;
using ldpic::Graph;

namespace {

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

Graph cycle4() { return Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
Graph two_triangles_bridged() {
  return Graph::from_edges(
      6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

Graph star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  ldpic::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

Cut random_cut(int n, std::uint64_t seed) {
  ldpic::Rng rng(seed);
  Cut c(n);
  for (int i = 0; i < n; ++i)
    if (rng.bits() & 1) c.add(i);
  return c;
}

}  // namespace

TEST_CASE("graph construction normalizes and validates", "[graph]") {
  const Graph g = Graph::from_edges(4, {{2, 0}, {0, 2}, {1, 0}, {3, 1}});
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.neighbors(0) == std::vector<int>{1, 2});
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(2, 3));

  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(-1, {}), std::invalid_argument);
  CHECK_THROWS_AS(g.degree(4), std::out_of_range);
  CHECK_THROWS_AS(g.neighbors(-1), std::out_of_range);

  const Graph h = Graph::from_adjacency({{2, 1, 1}, {0}, {0}});
  CHECK(h.neighbors(0) == std::vector<int>{1, 2});
  CHECK(h.edge_count() == 2);
  CHECK_THROWS_AS(Graph::from_adjacency({{1}, {1}}), std::invalid_argument);
}

TEST_CASE("degree examples", "[graph]") {
  CHECK(triangle().degree(0) == 2);
  CHECK(Graph(1).degree(0) == 0);
  CHECK(path3().degree(1) == 2);
}

TEST_CASE("cut basics", "[graph]") {
  Cut c = Cut::from_members(5, {1, 3});
  CHECK(c.size() == 2);
  CHECK(c.contains(1));
  CHECK_FALSE(c.contains(0));
  CHECK_FALSE(c.trivial());
  CHECK(Cut(5).trivial());
  CHECK(Cut::from_members(3, {0, 1, 2}).trivial());
  CHECK(c.complement().members() == std::vector<int>{0, 2, 4});
  CHECK(c.complement().complement() == c);
  c.add(3);
  CHECK(c.size() == 2);
  CHECK_THROWS_AS(c.add(5), std::out_of_range);

  const Cut a = Cut::from_members(4, {0, 1});
  const Cut b = Cut::from_members(4, {1, 2});
  CHECK(symmetric_difference(a, b).members() == std::vector<int>{0, 2});
  CHECK_THROWS_AS(symmetric_difference(a, Cut(3)), std::invalid_argument);
}

TEST_CASE("volume examples", "[graph]") {
  CHECK(ldpic::volume(triangle(), Cut::from_members(3, {0, 1, 2})) == 3);
  CHECK(ldpic::volume(triangle(), Cut::from_members(3, {0})) == 0);
  CHECK(ldpic::volume(cycle4(), Cut::from_members(4, {0, 1})) == 1);
}

TEST_CASE("edges_across examples", "[graph]") {
  const Graph c4 = cycle4();
  CHECK(ldpic::edges_across(c4, Cut::from_members(4, {0, 1}), Cut::from_members(4, {2, 3})) == 2);
  CHECK(ldpic::edges_across(c4, Cut(4), Cut::from_members(4, {1, 2})) == 0);
  CHECK(ldpic::edges_across(complete(4), Cut::from_members(4, {0}),
                            Cut::from_members(4, {1, 2, 3})) == 3);
  CHECK_THROWS_AS(ldpic::edges_across(c4, Cut::from_members(4, {0, 1}),
                                      Cut::from_members(4, {1, 2})),
                  std::invalid_argument);
}

TEST_CASE("conductance examples", "[graph]") {
  const Graph tt = two_triangles_bridged();
  CHECK(ldpic::conductance(tt, Cut::from_members(6, {0, 1, 2})) == Catch::Approx(1.0 / 3.0));
  // With volume counting internal edges only, conductance can exceed 1:
  // K4 with S = {0,1} has 4 crossing edges over min volume 1.
  CHECK(ldpic::conductance(complete(4), Cut::from_members(4, {0, 1})) == Catch::Approx(4.0));

  const Graph disconnected =
      Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  CHECK(ldpic::conductance(disconnected, Cut::from_members(6, {0, 1, 2})) == 0.0);

  CHECK_THROWS_AS(ldpic::conductance(tt, Cut(6)), std::domain_error);
  CHECK_THROWS_AS(ldpic::conductance(tt, Cut::from_members(6, {0, 1, 2, 3, 4, 5})),
                  std::domain_error);
  // Path 0-1-2 split {0,2} vs {1}: both sides have zero volume.
  CHECK_THROWS_AS(ldpic::conductance(path3(), Cut::from_members(3, {0, 2})),
                  std::domain_error);
}

TEST_CASE("d_vol and d_norm examples", "[graph]") {
  const Graph c4 = cycle4();
  const Cut s = Cut::from_members(4, {0, 1});
  const Cut t = Cut::from_members(4, {0, 2});
  CHECK(ldpic::d_vol(c4, s, s) == 0);
  CHECK(ldpic::d_vol(c4, s, s.complement()) == 0);
  CHECK(ldpic::d_vol(c4, s, t) == 2);
  CHECK(ldpic::d_norm(c4, s, s) == 0.0);
  CHECK(ldpic::d_norm(c4, s, s.complement()) == 0.0);
  CHECK(ldpic::d_norm(c4, s, t) == Catch::Approx(0.5));
  CHECK_THROWS_AS(ldpic::d_norm(Graph(3), Cut(3), Cut(3)), std::domain_error);
}

TEST_CASE("metrics agree with brute-force oracles on random graphs", "[graph]") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = random_graph(30, 0.25, seed);
    const Cut s = random_cut(30, seed * 11 + 1);
    const Cut t = random_cut(30, seed * 11 + 2);
    CHECK(ldpic::volume(g, s) == oracle::volume(g, s));
    CHECK(ldpic::volume_degree_weighted(g, s) == oracle::volume_degree_weighted(g, s));
    CHECK(ldpic::edges_across(g, s, s.complement()) ==
          oracle::edges_across(g, s, s.complement()));
    CHECK(ldpic::d_vol(g, s, t) == oracle::d_vol(g, s, t));
    CHECK(ldpic::d_vol_degree_weighted(g, s, t) == oracle::d_vol_degree_weighted(g, s, t));
    if (!s.trivial() && std::min(ldpic::volume(g, s), ldpic::volume(g, s.complement())) > 0)
      CHECK(ldpic::conductance(g, s) == Catch::Approx(oracle::conductance(g, s)));
  }
}

TEST_CASE("volume partition identity holds on every cut", "[graph]") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = random_graph(40, 0.2, seed * 7);
    for (std::uint64_t cs = 0; cs < 8; ++cs) {
      const Cut s = random_cut(40, seed * 100 + cs);
      CHECK(ldpic::volume(g, s) + ldpic::volume(g, s.complement()) +
                ldpic::edges_across(g, s, s.complement()) ==
            g.edge_count());
    }
  }
}

TEST_CASE("degree-weighted volume equals member degree sum", "[graph]") {
  const Graph tt = two_triangles_bridged();
  const Cut left = Cut::from_members(6, {0, 1, 2});
  // degrees 2,2,3 on the bridged triangle.
  CHECK(ldpic::volume_degree_weighted(tt, left) == 7);
  // Degree-mass distance between truth and itself is 0, and between truth and
  // a single-node flip is twice that node's degree mass both ways.
  const Cut flipped = Cut::from_members(6, {0, 1});
  CHECK(ldpic::d_vol_degree_weighted(tt, left, flipped) == 2 * 3);
  CHECK(ldpic::d_norm_degree_weighted(tt, left, left) == 0.0);
  CHECK(ldpic::d_norm_degree_weighted(tt, left, left.complement()) == 0.0);
}

TEST_CASE("d_norm is label-flip invariant and bounded", "[graph]") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = random_graph(25, 0.3, seed * 13);
    if (g.edge_count() == 0) continue;
    for (std::uint64_t cs = 0; cs < 6; ++cs) {
      const Cut s = random_cut(25, seed * 31 + cs);
      const Cut t = random_cut(25, seed * 37 + cs);
      const double d = ldpic::d_norm(g, s, t);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
      CHECK(d == ldpic::d_norm(g, s, t.complement()));
      CHECK(d == ldpic::d_norm(g, s.complement(), t));
      CHECK(d == ldpic::d_norm(g, t, s));
      const double dw = ldpic::d_norm_degree_weighted(g, s, t);
      CHECK(dw >= 0.0);
      CHECK(dw <= 1.0);
      CHECK(dw == ldpic::d_norm_degree_weighted(g, s, t.complement()));
    }
  }
}

TEST_CASE("d_vol two-term formula equals unreduced four-term definition",
          "[graph]") {
  // Exhaustive over all cut pairs on small random graphs, using the
  // precomputed subset-volume table for the four-term oracle.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const int n = 10;
    const Graph g = random_graph(n, 0.4, seed * 17);
    const oracle::VolumeTable table(g);
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t sm = 0; sm <= full; ++sm) {
      for (std::uint32_t tm = sm; tm <= full; ++tm) {
        const long long lib =
            ldpic::d_vol(g, oracle::cut_from_mask(n, sm), oracle::cut_from_mask(n, tm));
        // Four-term: min over labelings of Vol(S xor T) + Vol(~S xor ~T) and
        // the flipped pairing; complements cancel, the table keeps it exact.
        const long long four = std::min(
            table.volume(sm ^ tm) + table.volume((sm ^ full) ^ (tm ^ full)),
            table.volume(sm ^ (tm ^ full)) + table.volume((sm ^ full) ^ tm));
        REQUIRE(lib == four);
      }
    }
  }
}

TEST_CASE("k_core examples", "[graph]") {
  const auto k4 = ldpic::k_core(complete(4), 3);
  CHECK(k4.core.node_count() == 4);
  CHECK(k4.core.edge_count() == 6);
  CHECK(k4.original_index == std::vector<int>{0, 1, 2, 3});

  const auto empty = ldpic::k_core(star(5), 2);
  CHECK(empty.core.node_count() == 0);
  CHECK(empty.original_index.empty());

  const auto tt = ldpic::k_core(two_triangles_bridged(), 2);
  CHECK(tt.core.node_count() == 6);
  CHECK(tt.core.edge_count() == 7);

  CHECK_THROWS_AS(ldpic::k_core(complete(3), -1), std::invalid_argument);
}

TEST_CASE("k_core matches repeated-scan oracle and is maximal", "[graph]") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 10;
    const Graph g = random_graph(n, 0.35, seed * 23);
    for (int k = 0; k <= 5; ++k) {
      const auto result = ldpic::k_core(g, k);
      const auto expected = oracle::k_core_members(g, k);
      REQUIRE(result.original_index == expected);

      // Every retained node meets the bound.
      for (int i = 0; i < result.core.node_count(); ++i)
        CHECK(result.core.degree(i) >= k);

      // Induced edges are exactly the original edges between survivors.
      for (int i = 0; i < result.core.node_count(); ++i)
        for (int j = i + 1; j < result.core.node_count(); ++j)
          CHECK(result.core.has_edge(i, j) ==
                g.has_edge(result.original_index[i], result.original_index[j]));

      // Maximality: any peeled node has fewer than k surviving neighbors.
      std::vector<char> in_core(n, 0);
      for (int orig : result.original_index) in_core[orig] = 1;
      for (int u = 0; u < n; ++u) {
        if (in_core[u]) continue;
        int deg = 0;
        for (int v : g.neighbors(u))
          if (in_core[v]) ++deg;
        CHECK(deg < k);
      }
    }
  }
}
