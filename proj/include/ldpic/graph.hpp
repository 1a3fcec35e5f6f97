#pragma once

// Undirected simple graphs, vertex cuts, and the cut metrics used throughout:
// volume, conductance, cut distance (d_vol) and its normalization (d_norm),
// plus k-core extraction.
//
// Volume convention: volume(g, s) counts edges with BOTH endpoints inside s.
// The degree-mass convention common in the spectral clustering literature
// (sum of member degrees) is provided separately as the *_degree_weighted
// family; the two disagree on what a random cut scores (about 1/2 under the
// edge-count metric, about 1 under the degree-mass metric), so comparisons
// must pick one and say so.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldpic {

// Simple undirected graph on nodes 0..n-1. Neighbor lists are sorted and
// deduplicated; no self-loops. Memory is O(n + |E|).
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(check_n(n)) {}

  // Builds from an edge list. Throws std::invalid_argument on out-of-range
  // endpoints or self-loops; duplicate edges collapse to one.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (const auto& [u, v] : edges) g.check_edge(u, v);
    for (const auto& [u, v] : edges) {
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    g.finalize();
    return g;
  }

  // Builder used by generators and readers that already deduplicate:
  // takes ownership of per-node neighbor lists and normalizes them.
  static Graph from_adjacency(std::vector<std::vector<int>> adj) {
    Graph g;
    g.adj_ = std::move(adj);
    const int n = static_cast<int>(g.adj_.size());
    for (int i = 0; i < n; ++i)
      for (int j : g.adj_[i])
        if (j < 0 || j >= n || j == i)
          throw std::invalid_argument("Graph: bad neighbor " + std::to_string(j) +
                                      " at node " + std::to_string(i));
    g.finalize();
    return g;
  }

  int node_count() const { return static_cast<int>(adj_.size()); }

  long long edge_count() const { return edge_count_; }

  int degree(int i) const {
    check_node(i);
    return static_cast<int>(adj_[i].size());
  }

  const std::vector<int>& neighbors(int i) const {
    check_node(i);
    return adj_[i];
  }

  bool has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

 private:
  static std::size_t check_n(int n) {
    if (n < 0) throw std::invalid_argument("Graph: negative node count");
    return static_cast<std::size_t>(n);
  }

  void check_node(int i) const {
    if (i < 0 || i >= node_count())
      throw std::out_of_range("Graph: node " + std::to_string(i) + " out of range");
  }

  void check_edge(int u, int v) const {
    if (u < 0 || u >= node_count() || v < 0 || v >= node_count())
      throw std::invalid_argument("Graph: edge endpoint out of range: " +
                                  std::to_string(u) + " " + std::to_string(v));
    if (u == v)
      throw std::invalid_argument("Graph: self-loop at node " + std::to_string(u));
  }

  void finalize() {
    edge_count_ = 0;
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      edge_count_ += static_cast<long long>(nb.size());
    }
    edge_count_ /= 2;
  }

  std::vector<std::vector<int>> adj_;
  long long edge_count_ = 0;
};

// Vertex subset of a graph on n nodes.
class Cut {
 public:
  Cut() = default;
  explicit Cut(int n) : in_(check_n(n), 0) {}

  static Cut from_members(int n, const std::vector<int>& members) {
    Cut c(n);
    for (int i : members) c.add(i);
    return c;
  }

  void add(int i) {
    check_node(i);
    if (!in_[i]) {
      in_[i] = 1;
      ++size_;
    }
  }

  bool contains(int i) const {
    check_node(i);
    return in_[i] != 0;
  }

  int node_count() const { return static_cast<int>(in_.size()); }
  int size() const { return size_; }
  bool trivial() const { return size_ == 0 || size_ == node_count(); }

  Cut complement() const {
    Cut c(node_count());
    for (int i = 0; i < node_count(); ++i)
      if (!in_[i]) c.add(i);
    return c;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size_);
    for (int i = 0; i < node_count(); ++i)
      if (in_[i]) out.push_back(i);
    return out;
  }

  // Symmetric difference; both cuts must live on the same node set.
  friend Cut symmetric_difference(const Cut& a, const Cut& b) {
    if (a.node_count() != b.node_count())
      throw std::invalid_argument("symmetric_difference: node counts differ");
    Cut c(a.node_count());
    for (int i = 0; i < a.node_count(); ++i)
      if (a.in_[i] != b.in_[i]) c.add(i);
    return c;
  }

  bool operator==(const Cut& other) const { return in_ == other.in_; }

 private:
  static std::size_t check_n(int n) {
    if (n < 0) throw std::invalid_argument("Cut: negative node count");
    return static_cast<std::size_t>(n);
  }

  void check_node(int i) const {
    if (i < 0 || i >= node_count())
      throw std::out_of_range("Cut: node " + std::to_string(i) + " out of range");
  }

  std::vector<char> in_;
  int size_ = 0;
};

inline void check_same_nodes(const Graph& g, const Cut& s, const char* who) {
  if (s.node_count() != g.node_count())
    throw std::invalid_argument(std::string(who) + ": cut is over a different node set");
}

// Number of edges with both endpoints in s.
inline long long volume(const Graph& g, const Cut& s) {
  check_same_nodes(g, s, "volume");
  long long vol = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    if (!s.contains(i)) continue;
    for (int j : g.neighbors(i))
      if (j > i && s.contains(j)) ++vol;
  }
  return vol;
}

// Sum of member degrees (degree-mass volume; counts boundary edges once and
// internal edges twice).
inline long long volume_degree_weighted(const Graph& g, const Cut& s) {
  check_same_nodes(g, s, "volume_degree_weighted");
  long long vol = 0;
  for (int i = 0; i < g.node_count(); ++i)
    if (s.contains(i)) vol += g.degree(i);
  return vol;
}

// Edges with one endpoint in s and the other in t. The sets must be disjoint.
inline long long edges_across(const Graph& g, const Cut& s, const Cut& t) {
  check_same_nodes(g, s, "edges_across");
  check_same_nodes(g, t, "edges_across");
  for (int i = 0; i < g.node_count(); ++i)
    if (s.contains(i) && t.contains(i))
      throw std::invalid_argument("edges_across: cuts overlap at node " + std::to_string(i));
  long long count = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    if (!s.contains(i)) continue;
    for (int j : g.neighbors(i))
      if (t.contains(j)) ++count;
  }
  return count;
}

// Boundary edges over the smaller side's volume. Undefined on trivial cuts
// and when both sides have zero volume.
inline double conductance(const Graph& g, const Cut& s) {
  check_same_nodes(g, s, "conductance");
  if (s.trivial()) throw std::domain_error("conductance: cut is trivial");
  const Cut sbar = s.complement();
  const long long denom = std::min(volume(g, s), volume(g, sbar));
  if (denom == 0) throw std::domain_error("conductance: smaller side has zero volume");
  return static_cast<double>(edges_across(g, s, sbar)) / static_cast<double>(denom);
}

// Cut distance: min over relabeling of twice the volume of the symmetric
// difference. Equal cuts and exact complements are at distance zero.
inline long long d_vol(const Graph& g, const Cut& s, const Cut& t) {
  check_same_nodes(g, s, "d_vol");
  check_same_nodes(g, t, "d_vol");
  const long long direct = 2 * volume(g, symmetric_difference(s, t));
  const long long flipped = 2 * volume(g, symmetric_difference(s, t.complement()));
  return std::min(direct, flipped);
}

inline long long d_vol_degree_weighted(const Graph& g, const Cut& s, const Cut& t) {
  check_same_nodes(g, s, "d_vol_degree_weighted");
  check_same_nodes(g, t, "d_vol_degree_weighted");
  const long long direct = 2 * volume_degree_weighted(g, symmetric_difference(s, t));
  const long long flipped =
      2 * volume_degree_weighted(g, symmetric_difference(s, t.complement()));
  return std::min(direct, flipped);
}

// d_vol normalized by the total volume, in [0, 1]. Needs at least one edge.
inline double d_norm(const Graph& g, const Cut& s, const Cut& t) {
  if (g.edge_count() == 0) throw std::domain_error("d_norm: graph has no edges");
  return static_cast<double>(d_vol(g, s, t)) / static_cast<double>(g.edge_count());
}

// Degree-mass normalization (total mass 2|E|). A cut uncorrelated with s
// scores close to 1 here, which is the scale experiment reports use.
inline double d_norm_degree_weighted(const Graph& g, const Cut& s, const Cut& t) {
  if (g.edge_count() == 0)
    throw std::domain_error("d_norm_degree_weighted: graph has no edges");
  return static_cast<double>(d_vol_degree_weighted(g, s, t)) /
         static_cast<double>(2 * g.edge_count());
}

// Cut from the strict sign pattern of a score vector: members are exactly
// the nodes with score > 0, so a zero score lands in the complement. Every
// cut extraction in the library goes through here for comparability.
inline Cut sign_cut(const std::vector<double>& x) {
  Cut c(static_cast<int>(x.size()));
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (x[i] > 0.0) c.add(i);
  return c;
}

struct KCoreResult {
  Graph core;
  // original_index[i] is the node of the input graph that core node i came from.
  std::vector<int> original_index;
};

// Maximal induced subgraph with minimum degree >= k, found by peeling.
// The k-core is unique; it may be empty. O(n + |E|).
inline KCoreResult k_core(const Graph& g, int k) {
  if (k < 0) throw std::invalid_argument("k_core: k must be non-negative");
  const int n = g.node_count();
  std::vector<int> deg(n);
  std::vector<char> removed(n, 0);
  std::vector<int> stack;
  for (int i = 0; i < n; ++i) {
    deg[i] = g.degree(i);
    if (deg[i] < k) {
      removed[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : g.neighbors(u)) {
      if (removed[v]) continue;
      if (--deg[v] < k) {
        removed[v] = 1;
        stack.push_back(v);
      }
    }
  }

  KCoreResult result;
  std::vector<int> new_index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!removed[i]) {
      new_index[i] = static_cast<int>(result.original_index.size());
      result.original_index.push_back(i);
    }
  }
  std::vector<std::vector<int>> adj(result.original_index.size());
  for (int i = 0; i < n; ++i) {
    if (removed[i]) continue;
    for (int j : g.neighbors(i))
      if (!removed[j]) adj[new_index[i]].push_back(new_index[j]);
  }
  result.core = Graph::from_adjacency(std::move(adj));
  return result;
}

}  // namespace ldpic
