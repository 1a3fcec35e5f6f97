#pragma once

// Seeded random graph generators: two-cluster SBM, bipartite SBM, and
// degree-corrected SBM, plus the shared Gaussian start vector. Pair
// iteration is lexicographic and every draw comes from a derived substream,
// so identical (params, seed) pairs always produce identical graphs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"

namespace ldpic {

struct GraphSample {
  Graph graph;
  Cut truth;
  // Degree-correction parameters indexed by output node; empty for the
  // uncorrected generators.
  std::vector<double> theta;
};

struct SbmParams {
  int n1 = 0;
  int n2 = 0;
  double p = 0.0;
  double q = 0.0;

  void validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("SbmParams: cluster sizes must be >= 1");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("SbmParams: probabilities must lie in [0, 1]");
  }
};

struct BsbmParams {
  int a1 = 0;
  int a2 = 0;
  int b1 = 0;
  int b2 = 0;
  double p = 0.0;
  double q = 0.0;

  void validate() const {
    if (a1 < 1 || a2 < 1 || b1 < 1 || b2 < 1)
      throw std::invalid_argument("BsbmParams: part sizes must be >= 1");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("BsbmParams: probabilities must lie in [0, 1]");
  }
};

struct DcbmParams {
  int n1 = 0;
  int n2 = 0;
  double p = 0.0;
  double q = 0.0;
  double alpha = 2.5;      // power-law exponent, required in (2, 3)
  double theta_min = 1.0;  // smallest degree-correction value
  // Upper truncation of the power law; 0 selects the default
  // max(theta_min, sqrt(n) * ln n). Recorded in experiment metadata.
  double theta_max = 0.0;

  void validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("DcbmParams: cluster sizes must be >= 1");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("DcbmParams: probabilities must lie in [0, 1]");
    if (!(alpha > 2.0 && alpha < 3.0))
      throw std::invalid_argument("DcbmParams: alpha must lie in (2, 3)");
    if (!(theta_min > 0.0)) throw std::invalid_argument("DcbmParams: theta_min must be > 0");
    if (theta_max != 0.0 && theta_max < theta_min)
      throw std::invalid_argument("DcbmParams: theta_max must be >= theta_min");
  }

  double effective_theta_max() const {
    const double n = static_cast<double>(n1) + static_cast<double>(n2);
    return theta_max != 0.0 ? theta_max
                            : std::max(theta_min, std::sqrt(n) * std::log(n));
  }
};

namespace detail {

// Samples every unordered pair independently; prob(i, j) must be in [0, 1].
template <typename Prob>
Graph sample_pairs(int n, Rng& rng, Prob&& prob) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < prob(i, j)) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

}  // namespace detail

// Two-cluster SBM: nodes 0..n1-1 form cluster A, the rest cluster B; pairs
// inside a cluster connect with probability p, across with q. Ground truth
// is cluster A.
inline GraphSample gen_sbm(const SbmParams& params, Seed seed) {
  params.validate();
  const int n = params.n1 + params.n2;
  Rng rng(seed.stream(Purpose::graph_edges));
  GraphSample out;
  out.graph = detail::sample_pairs(n, rng, [&](int i, int j) {
    const bool same = (i < params.n1) == (j < params.n1);
    return same ? params.p : params.q;
  });
  out.truth = Cut(n);
  for (int i = 0; i < params.n1; ++i) out.truth.add(i);
  return out;
}

// Bipartite SBM: parts A = A1|A2 then B = B1|B2 in index order. Pairs
// between A_i and B_i connect with probability p, between A_i and B_j (i
// distinct from j) with q; no edges inside A or inside B. Ground truth is
// A1 union B1.
inline GraphSample gen_bsbm(const BsbmParams& params, Seed seed) {
  params.validate();
  const int a = params.a1 + params.a2;
  const int n = a + params.b1 + params.b2;
  // block(v): 0 = A1, 1 = A2, 2 = B1, 3 = B2.
  const auto block = [&](int v) {
    if (v < params.a1) return 0;
    if (v < a) return 1;
    if (v < a + params.b1) return 2;
    return 3;
  };
  Rng rng(seed.stream(Purpose::graph_edges));
  GraphSample out;
  out.graph = detail::sample_pairs(n, rng, [&](int i, int j) {
    const int bi = block(i), bj = block(j);
    const bool i_left = bi < 2, j_left = bj < 2;
    if (i_left == j_left) return 0.0;
    return (bi % 2) == (bj % 2) ? params.p : params.q;
  });
  out.truth = Cut(n);
  for (int i = 0; i < params.a1; ++i) out.truth.add(i);
  for (int i = a; i < a + params.b1; ++i) out.truth.add(i);
  return out;
}

// Degree-corrected SBM. theta_i = theta_min * v_i with v_i drawn from the
// discrete truncated power law P(v) proportional to v^-alpha on {1..M},
// M = round(theta_max / theta_min) (at least 1), via inverse CDF. Pairs
// connect with probability min(1, theta_i * theta_j * r) where r is the SBM
// block rate, and node labels are then permuted uniformly so degree gives
// away no cluster information. Returned theta is indexed by output node.
inline GraphSample gen_dcbm(const DcbmParams& params, Seed seed) {
  params.validate();
  const int n = params.n1 + params.n2;

  const int m = std::max(1, static_cast<int>(std::lround(params.effective_theta_max() /
                                                         params.theta_min)));
  std::vector<double> cumulative(m);
  double total = 0.0;
  for (int v = 1; v <= m; ++v) {
    total += std::pow(static_cast<double>(v), -params.alpha);
    cumulative[v - 1] = total;
  }

  Rng theta_rng(seed.stream(Purpose::graph_edges, 0));
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) {
    const double u = theta_rng.uniform01() * total;
    const int v = static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin()) +
                  1;
    theta[i] = params.theta_min * static_cast<double>(std::min(v, m));
  }

  // Uniform permutation: perm[i] is the output label of internal node i.
  Rng perm_rng(seed.stream(Purpose::graph_edges, 1));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[perm_rng.uniform_int(i + 1)]);

  Rng edge_rng(seed.stream(Purpose::graph_edges, 2));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = (i < params.n1) == (j < params.n1);
      const double rate = same ? params.p : params.q;
      const double prob = std::min(1.0, theta[i] * theta[j] * rate);
      if (edge_rng.uniform01() < prob) edges.emplace_back(perm[i], perm[j]);
    }
  }

  GraphSample out;
  out.graph = Graph::from_edges(n, edges);
  out.truth = Cut(n);
  for (int i = 0; i < params.n1; ++i) out.truth.add(perm[i]);
  out.theta.assign(n, 0.0);
  for (int i = 0; i < n; ++i) out.theta[perm[i]] = theta[i];
  return out;
}

// Standard normal start vector shared by the protocol and the non-private
// power iteration; both must see the same x^0 for like-for-like comparisons.
inline std::vector<double> gen_init_vector(int n, Seed seed) {
  if (n < 1) throw std::invalid_argument("gen_init_vector: n must be >= 1");
  Rng rng(seed.stream(Purpose::init_vector));
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  return x;
}

}  // namespace ldpic
