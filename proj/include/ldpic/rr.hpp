#pragma once

// Randomized response over the adjacency bits: every unordered pair is
// flipped independently with probability 1/(e^eps + 1), the standard
// eps-edge-LDP choice, then the obfuscated graph is clustered with the
// non-private spectral cut. No debiasing: the benchmark clusters the raw
// flipped graph. This is the only module that walks Theta(n^2) pairs, hence
// the explicit size guard.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"
#include "ldpic/spectral.hpp"

namespace ldpic {

// The Theta(n^2) materialization guard tripped without an explicit override.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kRrMaxNodes = 30000;

struct FlipParams {
  double epsilon;
  double flip_probability;  // 1/(e^eps + 1), always in (0, 1/2)

  static FlipParams from_epsilon(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
      throw std::invalid_argument("randomized response: epsilon must be positive and finite");
    return FlipParams{eps, 1.0 / (std::exp(eps) + 1.0)};
  }
};

inline Graph randomize_response(const Graph& g, double eps, Seed seed,
                                bool allow_large = false) {
  const FlipParams params = FlipParams::from_epsilon(eps);
  const int n = g.node_count();
  if (n > kRrMaxNodes && !allow_large)
    throw resource_error("randomize_response: n = " + std::to_string(n) + " exceeds " +
                         std::to_string(kRrMaxNodes) +
                         " (pass the explicit override to materialize Theta(n^2) bits)");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    // One substream per row; each unordered pair is decided once, in the row
    // of its smaller endpoint, so the output is symmetric by construction.
    Rng rng(seed.stream(Purpose::baseline_flips, static_cast<std::uint64_t>(i)));
    const auto& nbr = g.neighbors(i);
    std::size_t k = 0;
    while (k < nbr.size() && nbr[k] <= i) ++k;
    for (int j = i + 1; j < n; ++j) {
      const bool flip = rng.uniform01() < params.flip_probability;
      bool present = false;
      if (k < nbr.size() && nbr[k] == j) {
        present = true;
        ++k;
      }
      if (present != flip) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

inline Cut rr_spectral_cut(const Graph& g, double eps, Seed seed,
                           bool allow_large = false) {
  const Graph obfuscated = randomize_response(g, eps, seed, allow_large);
  EigenOptions opts;
  opts.seed = seed;
  return spectral_cut(obfuscated, 0.5, opts);
}

}  // namespace ldpic
