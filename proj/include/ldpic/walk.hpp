#pragma once

// Random-walk operators applied matrix-free. Variants:
//   plain          B, the row-stochastic walk: (Bx)_i = sum_{j ~ i} x_j / d_i
//   lazy           W_a = a I + (1-a) B
//   lazy_deflated  W_a - J/n, the rank-one shift that moves W's leading
//                  eigenvalue 1 to 0 while leaving the rest of the spectrum
//                  untouched, so power iteration can reach the second
//                  eigenvector without knowing it in advance
// apply never materializes a matrix; one call costs O(|E| + n).

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpic/graph.hpp"

namespace ldpic {

enum class WalkVariant { plain, lazy, lazy_deflated };

class WalkOperator {
 public:
  // The graph must outlive the operator. Degrees must all be positive: the
  // walk is undefined on isolated nodes.
  WalkOperator(const Graph& g, WalkVariant variant, double alpha = 0.5)
      : graph_(&g), variant_(variant), alpha_(variant == WalkVariant::plain ? 0.0 : alpha) {
    if (variant != WalkVariant::plain && !(alpha >= 0.0 && alpha < 1.0))
      throw std::invalid_argument("WalkOperator: alpha must lie in [0, 1)");
    for (int i = 0; i < g.node_count(); ++i)
      if (g.degree(i) == 0)
        throw std::domain_error("WalkOperator: isolated node " + std::to_string(i));
  }

  const Graph& graph() const { return *graph_; }
  WalkVariant variant() const { return variant_; }
  double alpha() const { return alpha_; }
  int node_count() const { return graph_->node_count(); }

  std::vector<double> apply(const std::vector<double>& x) const {
    const int n = graph_->node_count();
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("WalkOperator::apply: vector length mismatch");
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j : graph_->neighbors(i)) acc += x[j];
      const double walk = acc / static_cast<double>(graph_->degree(i));
      y[i] = alpha_ * x[i] + (1.0 - alpha_) * walk;
    }
    if (variant_ == WalkVariant::lazy_deflated) {
      const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
      for (double& v : y) v -= mean;
    }
    return y;
  }

 private:
  const Graph* graph_;
  WalkVariant variant_;
  double alpha_;
};

}  // namespace ldpic
