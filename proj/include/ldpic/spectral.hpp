#pragma once

// Non-private spectral reference machinery: an eigensolver for the walk
// operators, spectral clustering, noise-free power-iteration clustering, the
// eigen-gap ratio g, and the iteration-count rule T = ceil(2 log n / log g).
//
// The eigensolver's primary path is deflated power iteration, matrix-free,
// which matches the protocol's access pattern. Graphs whose top eigenvalues
// nearly coincide (randomized-response outputs especially) make that path
// arbitrarily slow, so a deterministic cost model projects the remaining
// iterations and switches to a dense solve on the similar symmetric matrix
// N_a = aI + (1-a) D^{-1/2} A D^{-1/2} once the projection exceeds the dense
// cost. W_a = D^{-1/2} N_a D^{1/2}, so eigenvalues transfer unchanged and
// eigenvectors map through D^{-1/2}.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpic/generators.hpp"
#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"
#include "ldpic/walk.hpp"

namespace ldpic {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm
};

class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& message, double residual)
      : std::runtime_error(message + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

enum class SolvePolicy { automatic, iterative_only, dense_only };

struct EigenOptions {
  int k = 1;
  double tolerance = 1e-10;  // bound on ||M v - lambda v||_2 per returned pair
  long long max_iters = 0;   // 0 selects 10 n ln n per deflation stage
  SolvePolicy policy = SolvePolicy::automatic;
  Seed seed{0};
};

namespace detail {

inline constexpr int kDenseMaxN = 5000;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double mean(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s / static_cast<double>(a.size());
}

// All eigenpairs of W_a via the similar symmetric matrix, descending by
// |value| with ties broken by value then original index.
inline std::vector<EigenPair> dense_walk_pairs(const Graph& g, double alpha) {
  const int n = g.node_count();
  std::vector<double> inv_sqrt_deg(n);
  for (int i = 0; i < n; ++i) inv_sqrt_deg[i] = 1.0 / std::sqrt(double(g.degree(i)));

  Eigen::MatrixXd nmat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    nmat(i, i) = alpha;
    for (int j : g.neighbors(i))
      nmat(i, j) = (1.0 - alpha) * inv_sqrt_deg[i] * inv_sqrt_deg[j];
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(nmat);
  if (solver.info() != Eigen::Success)
    throw convergence_error("dense eigensolver failed",
                            std::numeric_limits<double>::quiet_NaN());

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  const auto& values = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(values(a)), mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    if (values(a) != values(b)) return values(a) > values(b);
    return a < b;
  });

  std::vector<EigenPair> pairs(n);
  for (int rank = 0; rank < n; ++rank) {
    const int i = order[rank];
    pairs[rank].value = values(i);
    pairs[rank].vector.resize(n);
    for (int r = 0; r < n; ++r) pairs[rank].vector[r] = inv_sqrt_deg[r] * solver.eigenvectors()(r, i);
    const double len = norm(pairs[rank].vector);
    for (double& v : pairs[rank].vector) v /= len;
  }
  return pairs;
}

// Eigenpairs of W_a - J/n from those of W_a. The rank-one shift sends the
// Perron pair (value 1, constant vector) to 0 and keeps every other
// eigenvalue; the eigenvector for surviving value m is u - (mean(u)/m) 1.
// Pairs of W_a at value 0 cannot be mapped (the shifted operator can be
// defective there), so only the exact zero pair with the constant vector is
// appended. Within groups of equal eigenvalues the shifted vectors are
// orthonormalized and near-zero remainders dropped, which removes exactly
// the Perron direction.
inline std::vector<EigenPair> dense_shifted_pairs(const Graph& g, double alpha) {
  const auto wpairs = dense_walk_pairs(g, alpha);
  const int n = g.node_count();

  std::vector<EigenPair> kept;
  std::size_t group_begin = 0;
  for (std::size_t i = 0; i < wpairs.size(); ++i) {
    if (i > 0 && std::abs(wpairs[i].value - wpairs[i - 1].value) > 1e-9)
      group_begin = kept.size();
    const double value = wpairs[i].value;
    if (std::abs(value) < 1e-12) continue;  // unmappable; see above

    std::vector<double> shifted = wpairs[i].vector;
    const double shift = mean(shifted) / value;
    for (double& v : shifted) v -= shift;
    // Orthogonalize against already-kept vectors of this eigenvalue group.
    for (std::size_t r = group_begin; r < kept.size(); ++r) {
      const double c = dot(shifted, kept[r].vector);
      for (int t = 0; t < n; ++t) shifted[t] -= c * kept[r].vector[t];
    }
    const double len = norm(shifted);
    if (len < 1e-6) continue;  // the Perron direction collapses here
    for (double& v : shifted) v /= len;
    kept.push_back(EigenPair{value, std::move(shifted)});
  }

  EigenPair zero;
  zero.value = 0.0;
  zero.vector.assign(n, 1.0 / std::sqrt(double(n)));
  kept.push_back(std::move(zero));

  std::stable_sort(kept.begin(), kept.end(), [](const EigenPair& a, const EigenPair& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    return a.value > b.value;
  });
  return kept;
}

inline std::vector<EigenPair> dense_top_k(const WalkOperator& op, int k, double tolerance) {
  const auto all = op.variant() == WalkVariant::lazy_deflated
                       ? dense_shifted_pairs(op.graph(), op.alpha())
                       : dense_walk_pairs(op.graph(), op.alpha());
  if (static_cast<int>(all.size()) < k)
    throw convergence_error("spectrum has fewer than k representable eigenpairs",
                            std::numeric_limits<double>::quiet_NaN());
  std::vector<EigenPair> out(all.begin(), all.begin() + k);
  const double bound = std::max(tolerance, 1e-8);
  for (const auto& pair : out) {
    const auto mv = op.apply(pair.vector);
    double res = 0.0;
    for (int i = 0; i < op.node_count(); ++i) {
      const double d = mv[i] - pair.value * pair.vector[i];
      res += d * d;
    }
    res = std::sqrt(res);
    if (res > bound)
      throw convergence_error("dense eigenpair residual exceeds tolerance", res);
  }
  return out;
}

struct StageOutcome {
  bool converged = false;
  double value = 0.0;
  std::vector<double> vector;  // unit, in the deflated space
  double residual = 0.0;
};

// One deflated power-iteration stage: iterate x -> (A - sum_r m_r w_r w_r^T) x.
// Deterministic stall handling: once the projected iterations to reach
// stage_tol exceed the remaining budget, give up so the caller can fall back.
inline StageOutcome power_stage(const WalkOperator& op,
                                const std::vector<EigenPair>& deflated,
                                double stage_tol, double accept_tol,
                                long long budget, std::uint64_t stream_seed) {
  const int n = op.node_count();
  Rng rng(stream_seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  {
    const double len = norm(x);
    for (double& v : x) v /= len;
  }

  StageOutcome out;
  double checkpoint_res = std::numeric_limits<double>::infinity();
  constexpr long long kCheckEvery = 256;

  for (long long iter = 1; iter <= budget; ++iter) {
    std::vector<double> y = op.apply(x);
    for (const auto& pair : deflated) {
      const double c = pair.value * dot(pair.vector, x);
      for (int i = 0; i < n; ++i) y[i] -= c * pair.vector[i];
    }
    const double value = dot(x, y);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = y[i] - value * x[i];
      res += d * d;
    }
    res = std::sqrt(res);
    out.value = value;
    out.residual = res;
    if (res <= stage_tol) {
      out.converged = true;
      out.vector = std::move(x);
      return out;
    }

    if (iter % kCheckEvery == 0) {
      const double rate = std::pow(res / checkpoint_res, 1.0 / double(kCheckEvery));
      bool hopeless = rate >= 1.0;
      if (!hopeless && res > stage_tol) {
        const double projected = std::log(res / stage_tol) / -std::log(rate);
        hopeless = projected > double(budget - iter);
      }
      if (hopeless) {
        // A plateau below the contract tolerance is still a success; the
        // cushion between stage_tol and accept_tol only buys recovery slack.
        if (res <= accept_tol) {
          out.converged = true;
          out.vector = std::move(x);
          return out;
        }
        out.vector = std::move(x);
        return out;
      }
      checkpoint_res = res;
    }

    const double len = norm(y);
    if (len < 1e-280) {
      // The operator annihilates the current iterate; with res > stage_tol
      // this direction carries no usable eigenpair.
      out.vector = std::move(x);
      return out;
    }
    for (int i = 0; i < n; ++i) x[i] = y[i] / len;
  }
  out.vector = std::move(x);
  if (out.residual <= accept_tol) out.converged = true;
  return out;
}

inline std::vector<EigenPair> iterative_top_k(const WalkOperator& op,
                                              const EigenOptions& opts,
                                              bool* stalled, double* stall_residual) {
  const int n = op.node_count();
  const long long default_iters =
      static_cast<long long>(10.0 * double(n) * std::max(1.0, std::log(double(n))));
  long long budget = opts.max_iters > 0 ? opts.max_iters : default_iters;

  // Never spend more matrix-free work than one dense solve would cost when
  // the dense fallback is available.
  const bool dense_available =
      opts.policy == SolvePolicy::automatic && n <= kDenseMaxN;
  if (dense_available) {
    const double periter = 4.0 * double(op.graph().edge_count()) + 20.0 * double(n);
    const double dense_flops = 20.0 * double(n) * double(n) * double(n);
    budget = std::min(budget, static_cast<long long>(dense_flops / periter) + 1);
  }

  const double stage_tol = std::max(opts.tolerance / 100.0, 1e-13);
  std::vector<EigenPair> deflated;
  std::vector<EigenPair> recovered;

  for (int stage = 0; stage < opts.k; ++stage) {
    const StageOutcome outcome =
        power_stage(op, deflated, stage_tol, opts.tolerance, budget,
                    opts.seed.stream(Purpose::eigensolver, std::uint64_t(stage)));
    if (!outcome.converged) {
      *stalled = true;
      *stall_residual = outcome.residual;
      return {};
    }

    // Recover the original-space eigenvector by unwinding the deflation
    // chain: v <- v + m_r c / (value - m_r) w_r, skipping (near-)repeated
    // eigenvalues where the true coefficient is zero.
    std::vector<double> v = outcome.vector;
    for (int r = static_cast<int>(deflated.size()) - 1; r >= 0; --r) {
      const double gap = outcome.value - deflated[r].value;
      if (std::abs(gap) < 1e-8) continue;
      const double c = dot(deflated[r].vector, v);
      const double kappa = deflated[r].value * c / gap;
      for (int i = 0; i < n; ++i) v[i] += kappa * deflated[r].vector[i];
    }
    const double len = norm(v);
    if (len < 1e-280) {
      *stalled = true;
      *stall_residual = outcome.residual;
      return {};
    }
    for (double& t : v) t /= len;

    const auto mv = op.apply(v);
    const double value = dot(v, mv);  // least-squares eigenvalue for v
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = mv[i] - value * v[i];
      res += d * d;
    }
    res = std::sqrt(res);
    if (res > opts.tolerance) {
      *stalled = true;
      *stall_residual = res;
      return {};
    }

    deflated.push_back(EigenPair{outcome.value, outcome.vector});
    recovered.push_back(EigenPair{value, std::move(v)});
  }

  std::stable_sort(recovered.begin(), recovered.end(),
                   [](const EigenPair& a, const EigenPair& b) {
                     const double ma = std::abs(a.value), mb = std::abs(b.value);
                     if (ma != mb) return ma > mb;
                     return a.value > b.value;
                   });
  return recovered;
}

}  // namespace detail

// Top-k eigenpairs of the operator by |eigenvalue|. Iterative deflated power
// iteration for k <= 3, dense solve otherwise or when the iterative path
// stalls (policy automatic, n <= 5000). Every returned pair satisfies
// ||op(v) - value v|| <= max(tolerance, 1e-8 on the dense path).
inline std::vector<EigenPair> reference_eigen(const WalkOperator& op,
                                              const EigenOptions& opts = {}) {
  const int n = op.node_count();
  if (opts.k < 1 || opts.k > n)
    throw std::invalid_argument("reference_eigen: k must lie in [1, n]");
  if (!(opts.tolerance > 0.0))
    throw std::invalid_argument("reference_eigen: tolerance must be positive");

  const bool dense_ok = n <= detail::kDenseMaxN;
  if (opts.policy == SolvePolicy::dense_only) {
    if (!dense_ok)
      throw std::invalid_argument("reference_eigen: dense path requires n <= 5000");
    return detail::dense_top_k(op, opts.k, opts.tolerance);
  }
  if (opts.k > 3) {
    if (!dense_ok || opts.policy == SolvePolicy::iterative_only)
      throw std::invalid_argument(
          "reference_eigen: iterative path supports k <= 3; k > 3 needs the dense "
          "path (n <= 5000, policy not iterative_only)");
    return detail::dense_top_k(op, opts.k, opts.tolerance);
  }

  bool stalled = false;
  double stall_residual = 0.0;
  auto pairs = detail::iterative_top_k(op, opts, &stalled, &stall_residual);
  if (!stalled) return pairs;

  if (opts.policy == SolvePolicy::automatic && dense_ok)
    return detail::dense_top_k(op, opts.k, opts.tolerance);
  throw convergence_error("power iteration did not converge", stall_residual);
}

// Non-private spectral clustering: the sign cut of the leading eigenvector
// of W - J/n (equivalently v2 of the lazy walk). On disconnected graphs the
// leading eigenvalue is 1 and the cut separates components.
inline Cut spectral_cut(const Graph& g, double alpha = 0.5, EigenOptions opts = {}) {
  opts.k = 1;
  const WalkOperator op(g, WalkVariant::lazy_deflated, alpha);
  const auto pairs = reference_eigen(op, opts);
  return sign_cut(pairs[0].vector);
}

// Noise-free power-iteration clustering: T applications of the deflated lazy
// walk (or the plain lazy walk when deflate is false, the ablation that
// leaves the leading eigenvector in place) starting from the shared Gaussian
// vector, then the sign cut. Rescaling by the max entry each round keeps the
// iterate representable without touching signs.
inline Cut pic_cut(const Graph& g, int T, Seed seed, bool deflate = true,
                   double lazy_alpha = 0.5) {
  if (T < 0) throw std::invalid_argument("pic_cut: T must be >= 0");
  const WalkOperator op(
      g, deflate ? WalkVariant::lazy_deflated : WalkVariant::lazy, lazy_alpha);
  std::vector<double> x = gen_init_vector(g.node_count(), seed);
  for (int t = 0; t < T; ++t) {
    x = op.apply(x);
    double xmax = 0.0;
    for (double v : x) xmax = std::max(xmax, std::abs(v));
    if (xmax > 0.0)
      for (double& v : x) v /= xmax;
  }
  return sign_cut(x);
}

// Eigen-gap ratio g = (lambda_2(B) + 1) / (lambda_3(B) + 1), computed from
// the top two eigenvalues of W - J/n at alpha = 1/2: lambda_{i+1}(W) =
// lambda_i(W - J/n) and lambda_i(B) = 2 lambda_i(W) - 1, so the ratio
// collapses to lambda_1 / lambda_2 of the shifted operator. Infinite when
// the second eigenvalue vanishes. Computed non-privately.
inline double eigen_gap_g(const Graph& g, EigenOptions opts = {}) {
  if (g.node_count() < 3) throw std::invalid_argument("eigen_gap_g: needs n >= 3");
  opts.k = 2;
  const WalkOperator op(g, WalkVariant::lazy_deflated, 0.5);
  const auto pairs = reference_eigen(op, opts);
  const double top = pairs[0].value;
  const double second = pairs[1].value;
  if (second <= 1e-12) return std::numeric_limits<double>::infinity();
  return top / second;
}

// T = ceil(2 ln n / ln g), capped when a cap is given (cap <= 0 means none).
// The 1e-9 nudge keeps exact-integer ratios from rounding up one step.
inline int iteration_count(int n, double g, int cap = 0) {
  if (n < 1) throw std::invalid_argument("iteration_count: n must be >= 1");
  if (!(g > 1.0))
    throw std::domain_error(
        "iteration_count: measured eigen-gap g <= 1; supply an explicit "
        "iteration cap or override T");
  const double ratio = 2.0 * std::log(double(n)) / std::log(g);
  int t = static_cast<int>(std::ceil(ratio - 1e-9));
  if (t < 0) t = 0;
  if (cap > 0) t = std::min(t, cap);
  return t;
}

}  // namespace ldpic
