#pragma once

// The interactive edge-LDP clustering protocol: degree reports, the padding
// threshold delta, asymmetric edge padding, T noisy deflated-lazy-walk rounds
// with clipping, and the final sign cut. Budget split: epsilon/10 for the
// degree report, (9/10) epsilon/T per round, totalling epsilon exactly.
//
// The phases are exposed as free functions over UserState/ServerState so the
// pieces can be driven (and attacked) independently in tests; run_protocol is
// the orchestrator that executes the canonical schedule and keeps a full
// message transcript.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ldpic/generators.hpp"
#include "ldpic/graph.hpp"
#include "ldpic/rng.hpp"
#include "ldpic/version.hpp"

namespace ldpic {

// Phase-order violations (a report sent twice, a round consumed out of order,
// aggregation with a missing index). These are caller bugs, not data errors.
class protocol_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// delta <= 0 with noise enabled: the per-round noise scale divides by delta,
// so the protocol cannot run. Carries the offending delta for diagnostics.
class too_sparse_error : public std::domain_error {
 public:
  too_sparse_error(const std::string& what, double delta)
      : std::domain_error(what), delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

struct ProtocolConfig {
  double epsilon = 1.0;
  int T = 10;
  double clip_factor = 10.0;  // c >= 1
  double zeta = 0.0;          // 0 -> default 1/n, resolved at run time
  Seed seed{0};
  bool noise_enabled = true;   // test hook, non-private when false
  bool padding_enabled = true; // test hook, non-private when false
  bool eliminate = true;       // false drops the -mean(x) term (ablation)
  bool allow_nonprivate = false;  // must be set to disable noise or padding

  double resolved_zeta(int n) const { return zeta > 0.0 ? zeta : 1.0 / n; }
};

inline void validate_config(const ProtocolConfig& cfg, int n) {
  if (n < 2) throw std::invalid_argument("protocol: need at least 2 users");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
    throw std::invalid_argument("protocol: epsilon must be positive and finite");
  if (cfg.T < 1) throw std::invalid_argument("protocol: T must be >= 1");
  if (!(cfg.clip_factor >= 1.0))
    throw std::invalid_argument("protocol: clip_factor must be >= 1");
  const double z = cfg.resolved_zeta(n);
  if (!(z > 0.0 && z < 1.0))
    throw std::invalid_argument("protocol: zeta must lie in (0, 1)");
  if ((!cfg.noise_enabled || !cfg.padding_enabled) && !cfg.allow_nonprivate)
    throw std::invalid_argument(
        "protocol: noise and padding may only be disabled together with "
        "allow_nonprivate (non-private test configuration)");
}

// ---------------------------------------------------------------------------
// Messages.

struct NoisyDegree {
  int i;
  double value;
};
struct DeltaBroadcast {
  double delta;
};
struct VectorBroadcast {
  int t;  // 0 is the init vector, rounds are 1..T
  std::vector<double> x;
};
struct UserValue {
  int t;
  int i;
  double x;
};

using RoundMessage = std::variant<NoisyDegree, DeltaBroadcast, VectorBroadcast, UserValue>;
using Transcript = std::vector<RoundMessage>;

// ---------------------------------------------------------------------------
// Ledger.

class PrivacyLedger {
 public:
  void charge(std::string label, double amount) {
    entries_.emplace_back(std::move(label), amount);
    total_ += amount;
  }
  double total() const { return total_; }
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
  double total_ = 0.0;
};

// ---------------------------------------------------------------------------
// Per-user state: the private adjacency view. Only padding may grow the view;
// flip_adjacency_bit is a test hook for the sensitivity premise and mutates
// the neighbor set while leaving the cached degree fixed, matching the
// accounting that holds d_i constant across neighboring databases.

class UserState {
 public:
  UserState(int index, const Graph& g)
      : index_(index),
        n_(g.node_count()),
        neighbors_(g.neighbors(index).begin(), g.neighbors(index).end()),
        degree_(g.degree(index)) {}

  int index() const { return index_; }
  int degree() const { return degree_; }
  const std::vector<int>& view() const { return neighbors_; }
  bool padding_saturated() const { return padding_saturated_; }
  int rounds_done() const { return rounds_done_; }

  bool sees(int j) const {
    return std::binary_search(neighbors_.begin(), neighbors_.end(), j);
  }

  void flip_adjacency_bit(int j) {
    if (j == index_ || j < 0 || j >= n_)
      throw std::invalid_argument("flip_adjacency_bit: bad target node");
    auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), j);
    if (it != neighbors_.end() && *it == j)
      neighbors_.erase(it);
    else
      neighbors_.insert(it, j);
  }

 private:
  friend NoisyDegree user_report_degree(UserState&, const ProtocolConfig&);
  friend void user_pad_edges(UserState&, const DeltaBroadcast&, const ProtocolConfig&);
  friend UserValue user_iterate(UserState&, const VectorBroadcast&, const DeltaBroadcast&,
                                const ProtocolConfig&);

  int index_;
  int n_;
  std::vector<int> neighbors_;
  int degree_;
  bool reported_ = false;
  bool padded_ = false;
  bool padding_saturated_ = false;
  int rounds_done_ = 0;
};

// The noise-free line-6 value: (1/2) x_i + (1/2) sum_{j in view} x_j / d_i
// - mean(x). Same expression tree as WalkOperator::apply so the noise-off
// protocol reproduces it bit for bit.
inline double user_walk_value(const UserState& u, const std::vector<double>& x,
                              bool eliminate = true) {
  if (static_cast<int>(x.size()) == 0)
    throw std::invalid_argument("user_walk_value: empty broadcast");
  if (u.degree() < 1)
    throw std::domain_error("user_walk_value: user " + std::to_string(u.index()) +
                            " has degree 0");
  double acc = 0.0;
  for (int j : u.view()) acc += x[j];
  const double walk = acc / static_cast<double>(u.degree());
  double w = 0.5 * x[u.index()] + (1.0 - 0.5) * walk;
  if (eliminate)
    w -= std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  return w;
}

// ---------------------------------------------------------------------------
// Server state: aggregates only. Never holds an adjacency bit.

class ServerState {
 public:
  ServerState(int n, int T) : n_(n), T_(T) {}

  int n() const { return n_; }
  int rounds_T() const { return T_; }
  int round() const { return t_; }
  bool delta_known() const { return delta_known_; }
  double delta() const {
    if (!delta_known_) throw protocol_error("server: delta not computed yet");
    return delta_;
  }
  const std::vector<double>& x() const { return x_; }
  const PrivacyLedger& ledger() const { return ledger_; }

 private:
  friend DeltaBroadcast server_compute_delta(ServerState&, const std::vector<NoisyDegree>&,
                                             const ProtocolConfig&);
  friend VectorBroadcast server_broadcast_init(ServerState&, const ProtocolConfig&);
  friend VectorBroadcast server_aggregate(ServerState&, const std::vector<UserValue>&,
                                          const ProtocolConfig&);
  friend Cut server_extract_cut(const ServerState&);

  int n_;
  int T_;
  int t_ = 0;          // completed iteration rounds
  bool delta_known_ = false;
  bool init_done_ = false;
  double delta_ = 0.0;
  std::vector<double> x_;
  PrivacyLedger ledger_;
};

// ---------------------------------------------------------------------------
// Phase 0: each user publishes d_i + Lap(10/epsilon). Budget epsilon/10.

inline NoisyDegree user_report_degree(UserState& u, const ProtocolConfig& cfg) {
  if (u.reported_)
    throw protocol_error("degree phase: user " + std::to_string(u.index()) +
                         " already reported");
  u.reported_ = true;
  double value = static_cast<double>(u.degree_);
  if (cfg.noise_enabled) {
    Rng rng(cfg.seed.stream(Purpose::user_noise, static_cast<std::uint64_t>(u.index_), 0));
    value += rng.laplace(10.0 / cfg.epsilon);
  }
  return NoisyDegree{u.index_, value};
}

// Phase 1: delta = min_i d~_i - (10/epsilon) ln(n / (2 zeta)).

inline DeltaBroadcast server_compute_delta(ServerState& s,
                                           const std::vector<NoisyDegree>& reports,
                                           const ProtocolConfig& cfg) {
  if (s.delta_known_) throw protocol_error("delta phase: delta already computed");
  if (static_cast<int>(reports.size()) != s.n_)
    throw protocol_error("delta phase: expected " + std::to_string(s.n_) +
                         " degree reports, got " + std::to_string(reports.size()));
  std::vector<char> seen(s.n_, 0);
  double min_report = reports.front().value;
  for (const auto& r : reports) {
    if (r.i < 0 || r.i >= s.n_ || seen[r.i])
      throw protocol_error("delta phase: bad or duplicate report index " +
                           std::to_string(r.i));
    seen[r.i] = 1;
    min_report = std::min(min_report, r.value);
  }
  const double offset =
      (10.0 / cfg.epsilon) * std::log(static_cast<double>(s.n_) / (2.0 * cfg.resolved_zeta(s.n_)));
  s.delta_ = min_report - offset;
  s.delta_known_ = true;
  s.ledger_.charge("degree_report", cfg.epsilon / 10.0);
  return DeltaBroadcast{s.delta_};
}

// Phase 2: while d_i < delta the user adds a uniformly random missing edge to
// its own view only (the counterpart user never learns of it).

inline void user_pad_edges(UserState& u, const DeltaBroadcast& delta,
                           const ProtocolConfig& cfg) {
  if (u.padded_)
    throw protocol_error("padding phase: user " + std::to_string(u.index()) +
                         " already padded");
  u.padded_ = true;
  if (!cfg.padding_enabled) return;
  Rng rng(cfg.seed.stream(Purpose::padding, static_cast<std::uint64_t>(u.index_)));
  while (static_cast<double>(u.degree_) < delta.delta) {
    if (u.degree_ >= u.n_ - 1) {
      u.padding_saturated_ = true;  // row already complete, cannot reach delta
      break;
    }
    int j;
    do {
      j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(u.n_)));
    } while (j == u.index_ || u.sees(j));
    u.neighbors_.insert(std::lower_bound(u.neighbors_.begin(), u.neighbors_.end(), j), j);
    ++u.degree_;
  }
}

// Phase 3: the server publishes the standard-normal init vector. Public
// randomness, no privacy charge.

inline VectorBroadcast server_broadcast_init(ServerState& s, const ProtocolConfig& cfg) {
  if (!s.delta_known_) throw protocol_error("init phase: delta not computed yet");
  if (s.init_done_) throw protocol_error("init phase: init vector already broadcast");
  s.init_done_ = true;
  s.x_ = gen_init_vector(s.n_, cfg.seed);
  return VectorBroadcast{0, s.x_};
}

// Rounds 1..T, user side: noisy clipped walk value. The noise scale is
// (5T / (9 epsilon)) max_j |x_j| / delta and the clip bound is clip_factor
// times that. With noise disabled both the noise and the clipping are
// skipped, leaving the exact walk arithmetic.

inline UserValue user_iterate(UserState& u, const VectorBroadcast& b,
                              const DeltaBroadcast& delta, const ProtocolConfig& cfg) {
  if (b.t != u.rounds_done_)
    throw protocol_error("round " + std::to_string(u.rounds_done_ + 1) + ": user " +
                         std::to_string(u.index_) + " got broadcast for round " +
                         std::to_string(b.t));
  if (static_cast<int>(b.x.size()) != u.n_)
    throw protocol_error("round " + std::to_string(b.t + 1) + ": broadcast length " +
                         std::to_string(b.x.size()) + " != n");
  const int t = b.t + 1;
  double w = user_walk_value(u, b.x, cfg.eliminate);
  if (cfg.noise_enabled) {
    if (!(delta.delta > 0.0))
      throw too_sparse_error("round " + std::to_string(t) +
                                 ": delta <= 0, noise scale undefined (graph too "
                                 "sparse for this epsilon)",
                             delta.delta);
    double max_abs = 0.0;
    for (double v : b.x) max_abs = std::max(max_abs, std::abs(v));
    const double scale =
        (5.0 * static_cast<double>(cfg.T) / (9.0 * cfg.epsilon)) * max_abs / delta.delta;
    if (scale > 0.0) {
      Rng rng(cfg.seed.stream(Purpose::user_noise, static_cast<std::uint64_t>(u.index_),
                              static_cast<std::uint64_t>(t)));
      w += rng.laplace(scale);
    }
    const double clip = cfg.clip_factor * scale;
    w = std::clamp(w, -clip, clip);
  }
  ++u.rounds_done_;
  return UserValue{t, u.index_, w};
}

// Rounds 1..T, server side: assemble x^(t) in index order. Budget
// (9/10) epsilon / T per round.

inline VectorBroadcast server_aggregate(ServerState& s, const std::vector<UserValue>& values,
                                        const ProtocolConfig& cfg) {
  if (!s.init_done_) throw protocol_error("aggregate: init vector not broadcast yet");
  if (s.t_ >= s.T_) throw protocol_error("aggregate: all T rounds already done");
  const int t = s.t_ + 1;
  std::vector<char> seen(s.n_, 0);
  std::vector<double> x(s.n_, 0.0);
  for (const auto& v : values) {
    if (v.t != t)
      throw protocol_error("round " + std::to_string(t) + ": value tagged for round " +
                           std::to_string(v.t));
    if (v.i < 0 || v.i >= s.n_ || seen[v.i])
      throw protocol_error("round " + std::to_string(t) + ": bad or duplicate index " +
                           std::to_string(v.i));
    seen[v.i] = 1;
    x[v.i] = v.x;
  }
  for (int i = 0; i < s.n_; ++i)
    if (!seen[i])
      throw protocol_error("round " + std::to_string(t) + ": missing index " +
                           std::to_string(i));
  s.x_ = std::move(x);
  s.t_ = t;
  s.ledger_.charge("iteration_" + std::to_string(t), 0.9 * cfg.epsilon / cfg.T);
  return VectorBroadcast{t, s.x_};
}

inline Cut server_extract_cut(const ServerState& s) {
  if (s.t_ != s.T_)
    throw protocol_error("extract_cut: called after round " + std::to_string(s.t_) +
                         " of " + std::to_string(s.T_));
  return sign_cut(s.x_);
}

// ---------------------------------------------------------------------------
// Orchestrator.

struct ProtocolResult {
  Cut cut;
  PrivacyLedger ledger;
  Transcript transcript;
  double delta = 0.0;
  std::vector<int> saturated_users;  // padding could not reach delta (row full)
};

inline ProtocolResult run_protocol(const Graph& g, const ProtocolConfig& cfg) {
  const int n = g.node_count();
  validate_config(cfg, n);

  std::vector<UserState> users;
  users.reserve(n);
  for (int i = 0; i < n; ++i) users.emplace_back(i, g);
  ServerState server(n, cfg.T);
  ProtocolResult out;

  std::vector<NoisyDegree> reports;
  reports.reserve(n);
  for (auto& u : users) {
    reports.push_back(user_report_degree(u, cfg));
    out.transcript.push_back(reports.back());
  }
  const DeltaBroadcast delta = server_compute_delta(server, reports, cfg);
  out.transcript.push_back(delta);
  out.delta = delta.delta;
  if (cfg.noise_enabled && !(delta.delta > 0.0))
    throw too_sparse_error(
        "delta phase: delta = " + std::to_string(delta.delta) +
            " <= 0 (graph too sparse for epsilon = " + std::to_string(cfg.epsilon) + ")",
        delta.delta);

  for (auto& u : users) {
    user_pad_edges(u, delta, cfg);
    if (u.padding_saturated()) out.saturated_users.push_back(u.index());
  }
  for (const auto& u : users)
    if (u.degree() < 1)
      throw std::domain_error("padding phase: user " + std::to_string(u.index()) +
                              " still has degree 0");

  VectorBroadcast broadcast = server_broadcast_init(server, cfg);
  out.transcript.push_back(broadcast);

  std::vector<UserValue> values(n, UserValue{0, 0, 0.0});
  for (int t = 1; t <= cfg.T; ++t) {
    // Users are mutually independent within a round; sequential here.
    for (int i = 0; i < n; ++i) {
      values[i] = user_iterate(users[i], broadcast, delta, cfg);
      out.transcript.push_back(values[i]);
    }
    broadcast = server_aggregate(server, values, cfg);
    out.transcript.push_back(broadcast);
  }

  out.cut = server_extract_cut(server);
  out.ledger = server.ledger();
  return out;
}

// ---------------------------------------------------------------------------
// Transcript dump: one line per message, config echo up front.

inline void write_transcript(std::ostream& os, const Transcript& transcript,
                             const ProtocolConfig& cfg, int n) {
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "# ldpic " << kVersion << " transcript n=" << n << " epsilon=" << num(cfg.epsilon)
     << " T=" << cfg.T << " clip_factor=" << num(cfg.clip_factor)
     << " zeta=" << num(cfg.resolved_zeta(n)) << " seed=" << cfg.seed.value
     << " noise=" << (cfg.noise_enabled ? 1 : 0)
     << " padding=" << (cfg.padding_enabled ? 1 : 0)
     << " eliminate=" << (cfg.eliminate ? 1 : 0) << "\n";
  for (const auto& msg : transcript) {
    if (const auto* d = std::get_if<NoisyDegree>(&msg)) {
      os << "degree round=0 sender=" << d->i << " payload=" << num(d->value) << "\n";
    } else if (const auto* del = std::get_if<DeltaBroadcast>(&msg)) {
      os << "delta round=0 sender=server payload=" << num(del->delta) << "\n";
    } else if (const auto* b = std::get_if<VectorBroadcast>(&msg)) {
      os << "broadcast round=" << b->t << " sender=server payload=";
      for (std::size_t k = 0; k < b->x.size(); ++k) {
        if (k) os << ',';
        os << num(b->x[k]);
      }
      os << "\n";
    } else if (const auto* v = std::get_if<UserValue>(&msg)) {
      os << "value round=" << v->t << " sender=" << v->i << " payload=" << num(v->x) << "\n";
    }
  }
}

}  // namespace ldpic
