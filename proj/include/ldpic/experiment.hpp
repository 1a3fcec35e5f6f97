#pragma once

// Experiment harness: Cartesian sweeps over (method, n, (p,q), epsilon, seed)
// with per-cell result rows, mean/stddev aggregate rows, and a stable CSV
// dialect. Each cell is deterministic given its seed; wall_ms is the only
// column allowed to differ between reruns.
//
// Methods: ours (private protocol), rr (randomized-response baseline),
// spectral (non-private reference), pic-nonelim (private, no elimination
// term), pic-lazy-sweep (non-private power iteration across alphas; ignores
// epsilon).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ldpic/edge_list.hpp"
#include "ldpic/generators.hpp"
#include "ldpic/graph.hpp"
#include "ldpic/protocol.hpp"
#include "ldpic/rng.hpp"
#include "ldpic/rr.hpp"
#include "ldpic/spectral.hpp"
#include "ldpic/version.hpp"

namespace ldpic {

struct ExperimentSpec {
  std::vector<std::string> methods;  // ours | rr | spectral | pic-nonelim | pic-lazy-sweep
  // Graph source: a generated SBM family (n_list x pq_grid) or a fixed
  // edge-list file, optionally reduced to its k-core first.
  std::string graph_file;
  int kcore = 0;
  std::vector<int> n_list;
  std::vector<std::pair<double, double>> pq_grid;
  std::vector<double> eps_list;
  int seeds = 10;  // seed column values seed_base .. seed_base+seeds-1
  std::uint64_t seed_base = 0;
  int cap_iters = 50;   // T cap; 0 means uncapped
  int T_override = 0;   // 0 means derive T from the measured gap
  double clip_factor = 10.0;
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75};  // pic-lazy-sweep only
  std::string out_path;     // empty: no CSV file written
  bool allow_large = false; // randomized-response size-guard override
  bool noise_enabled = true;
  bool padding_enabled = true;
  int jobs = 1;
};

struct ResultRow {
  std::string method;
  int n = 0;
  std::optional<double> p, q;
  std::optional<double> epsilon;
  std::string seed;  // a number, or "mean"/"stddev" for aggregate rows
  std::optional<double> alpha;
  std::optional<double> T_used;
  std::optional<double> g_measured;
  std::optional<double> delta;
  std::optional<double> d_norm_spectral;
  std::optional<double> d_norm_truth;
  std::optional<double> d_norm_spectral_deg;
  std::optional<double> d_norm_truth_deg;
  std::optional<double> wall_ms;
  std::string error;
};

namespace detail {

inline const char* kCsvHeader =
    "method,n,p,q,epsilon,seed,alpha,T_used,g_measured,delta,d_norm_spectral,"
    "d_norm_truth,d_norm_spectral_deg,d_norm_truth_deg,wall_ms,error";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return std::string(buf);
}

inline std::string format_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

inline bool method_known(const std::string& m) {
  return m == "ours" || m == "rr" || m == "spectral" || m == "pic-nonelim" ||
         m == "pic-lazy-sweep";
}

inline bool method_uses_epsilon(const std::string& m) {
  return m == "ours" || m == "rr" || m == "pic-nonelim";
}

inline bool method_needs_gap(const std::string& m) {
  return m == "ours" || m == "pic-nonelim" || m == "pic-lazy-sweep";
}

// One prepared graph instance shared by every cell that references it.
struct Instance {
  Graph graph;
  std::optional<Cut> truth;
  Cut reference;
  std::optional<double> gap;
  std::optional<int> T;  // derived from gap and the cap, or the override
  int n = 0;
  std::optional<double> p, q;
  std::uint64_t seed_value = 0;
  std::string error;  // nonempty: preparation failed, cells inherit the error
};

inline void derive_T(Instance& inst, const ExperimentSpec& spec) {
  if (spec.T_override > 0) {
    inst.T = spec.T_override;
    return;
  }
  if (!inst.gap) return;
  int T;
  try {
    T = iteration_count(inst.n, *inst.gap, spec.cap_iters);
  } catch (const std::domain_error&) {
    // gap <= 1: the rule gives no finite T, fall back to the cap.
    T = spec.cap_iters > 0 ? spec.cap_iters : 50;
  }
  inst.T = std::max(1, T);
}

inline Instance prepare_generated(int n, double p, double q, std::uint64_t seed,
                                  bool need_gap, const ExperimentSpec& spec) {
  Instance inst;
  inst.n = n;
  inst.p = p;
  inst.q = q;
  inst.seed_value = seed;
  try {
    SbmParams params{n / 2, n - n / 2, p, q};
    GraphSample sample = gen_sbm(params, Seed{seed});
    inst.graph = std::move(sample.graph);
    inst.truth = std::move(sample.truth);
    EigenOptions opts;
    opts.seed = Seed{seed};
    inst.reference = spectral_cut(inst.graph, 0.5, opts);
    if (need_gap) {
      inst.gap = eigen_gap_g(inst.graph, opts);
      derive_T(inst, spec);
    } else if (spec.T_override > 0) {
      inst.T = spec.T_override;
    }
  } catch (const std::exception& e) {
    inst.error = e.what();
  }
  return inst;
}

inline Instance prepare_loaded(const ExperimentSpec& spec, bool need_gap) {
  Instance inst;
  inst.seed_value = spec.seed_base;
  EdgeListResult loaded = read_edge_list_file(spec.graph_file);
  Graph g = std::move(loaded.graph);
  if (spec.kcore > 0) {
    KCoreResult core = k_core(g, spec.kcore);
    g = std::move(core.core);
  }
  inst.n = g.node_count();
  inst.graph = std::move(g);
  try {
    EigenOptions opts;
    opts.seed = Seed{spec.seed_base};
    inst.reference = spectral_cut(inst.graph, 0.5, opts);
    if (need_gap) {
      inst.gap = eigen_gap_g(inst.graph, opts);
      derive_T(inst, spec);
    } else if (spec.T_override > 0) {
      inst.T = spec.T_override;
    }
  } catch (const std::exception& e) {
    inst.error = e.what();
  }
  return inst;
}

inline void fill_metrics(ResultRow& row, const Instance& inst, const Cut& cut) {
  row.d_norm_spectral = d_norm(inst.graph, cut, inst.reference);
  row.d_norm_spectral_deg = d_norm_degree_weighted(inst.graph, cut, inst.reference);
  if (inst.truth) {
    row.d_norm_truth = d_norm(inst.graph, cut, *inst.truth);
    row.d_norm_truth_deg = d_norm_degree_weighted(inst.graph, cut, *inst.truth);
  }
}

// Runs one (method, instance, epsilon/alpha, seed) cell.
inline ResultRow run_cell(const std::string& method, const Instance& inst,
                          std::optional<double> eps, std::optional<double> alpha,
                          std::uint64_t seed, const ExperimentSpec& spec) {
  ResultRow row;
  row.method = method;
  row.n = inst.n;
  row.p = inst.p;
  row.q = inst.q;
  row.epsilon = eps;
  row.seed = std::to_string(seed);
  row.alpha = alpha;
  row.g_measured = inst.gap;
  if (!inst.error.empty()) {
    row.error = inst.error;
    return row;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (method == "spectral") {
      fill_metrics(row, inst, inst.reference);
    } else if (method == "rr") {
      const Cut cut = rr_spectral_cut(inst.graph, *eps, Seed{seed}, spec.allow_large);
      fill_metrics(row, inst, cut);
    } else if (method == "pic-lazy-sweep") {
      const int T = inst.T.value_or(50);
      row.T_used = static_cast<double>(T);
      const Cut cut = pic_cut(inst.graph, T, Seed{seed}, true, *alpha);
      fill_metrics(row, inst, cut);
    } else {  // ours / pic-nonelim
      ProtocolConfig cfg;
      cfg.epsilon = *eps;
      cfg.T = inst.T.value_or(50);
      cfg.clip_factor = spec.clip_factor;
      cfg.seed = Seed{seed};
      cfg.eliminate = method == "ours";
      cfg.noise_enabled = spec.noise_enabled;
      cfg.padding_enabled = spec.padding_enabled;
      cfg.allow_nonprivate = !spec.noise_enabled || !spec.padding_enabled;
      row.T_used = static_cast<double>(cfg.T);
      const ProtocolResult res = run_protocol(inst.graph, cfg);
      row.delta = res.delta;
      fill_metrics(row, inst, res.cut);
    }
  } catch (const too_sparse_error& e) {
    // Failed-run sentinel: the protocol produced nothing, score it as a fully
    // wrong cut so size sweeps can still be aggregated.
    row.delta = e.delta();
    row.d_norm_spectral = 1.0;
    row.d_norm_truth = inst.truth ? std::optional<double>(1.0) : std::nullopt;
    row.d_norm_spectral_deg = 1.0;
    row.d_norm_truth_deg = inst.truth ? std::optional<double>(1.0) : std::nullopt;
    row.error = "too_sparse";
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  const auto stop = std::chrono::steady_clock::now();
  row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return row;
}

struct Accumulator {
  std::vector<double> values;
  void add(const std::optional<double>& v) {
    if (v) values.push_back(*v);
  }
  std::optional<double> mean() const {
    if (values.empty()) return std::nullopt;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  std::optional<double> stddev() const {
    if (values.empty()) return std::nullopt;
    if (values.size() == 1) return 0.0;
    const double m = *mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

// Appends mean and stddev rows for one group of seed rows.
inline void append_aggregates(std::vector<ResultRow>& rows, std::size_t group_begin) {
  const std::size_t group_end = rows.size();
  if (group_begin >= group_end) return;
  Accumulator t, g, d, ns, nt, nsd, ntd, w;
  int failed = 0;
  for (std::size_t k = group_begin; k < group_end; ++k) {
    const ResultRow& r = rows[k];
    t.add(r.T_used);
    g.add(r.g_measured);
    d.add(r.delta);
    ns.add(r.d_norm_spectral);
    nt.add(r.d_norm_truth);
    nsd.add(r.d_norm_spectral_deg);
    ntd.add(r.d_norm_truth_deg);
    w.add(r.wall_ms);
    if (!r.error.empty()) ++failed;
  }
  ResultRow base = rows[group_begin];
  base.error = failed > 0 ? std::to_string(failed) + "_failed" : "";

  ResultRow mean = base;
  mean.seed = "mean";
  mean.T_used = t.mean();
  mean.g_measured = g.mean();
  mean.delta = d.mean();
  mean.d_norm_spectral = ns.mean();
  mean.d_norm_truth = nt.mean();
  mean.d_norm_spectral_deg = nsd.mean();
  mean.d_norm_truth_deg = ntd.mean();
  mean.wall_ms = w.mean();
  rows.push_back(std::move(mean));

  ResultRow sd = base;
  sd.seed = "stddev";
  sd.T_used = t.stddev();
  sd.g_measured = g.stddev();
  sd.delta = d.stddev();
  sd.d_norm_spectral = ns.stddev();
  sd.d_norm_truth = nt.stddev();
  sd.d_norm_spectral_deg = nsd.stddev();
  sd.d_norm_truth_deg = ntd.stddev();
  sd.wall_ms = w.stddev();
  rows.push_back(std::move(sd));
}

}  // namespace detail

inline void validate_spec(const ExperimentSpec& spec) {
  if (spec.methods.empty())
    throw std::invalid_argument("experiment: at least one method required");
  for (const auto& m : spec.methods)
    if (!detail::method_known(m))
      throw std::invalid_argument("experiment: unknown method '" + m + "'");
  const bool generated = spec.graph_file.empty();
  if (generated && (spec.n_list.empty() || spec.pq_grid.empty()))
    throw std::invalid_argument(
        "experiment: need a graph source (an edge-list file, or n plus a (p,q) grid)");
  if (spec.seeds < 1) throw std::invalid_argument("experiment: need at least one seed");
  bool needs_eps = false;
  for (const auto& m : spec.methods) needs_eps |= detail::method_uses_epsilon(m);
  if (needs_eps && spec.eps_list.empty())
    throw std::invalid_argument("experiment: methods require an epsilon list");
  for (double e : spec.eps_list)
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::invalid_argument("experiment: epsilon values must be positive");
  bool sweeps = false;
  for (const auto& m : spec.methods) sweeps |= (m == "pic-lazy-sweep");
  if (sweeps && spec.alphas.empty())
    throw std::invalid_argument("experiment: pic-lazy-sweep requires alphas");
  for (double a : spec.alphas)
    if (!(a >= 0.0 && a < 1.0))
      throw std::invalid_argument("experiment: alphas must lie in [0, 1)");
}

inline std::string render_csv(const ExperimentSpec& spec, const std::vector<ResultRow>& rows);

inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  bool need_gap = false;
  for (const auto& m : spec.methods) need_gap |= detail::method_needs_gap(m);

  // Prepare every graph instance once, sequentially and deterministically.
  using InstanceKey = std::tuple<int, double, double, std::uint64_t>;
  std::map<InstanceKey, detail::Instance> instances;
  const bool generated = spec.graph_file.empty();
  detail::Instance loaded;
  if (!generated) {
    loaded = detail::prepare_loaded(spec, need_gap);
  } else {
    for (int n : spec.n_list)
      for (const auto& [p, q] : spec.pq_grid)
        for (int s = 0; s < spec.seeds; ++s) {
          const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(s);
          instances.emplace(InstanceKey{n, p, q, seed},
                            detail::prepare_generated(n, p, q, seed, need_gap, spec));
        }
  }
  const auto instance_for = [&](int n, double p, double q,
                                std::uint64_t seed) -> const detail::Instance& {
    if (!generated) return loaded;
    return instances.at(InstanceKey{n, p, q, seed});
  };

  // Flatten the sweep into groups; each group is one aggregate unit of
  // `seeds` cells.
  struct Group {
    std::string method;
    int n;
    double p, q;
    std::optional<double> eps;
    std::optional<double> alpha;
  };
  std::vector<Group> groups;
  const std::vector<int> n_iter = generated ? spec.n_list : std::vector<int>{loaded.n};
  const std::vector<std::pair<double, double>> pq_iter =
      generated ? spec.pq_grid : std::vector<std::pair<double, double>>{{0.0, 0.0}};
  for (const auto& method : spec.methods)
    for (int n : n_iter)
      for (const auto& [p, q] : pq_iter) {
        if (method == "pic-lazy-sweep") {
          for (double a : spec.alphas) groups.push_back({method, n, p, q, std::nullopt, a});
        } else if (detail::method_uses_epsilon(method)) {
          for (double e : spec.eps_list) groups.push_back({method, n, p, q, e, std::nullopt});
        } else {
          groups.push_back({method, n, p, q, std::nullopt, std::nullopt});
        }
      }

  // Cells within a group are independent; run them (possibly) in parallel,
  // then assemble rows in deterministic order.
  std::vector<std::vector<ResultRow>> cell_rows(groups.size());
  for (auto& v : cell_rows) v.resize(static_cast<std::size_t>(spec.seeds));
  std::atomic<std::size_t> next{0};
  const std::size_t total = groups.size() * static_cast<std::size_t>(spec.seeds);
  const auto worker = [&]() {
    for (std::size_t c; (c = next.fetch_add(1)) < total;) {
      const std::size_t gi = c / static_cast<std::size_t>(spec.seeds);
      const int s = static_cast<int>(c % static_cast<std::size_t>(spec.seeds));
      const Group& grp = groups[gi];
      const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(s);
      const detail::Instance& inst = instance_for(grp.n, grp.p, grp.q, seed);
      cell_rows[gi][static_cast<std::size_t>(s)] =
          detail::run_cell(grp.method, inst, grp.eps, grp.alpha, seed, spec);
    }
  };
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  rows.reserve(total + 2 * groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const std::size_t begin = rows.size();
    for (auto& r : cell_rows[gi]) rows.push_back(std::move(r));
    detail::append_aggregates(rows, begin);
  }

  if (!spec.out_path.empty()) {
    std::ofstream os(spec.out_path);
    if (!os) throw std::runtime_error("experiment: cannot open " + spec.out_path);
    os << render_csv(spec, rows);
    if (!os) throw std::runtime_error("experiment: write failed for " + spec.out_path);
  }
  return rows;
}

inline std::string render_csv(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "# ldpic " << kVersion << " methods=";
  for (std::size_t i = 0; i < spec.methods.size(); ++i)
    os << (i ? "," : "") << spec.methods[i];
  if (spec.graph_file.empty()) {
    os << " n=";
    for (std::size_t i = 0; i < spec.n_list.size(); ++i)
      os << (i ? "," : "") << spec.n_list[i];
    os << " pq=";
    for (std::size_t i = 0; i < spec.pq_grid.size(); ++i)
      os << (i ? ";" : "") << detail::format_number(spec.pq_grid[i].first) << ","
         << detail::format_number(spec.pq_grid[i].second);
  } else {
    os << " graph=" << spec.graph_file;
    if (spec.kcore > 0) os << " kcore=" << spec.kcore;
  }
  os << " eps=";
  for (std::size_t i = 0; i < spec.eps_list.size(); ++i)
    os << (i ? "," : "") << detail::format_number(spec.eps_list[i]);
  os << " seeds=" << spec.seeds << " seed_base=" << spec.seed_base
     << " cap_iters=" << spec.cap_iters << " T_override=" << spec.T_override
     << " clip_factor=" << detail::format_number(spec.clip_factor)
     << " noise=" << (spec.noise_enabled ? 1 : 0)
     << " padding=" << (spec.padding_enabled ? 1 : 0) << "\n";
  os << detail::kCsvHeader << "\n";
  for (const ResultRow& r : rows) {
    os << r.method << ',' << r.n << ',' << detail::format_cell(r.p) << ','
       << detail::format_cell(r.q) << ',' << detail::format_cell(r.epsilon) << ','
       << r.seed << ',' << detail::format_cell(r.alpha) << ','
       << detail::format_cell(r.T_used) << ',' << detail::format_cell(r.g_measured)
       << ',' << detail::format_cell(r.delta) << ','
       << detail::format_cell(r.d_norm_spectral) << ','
       << detail::format_cell(r.d_norm_truth) << ','
       << detail::format_cell(r.d_norm_spectral_deg) << ','
       << detail::format_cell(r.d_norm_truth_deg) << ','
       << detail::format_cell(r.wall_ms) << ',' << r.error << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// summarize: recompute per-group statistics from the raw seed rows of a CSV
// produced by run_experiment.

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline std::optional<double> parse_cell(const std::string& cell, std::size_t line_no) {
  if (cell.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw parse_error("summarize: bad numeric cell '" + cell + "'", line_no);
  }
}

}  // namespace detail

inline std::string summarize_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  struct Key {
    std::string method, n, p, q, eps, alpha;
    bool operator<(const Key& o) const {
      return std::tie(method, n, p, q, eps, alpha) <
             std::tie(o.method, o.n, o.p, o.q, o.eps, o.alpha);
    }
  };
  struct Stats {
    detail::Accumulator spectral, truth;
    int runs = 0;
    std::size_t first_line = 0;
  };
  std::map<Key, Stats> table;
  std::vector<Key> order;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != detail::kCsvHeader)
        throw parse_error("summarize: unexpected header", line_no);
      header_seen = true;
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 16)
      throw parse_error("summarize: expected 16 cells, got " + std::to_string(cells.size()),
                        line_no);
    if (cells[5] == "mean" || cells[5] == "stddev") continue;  // recompute from raw rows
    Key key{cells[0], cells[1], cells[2], cells[3], cells[4], cells[6]};
    auto [it, inserted] = table.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.first_line = line_no;
    }
    it->second.runs += 1;
    it->second.spectral.add(detail::parse_cell(cells[10], line_no));
    it->second.truth.add(detail::parse_cell(cells[11], line_no));
  }
  if (!header_seen && line_no > 0)
    throw parse_error("summarize: no header row found", line_no);

  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %6s %6s %6s %6s %6s %5s %19s %19s", "method", "n",
                "p", "q", "eps", "alpha", "runs", "d_norm_spectral", "d_norm_truth");
  os << buf << "\n";
  const auto stat_cell = [](const detail::Accumulator& acc) {
    if (acc.values.empty()) return std::string("-");
    char cell[64];
    std::snprintf(cell, sizeof cell, "%.4f+/-%.4f", *acc.mean(), *acc.stddev());
    return std::string(cell);
  };
  const auto or_dash = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
  for (const Key& key : order) {
    const Stats& st = table.at(key);
    std::snprintf(buf, sizeof buf, "%-16s %6s %6s %6s %6s %6s %5d %19s %19s",
                  key.method.c_str(), key.n.c_str(), or_dash(key.p).c_str(),
                  or_dash(key.q).c_str(), or_dash(key.eps).c_str(),
                  or_dash(key.alpha).c_str(), st.runs, stat_cell(st.spectral).c_str(),
                  stat_cell(st.truth).c_str());
    os << buf << "\n";
  }
  return os.str();
}

inline std::string summarize_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("summarize: cannot open " + path);
  return summarize_csv(is);
}

}  // namespace ldpic
