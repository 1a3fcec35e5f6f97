// ldpic command-line harness: graph generation, experiment sweeps, CSV
// summaries, and k-core extraction over the edge-list file format.
//
// Exit codes: 0 success, 1 usage, 2 input parse failure, 3 domain error
// (bad parameters, too-sparse aborts), 4 eigensolver non-convergence,
// 5 file I/O failure, 6 resource guard refusal.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldpic/edge_list.hpp"
#include "ldpic/experiment.hpp"
#include "ldpic/generators.hpp"
#include "ldpic/graph.hpp"
#include "ldpic/protocol.hpp"
#include "ldpic/rr.hpp"
#include "ldpic/spectral.hpp"
#include "ldpic/version.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitIo = 5;
constexpr int kExitResource = 6;

struct GenArgs {
  std::string type = "sbm";
  int n1 = 0, n2 = 0, n3 = 0, n4 = 0;
  double p = 0.0, q = 0.0;
  double alpha_pareto = 2.5, theta_min = 1.0, theta_max = 0.0;
  std::uint64_t seed = 0;
  std::string out, truth_out;
};

int cmd_gen(const GenArgs& a) {
  ldpic::GraphSample sample;
  if (a.type == "sbm") {
    sample = ldpic::gen_sbm({a.n1, a.n2, a.p, a.q}, ldpic::Seed{a.seed});
  } else if (a.type == "bsbm") {
    sample = ldpic::gen_bsbm({a.n1, a.n2, a.n3, a.n4, a.p, a.q}, ldpic::Seed{a.seed});
  } else {
    ldpic::DcbmParams params;
    params.n1 = a.n1;
    params.n2 = a.n2;
    params.p = a.p;
    params.q = a.q;
    params.alpha = a.alpha_pareto;
    params.theta_min = a.theta_min;
    params.theta_max = a.theta_max;
    sample = ldpic::gen_dcbm(params, ldpic::Seed{a.seed});
  }
  ldpic::write_edge_list_file(a.out, sample.graph);
  if (!a.truth_out.empty()) {
    std::ofstream os(a.truth_out);
    if (!os) throw std::runtime_error("cannot open " + a.truth_out + " for writing");
    for (int i = 0; i < sample.graph.node_count(); ++i)
      os << i << ' ' << (sample.truth.contains(i) ? 0 : 1) << '\n';
    if (!os) throw std::runtime_error("write failure on " + a.truth_out);
  }
  std::cerr << "gen: n=" << sample.graph.node_count()
            << " edges=" << sample.graph.edge_count() << " -> " << a.out << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> methods;
  std::string graph;
  int kcore = -1;
  std::vector<int> n;
  std::vector<double> p, q, eps, alphas;
  int seeds = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int cap_iters = -1, T = -1, jobs = -1;
  double clip_factor = -1.0;
  std::string out;
  bool no_noise = false, no_padding = false, allow_large = false;
};

ldpic::ExperimentSpec spec_from(const RunArgs& a) {
  ldpic::ExperimentSpec spec;
  std::vector<double> p_list, q_list;
  if (!a.config.empty()) {
    std::ifstream is(a.config);
    if (!is) throw std::runtime_error("cannot open " + a.config);
    const nlohmann::json j = nlohmann::json::parse(is);
    spec.methods = j.value("methods", spec.methods);
    spec.graph_file = j.value("graph", spec.graph_file);
    spec.kcore = j.value("kcore", spec.kcore);
    spec.n_list = j.value("n", spec.n_list);
    p_list = j.value("p", p_list);
    q_list = j.value("q", q_list);
    spec.eps_list = j.value("eps", spec.eps_list);
    spec.seeds = j.value("seeds", spec.seeds);
    spec.seed_base = j.value("seed_base", spec.seed_base);
    spec.cap_iters = j.value("cap_iters", spec.cap_iters);
    spec.T_override = j.value("T", spec.T_override);
    spec.clip_factor = j.value("clip_factor", spec.clip_factor);
    spec.alphas = j.value("alphas", spec.alphas);
    spec.out_path = j.value("out", spec.out_path);
    spec.allow_large = j.value("allow_large", spec.allow_large);
    spec.noise_enabled = j.value("noise", spec.noise_enabled);
    spec.padding_enabled = j.value("padding", spec.padding_enabled);
    spec.jobs = j.value("jobs", spec.jobs);
  }
  // Flags override the config file.
  if (!a.methods.empty()) spec.methods = a.methods;
  if (!a.graph.empty()) spec.graph_file = a.graph;
  if (a.kcore >= 0) spec.kcore = a.kcore;
  if (!a.n.empty()) spec.n_list = a.n;
  if (!a.p.empty()) p_list = a.p;
  if (!a.q.empty()) q_list = a.q;
  if (!a.eps.empty()) spec.eps_list = a.eps;
  if (a.seeds >= 0) spec.seeds = a.seeds;
  if (a.seed_given) spec.seed_base = a.seed;
  if (a.cap_iters >= 0) spec.cap_iters = a.cap_iters;
  if (a.T >= 0) spec.T_override = a.T;
  if (a.clip_factor >= 0.0) spec.clip_factor = a.clip_factor;
  if (!a.alphas.empty()) spec.alphas = a.alphas;
  if (!a.out.empty()) spec.out_path = a.out;
  if (a.allow_large) spec.allow_large = true;
  if (a.no_noise) spec.noise_enabled = false;
  if (a.no_padding) spec.padding_enabled = false;
  if (a.jobs >= 1) spec.jobs = a.jobs;
  // The (p, q) grid is the Cartesian product of the two lists.
  for (double p : p_list)
    for (double q : q_list) spec.pq_grid.emplace_back(p, q);
  return spec;
}

int cmd_run(const RunArgs& a) {
  const ldpic::ExperimentSpec spec = spec_from(a);
  const auto rows = ldpic::run_experiment(spec);
  if (spec.out_path.empty())
    std::cout << ldpic::render_csv(spec, rows);
  else
    std::cerr << "run: " << rows.size() << " rows -> " << spec.out_path << "\n";
  return 0;
}

int cmd_kcore(const std::string& in_path, int k, const std::string& out_path) {
  const ldpic::EdgeListResult loaded = ldpic::read_edge_list_file(in_path);
  const ldpic::KCoreResult result = ldpic::k_core(loaded.graph, k);
  // Core edges keep the labels of the input file.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (int i = 0; i < result.core.node_count(); ++i)
    for (int j : result.core.neighbors(i))
      if (i < j) {
        std::uint64_t u = loaded.original_label[result.original_index[i]];
        std::uint64_t v = loaded.original_label[result.original_index[j]];
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
      }
  std::sort(edges.begin(), edges.end());
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open " + out_path + " for writing");
  for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
  if (!os) throw std::runtime_error("write failure on " + out_path);
  std::cerr << "kcore: kept " << result.core.node_count() << " of "
            << loaded.graph.node_count() << " nodes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-LDP power-iteration clustering toolkit"};
  app.set_version_flag("--version", std::string(ldpic::kVersion));
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a graph and write edge-list files");
  gen->add_option("--type", gen_args.type, "generator: sbm, bsbm, or dcbm")
      ->check(CLI::IsMember({"sbm", "bsbm", "dcbm"}));
  gen->add_option("--n1", gen_args.n1, "first block size")->required();
  gen->add_option("--n2", gen_args.n2, "second block size")->required();
  gen->add_option("--n3", gen_args.n3, "third block size (bsbm)");
  gen->add_option("--n4", gen_args.n4, "fourth block size (bsbm)");
  gen->add_option("--p", gen_args.p, "within-cluster edge probability")->required();
  gen->add_option("--q", gen_args.q, "between-cluster edge probability")->required();
  gen->add_option("--alpha-pareto", gen_args.alpha_pareto, "dcbm power-law exponent");
  gen->add_option("--theta-min", gen_args.theta_min, "dcbm smallest correction");
  gen->add_option("--theta-max", gen_args.theta_max, "dcbm truncation (0 = default)");
  gen->add_option("--seed", gen_args.seed, "master seed");
  gen->add_option("--out", gen_args.out, "edge-list output path")->required();
  gen->add_option("--truth-out", gen_args.truth_out, "ground-truth output path");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "execute an experiment sweep");
  run->add_option("--config", run_args.config, "JSON config file; flags override it");
  run->add_option("--methods", run_args.methods,
                  "comma list of: ours, rr, spectral, pic-nonelim, pic-lazy-sweep")
      ->delimiter(',');
  run->add_option("--graph", run_args.graph, "edge-list file instead of a generator");
  run->add_option("--kcore", run_args.kcore, "reduce the loaded graph to its k-core");
  run->add_option("--n", run_args.n, "comma list of total node counts")->delimiter(',');
  run->add_option("--p", run_args.p, "comma list of within probabilities")->delimiter(',');
  run->add_option("--q", run_args.q, "comma list of between probabilities")->delimiter(',');
  run->add_option("--eps", run_args.eps, "comma list of privacy budgets")->delimiter(',');
  run->add_option("--seeds", run_args.seeds, "number of seeds per cell");
  run->add_option("--seed", run_args.seed, "first seed value");
  run->add_option("--cap-iters", run_args.cap_iters, "iteration cap for derived T");
  run->add_option("--T", run_args.T, "fixed round count overriding the gap rule");
  run->add_option("--clip-factor", run_args.clip_factor, "clipping factor c");
  run->add_option("--alphas", run_args.alphas, "comma list for pic-lazy-sweep")
      ->delimiter(',');
  run->add_option("--out", run_args.out, "CSV output path (default: stdout)");
  run->add_flag("--no-noise", run_args.no_noise, "disable Laplace noise (non-private)");
  run->add_flag("--no-padding", run_args.no_padding, "disable edge padding (non-private)");
  run->add_flag("--allow-large", run_args.allow_large,
                "override the randomized-response size guard");
  run->add_option("--jobs", run_args.jobs, "worker threads for sweep cells");

  std::string summarize_path;
  CLI::App* summarize = app.add_subcommand("summarize", "aggregate a results CSV");
  summarize->add_option("csv", summarize_path, "CSV produced by run")->required();

  std::string kcore_in, kcore_out;
  int kcore_k = 0;
  CLI::App* kcore = app.add_subcommand("kcore", "extract the k-core of an edge list");
  kcore->add_option("--in", kcore_in, "edge-list input path")->required();
  kcore->add_option("--k", kcore_k, "minimum degree k")->required();
  kcore->add_option("--out", kcore_out, "edge-list output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  run_args.seed_given = run->count("--seed") > 0;

  try {
    if (gen->parsed()) return cmd_gen(gen_args);
    if (run->parsed()) return cmd_run(run_args);
    if (summarize->parsed()) {
      std::cout << ldpic::summarize_csv_file(summarize_path);
      return 0;
    }
    if (kcore->parsed()) return cmd_kcore(kcore_in, kcore_k, kcore_out);
  } catch (const ldpic::too_sparse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ldpic::convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const ldpic::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ldpic::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
