// Command-line front end: simulate diffusion runs, estimate and recover
// subgraphs from sample blocks, evaluate closed-form predictions, and drive
// Monte Carlo experiment sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nettomo/harness.hpp"
#include "nettomo/io.hpp"

namespace fs = std::filesystem;
using namespace nettomo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int threads = 0;  // 0: NETTOMO_THREADS or 1
};

ExperimentConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty())
    throw std::invalid_argument("--config is required for this subcommand");
  json parsed;
  try {
    parsed = load_json_file(opts.config_path);
  } catch (const std::exception& e) {
    throw std::invalid_argument(e.what());
  }
  ExperimentConfig cfg = experiment_config_from_json(parsed);
  if (opts.seed) cfg.master_seed = *opts.seed;
  if (!opts.out_dir.empty() && opts.out_dir != ".") cfg.output_dir = opts.out_dir;
  cfg.threads = opts.threads;
  return cfg;
}

int cmd_simulate(const CommonOpts& opts, int n_nodes, double p,
                 const std::string& policy_kind, double rho, double lambda,
                 double xi, double sigma, long samples) {
  const std::uint64_t seed = opts.seed.value_or(1);
  const Graph g = generate_er(n_nodes, p, CounterRng::derive(seed, 1).key());
  const CombinationPolicy policy = policy_kind == "laplacian"
                                       ? CombinationPolicy::laplacian(rho, lambda)
                                       : CombinationPolicy::metropolis(rho);
  const CombinationMatrix a = apply_policy(g, policy);
  const ObservationSet s =
      sample_observation_set(n_nodes, xi, CounterRng::derive(seed, 2).key());
  DiffusionConfig dcfg;
  dcfg.sigma = sigma;
  dcfg.n_samples = samples;
  const SampleBlock block = simulate(a, dcfg, s, CounterRng::derive(seed, 3).key());

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  write_sample_block(block, (dir / "block.csv").string(),
                     (dir / "block.json").string());
  write_json_file(to_json(g), (dir / "graph.json").string());
  write_json_file(to_json(a), (dir / "combination.json").string());
  std::cout << "wrote " << (dir / "block.csv").string() << " (" << s.size()
            << " nodes x " << samples << " samples)\n";
  return kExitOk;
}

int cmd_estimate(const CommonOpts& opts, const std::string& block_path,
                 const std::string& sidecar_path, const std::string& estimator) {
  const EstimatorKind kind = estimator_from_string(estimator);
  const SampleBlock block = read_sample_block(block_path, sidecar_path);
  const CorrelationPair pair = empirical_correlations(block);
  const EstimateMatrix est = kind == EstimatorKind::regularized_granger
                                 ? regularized_granger(pair, block.s)
                                 : sample_estimator(kind, pair, block.s);
  const RecoveredGraph rec = recover_graph(est);

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  write_json_file(to_json(est), (dir / ("estimate_" + estimator + ".json")).string());
  json recovered{{"n", rec.adj.rows()}, {"degenerate", rec.degenerate},
                 {"clusters", to_json(rec.clusters)}};
  json edges = json::array();
  for (int i = 0; i < rec.adj.rows(); ++i)
    for (int j = i + 1; j < rec.adj.cols(); ++j)
      if (rec.adj(i, j)) edges.push_back({i, j});
  recovered["edges"] = edges;
  write_json_file(recovered, (dir / ("recovered_" + estimator + ".json")).string());
  std::cout << "recovered " << edges.size() << " edges over " << rec.adj.rows()
            << " probed nodes\n";
  return kExitOk;
}

int cmd_predict(const std::string& estimator, double rho, double kappa, double xi,
                double p, double sigma2) {
  const auto pred = predict(estimator_from_string(estimator), rho, kappa, xi, p, sigma2);
  std::cout << "estimator=" << estimator << " eta=" << format_double(pred.eta)
            << " gamma=" << format_double(pred.gamma) << '\n';
  return kExitOk;
}

int cmd_experiment(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const ExperimentResult result = run_experiment(cfg);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_text(dir / "experiment.csv", experiment_csv(result));
  write_json_file(experiment_manifest(cfg, result), (dir / "manifest.json").string());
  std::cout << experiment_csv(result);
  return kExitOk;
}

int cmd_margins(const CommonOpts& opts, int n_nodes, const std::string& estimator,
                const std::string& source) {
  ExperimentConfig cfg = load_config(opts);
  EstimatorSpec spec;
  spec.kind = estimator_from_string(estimator);
  spec.source = source == "sample" ? EstimateSource::sample : EstimateSource::exact;
  const MarginStudy study = run_margin_study(cfg, n_nodes, spec);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const std::string name = "margins_" + estimator + "_" + std::to_string(n_nodes);
  write_text(dir / (name + ".csv"), margin_study_csv(study));
  write_json_file(to_json(study.report), (dir / (name + ".json")).string());
  std::cout << "eta_theory=" << format_double(study.eta_theory)
            << " eta_plus_gamma_theory=" << format_double(study.eta_plus_gamma_theory)
            << " rows=" << study.rows.size() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology inference over partially observed diffusion networks"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "JSON experiment config");
  std::uint64_t seed_value = 0;
  bool seed_set = false;
  app.add_option("--seed", seed_value, "master RNG seed")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--threads", opts.threads, "worker threads (default NETTOMO_THREADS or 1)");

  auto* sim = app.add_subcommand("simulate", "generate a graph and emit a sample block");
  int sim_n = 100;
  double sim_p = 0.1, sim_rho = 0.99, sim_lambda = 1.0, sim_xi = 0.6, sim_sigma = 1.0;
  long sim_samples = 1000;
  std::string sim_policy = "metropolis";
  sim->add_option("--n-nodes", sim_n, "network size");
  sim->add_option("--p", sim_p, "connection probability");
  sim->add_option("--policy", sim_policy, "metropolis or laplacian");
  sim->add_option("--rho", sim_rho, "row sum");
  sim->add_option("--lambda", sim_lambda, "laplacian lambda");
  sim->add_option("--xi", sim_xi, "probed fraction");
  sim->add_option("--sigma", sim_sigma, "input std deviation");
  sim->add_option("--samples", sim_samples, "sample count");

  auto* est = app.add_subcommand("estimate", "estimate and recover from a sample block");
  std::string est_block, est_sidecar, est_kind = "granger";
  est->add_option("--block", est_block, "sample block CSV")->required();
  est->add_option("--sidecar", est_sidecar, "sample block JSON sidecar")->required();
  est->add_option("--estimator", est_kind,
                  "granger | one_lag | residual | regularized_granger");

  auto* pre = app.add_subcommand("predict", "closed-form bias and gap");
  std::string pre_kind = "granger";
  double pre_rho = 0.99, pre_kappa = 0.99, pre_xi = 0.6, pre_p = 0.1, pre_sigma2 = 1.0;
  pre->add_option("--estimator", pre_kind, "granger | one_lag | residual");
  pre->add_option("--rho", pre_rho, "row sum");
  pre->add_option("--kappa", pre_kappa, "sandwich constant");
  pre->add_option("--xi", pre_xi, "probed fraction");
  pre->add_option("--p", pre_p, "connection probability");
  pre->add_option("--sigma2", pre_sigma2, "input variance");

  auto* exp = app.add_subcommand("experiment", "full Monte Carlo sweep from --config");

  auto* mar = app.add_subcommand("margins", "per-entry margin scatter study");
  int mar_n = 1000;
  std::string mar_kind = "one_lag", mar_source = "exact";
  mar->add_option("--n-nodes", mar_n, "network size");
  mar->add_option("--estimator", mar_kind, "estimator kind");
  mar->add_option("--source", mar_source, "exact or sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (seed_set) opts.seed = seed_value;

  try {
    if (*sim)
      return cmd_simulate(opts, sim_n, sim_p, sim_policy, sim_rho, sim_lambda,
                          sim_xi, sim_sigma, sim_samples);
    if (*est) return cmd_estimate(opts, est_block, est_sidecar, est_kind);
    if (*pre) return cmd_predict(pre_kind, pre_rho, pre_kappa, pre_xi, pre_p, pre_sigma2);
    if (*exp) return cmd_experiment(opts);
    if (*mar) return cmd_margins(opts, mar_n, mar_kind, mar_source);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
