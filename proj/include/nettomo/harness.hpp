#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nettomo/clustering.hpp"
#include "nettomo/combination.hpp"
#include "nettomo/correlation.hpp"
#include "nettomo/diffusion.hpp"
#include "nettomo/estimators.hpp"
#include "nettomo/graph.hpp"
#include "nettomo/io.hpp"
#include "nettomo/theory.hpp"

namespace nettomo {

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::granger;
  EstimateSource source = EstimateSource::exact;

  std::string label() const {
    return to_string(kind) + std::string("/") +
           (source == EstimateSource::exact ? "exact" : "sample");
  }
};

struct ScheduleConfig {
  long n_ref = 50000;
  int n_nodes_ref = 800;
};

struct ExperimentConfig {
  ConnectionRegime regime = ConnectionRegime::dense(0.1);
  CombinationPolicy policy = CombinationPolicy::metropolis(0.99);
  double xi = 0.6;
  double sigma = 1.0;
  std::vector<int> n_sweep{100, 200, 400, 800};
  std::vector<EstimatorSpec> estimators{{EstimatorKind::granger, EstimateSource::exact}};
  ScheduleConfig schedule;
  int mc_runs = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = ".";
  int threads = 1;
  bool demean = false;
  json resolved;  // manifest copy of the parsed config

  void validate() const {
    if (mc_runs < 1) throw std::invalid_argument("config: mc_runs must be >= 1");
    if (n_sweep.empty()) throw std::invalid_argument("config: n_sweep must be non-empty");
    for (std::size_t i = 1; i < n_sweep.size(); ++i)
      if (n_sweep[i] <= n_sweep[i - 1])
        throw std::invalid_argument("config: n_sweep must be strictly increasing");
    if (!(xi > 0.0) || xi >= 1.0) throw std::invalid_argument("config: xi must lie in (0,1)");
    if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma must be > 0");
    if (estimators.empty()) throw std::invalid_argument("config: no estimators requested");
  }
};

inline ConnectionRegime regime_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dense") return ConnectionRegime::dense(j.at("p").get<double>());
  if (kind == "uniform_sparse")
    return ConnectionRegime::uniform_sparse(j.at("c").get<double>(),
                                            j.at("a").get<double>());
  throw std::invalid_argument("config: unknown regime kind '" + kind +
                              "' (expected dense or uniform_sparse)");
}

inline CombinationPolicy policy_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "metropolis")
    return CombinationPolicy::metropolis(j.at("rho").get<double>());
  if (kind == "laplacian")
    return CombinationPolicy::laplacian(j.at("rho").get<double>(),
                                        j.at("lambda").get<double>());
  throw std::invalid_argument("config: unknown policy kind '" + kind + "'");
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.regime = regime_from_json(j.at("regime"));
  cfg.policy = policy_from_json(j.at("policy"));
  cfg.xi = j.at("xi").get<double>();
  cfg.sigma = j.value("sigma", 1.0);
  cfg.n_sweep = j.at("n_sweep").get<std::vector<int>>();
  cfg.estimators.clear();
  for (const auto& e : j.at("estimators")) {
    EstimatorSpec spec;
    spec.kind = estimator_from_string(e.at("kind").get<std::string>());
    const std::string source = e.at("source").get<std::string>();
    if (source == "exact")
      spec.source = EstimateSource::exact;
    else if (source == "sample")
      spec.source = EstimateSource::sample;
    else
      throw std::invalid_argument("config: estimator source must be exact or sample");
    if (spec.kind == EstimatorKind::regularized_granger &&
        spec.source == EstimateSource::exact)
      throw std::invalid_argument("config: regularized_granger is sample-only");
    cfg.estimators.push_back(spec);
  }
  if (j.contains("schedule")) {
    cfg.schedule.n_ref = j.at("schedule").at("n_ref").get<long>();
    cfg.schedule.n_nodes_ref = j.at("schedule").at("N_ref").get<int>();
  } else {
    cfg.schedule.n_nodes_ref = cfg.n_sweep.back();
  }
  cfg.mc_runs = j.value("mc_runs", 100);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1});
  cfg.output_dir = j.value("output_dir", std::string{"."});
  cfg.demean = j.value("demean", false);
  cfg.resolved = j;
  cfg.validate();
  return cfg;
}

struct ResultRow {
  int n_nodes = 0;
  EstimatorSpec spec;
  long n_samples = 0;  // 0 for exact source
  int mc_runs = 0;
  int successes = 0;
  double recovery_prob = 0.0;
  double std_err = 0.0;
  double eta_theory = 0.0;
  double gamma_theory = 0.0;
  double mean_scaled_delta_high = 0.0;
  double mean_scaled_Delta_low = 0.0;
  double wall_ms = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t run_seed_first = 0;
  std::uint64_t run_seed_last = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

namespace detail {

struct RunOutcome {
  struct PerEstimator {
    bool success = false;
    bool margins_defined = false;
    double scaled_delta_high = 0.0;
    double scaled_Delta_low = 0.0;
  };
  std::vector<PerEstimator> per_estimator;
  bool failed = false;
  std::string error;
};

inline std::uint64_t run_seed(std::uint64_t master, int n_nodes, int run) {
  const std::uint64_t stream =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n_nodes)) << 32) |
      static_cast<std::uint32_t>(run);
  return CounterRng::derive(master, stream).key();
}

// One Monte Carlo replica: graph -> matrix -> observation set -> estimate ->
// cluster -> compare. Shared work (exact correlations, simulated block) is
// computed once per run and reused across the requested estimators.
inline RunOutcome execute_run(const ExperimentConfig& cfg, int n_nodes, int run,
                              long n_samples_for_n) {
  RunOutcome out;
  out.per_estimator.resize(cfg.estimators.size());
  try {
    const std::uint64_t seed = run_seed(cfg.master_seed, n_nodes, run);
    const double p = cfg.regime.p_of(n_nodes);
    const Graph g = generate_er(n_nodes, p, CounterRng::derive(seed, 1).key());
    const CombinationMatrix a = apply_policy(g, cfg.policy);
    const ObservationSet s =
        sample_observation_set(n_nodes, cfg.xi, CounterRng::derive(seed, 2).key());
    const AdjMatrix truth = truth_subgraph(g, s);

    bool need_exact = false, need_sample = false;
    for (const auto& spec : cfg.estimators) {
      if (spec.source == EstimateSource::exact) need_exact = true;
      if (spec.source == EstimateSource::sample) need_sample = true;
    }

    std::optional<CorrelationPair> exact_pair;
    if (need_exact) exact_pair = exact_correlations(a, cfg.sigma);

    std::optional<CorrelationPair> sample_pair;
    if (need_sample) {
      DiffusionConfig dcfg;
      dcfg.sigma = cfg.sigma;
      dcfg.n_samples = n_samples_for_n;
      const SampleBlock block =
          simulate(a, dcfg, s, CounterRng::derive(seed, 3).key());
      sample_pair = empirical_correlations(block, cfg.demean);
    }

    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      const EstimatorSpec& spec = cfg.estimators[e];
      auto& res = out.per_estimator[e];
      try {
        EstimateMatrix est;
        if (spec.source == EstimateSource::exact) {
          switch (spec.kind) {
            case EstimatorKind::granger:
              est = limiting_granger(exact_pair->r0, exact_pair->r1, s);
              break;
            case EstimatorKind::one_lag:
              est = limiting_one_lag(exact_pair->r1, s);
              break;
            case EstimatorKind::residual:
              est = limiting_residual(exact_pair->r0, exact_pair->r1, s);
              break;
            default:
              throw std::logic_error("unreachable");
          }
        } else {
          CorrelationPair restricted = *sample_pair;  // already over S
          est = spec.kind == EstimatorKind::regularized_granger
                    ? regularized_granger(restricted, s)
                    : sample_estimator(spec.kind, restricted, s);
        }
        const RecoveredGraph rec = recover_graph(est);
        res.success = recovery_indicator(rec.adj, truth);
        const MarginReport rep = margins(est, a, n_nodes, p);
        if (rep.disconnected_defined && rep.connected_defined) {
          res.margins_defined = true;
          res.scaled_delta_high = rep.scaled_delta_high;
          res.scaled_Delta_low = rep.scaled_Delta_low;
        }
      } catch (const std::exception& ex) {
        // A failed estimator counts as non-recovery for that estimator only.
        res.success = false;
        std::cerr << "[run N=" << n_nodes << " run=" << run << " "
                  << spec.label() << "] " << ex.what() << "\n";
      }
    }
  } catch (const std::exception& ex) {
    out.failed = true;
    out.error = ex.what();
    std::cerr << "[run N=" << n_nodes << " run=" << run << "] " << ex.what() << "\n";
  }
  return out;
}

}  // namespace detail

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NETTOMO_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int threads = resolve_threads(cfg.threads);

  auto schedule = sample_schedule(
      cfg.schedule.n_ref, cfg.schedule.n_nodes_ref, cfg.regime,
      [&cfg](int n) { return static_cast<int>(std::lround(cfg.xi * n)); });

  ExperimentResult result;
  for (int n_nodes : cfg.n_sweep) {
    bool need_sample = false;
    for (const auto& spec : cfg.estimators)
      if (spec.source == EstimateSource::sample) need_sample = true;
    const long n_samples = need_sample ? schedule(n_nodes) : 0;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<detail::RunOutcome> outcomes(cfg.mc_runs);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int run = next.fetch_add(1);
        if (run >= cfg.mc_runs) return;
        outcomes[run] = detail::execute_run(cfg, n_nodes, run, n_samples);
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    const double p_n = cfg.regime.p_of(n_nodes);
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      const EstimatorSpec& spec = cfg.estimators[e];
      ResultRow row;
      row.n_nodes = n_nodes;
      row.spec = spec;
      row.n_samples = spec.source == EstimateSource::sample ? n_samples : 0;
      row.mc_runs = cfg.mc_runs;
      double dh_sum = 0.0, Dl_sum = 0.0;
      int defined = 0;
      for (const auto& outcome : outcomes) {
        const auto& pe = outcome.per_estimator.empty()
                             ? detail::RunOutcome::PerEstimator{}
                             : outcome.per_estimator[e];
        if (pe.success) ++row.successes;
        if (pe.margins_defined) {
          ++defined;
          dh_sum += pe.scaled_delta_high;
          Dl_sum += pe.scaled_Delta_low;
        }
      }
      row.recovery_prob = static_cast<double>(row.successes) / cfg.mc_runs;
      row.std_err = std::sqrt(row.recovery_prob * (1.0 - row.recovery_prob) /
                              cfg.mc_runs);
      if (defined > 0) {
        row.mean_scaled_delta_high = dh_sum / defined;
        row.mean_scaled_Delta_low = Dl_sum / defined;
      }
      if (spec.kind != EstimatorKind::regularized_granger) {
        const auto pred =
            predict(spec.kind, cfg.policy.rho, cfg.policy.kappa(), cfg.xi, p_n,
                    cfg.sigma * cfg.sigma);
        row.eta_theory = pred.eta;
        row.gamma_theory = pred.gamma;
      } else {
        // The regularized estimator targets the plain Granger limit.
        const auto pred =
            predict(EstimatorKind::granger, cfg.policy.rho, cfg.policy.kappa(),
                    cfg.xi, p_n, cfg.sigma * cfg.sigma);
        row.eta_theory = pred.eta;
        row.gamma_theory = pred.gamma;
      }
      row.wall_ms = wall_ms;
      row.master_seed = cfg.master_seed;
      row.run_seed_first = detail::run_seed(cfg.master_seed, n_nodes, 0);
      row.run_seed_last = detail::run_seed(cfg.master_seed, n_nodes, cfg.mc_runs - 1);
      result.rows.push_back(row);
    }
  }
  return result;
}

// CSV without timing columns so reruns with the same master seed are
// byte-identical; wall time goes into the JSON manifest instead.
inline std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "N,estimator,source,n_samples,mc_runs,successes,recovery_prob,stderr,"
        "eta_theory,gamma_theory,mean_scaled_delta_high,mean_scaled_Delta_low,"
        "master_seed,run_seed_first,run_seed_last\n";
  for (const auto& r : result.rows) {
    os << r.n_nodes << ',' << to_string(r.spec.kind) << ','
       << (r.spec.source == EstimateSource::exact ? "exact" : "sample") << ','
       << r.n_samples << ',' << r.mc_runs << ',' << r.successes << ','
       << format_double(r.recovery_prob) << ',' << format_double(r.std_err) << ','
       << format_double(r.eta_theory) << ',' << format_double(r.gamma_theory) << ','
       << format_double(r.mean_scaled_delta_high) << ','
       << format_double(r.mean_scaled_Delta_low) << ',' << r.master_seed << ','
       << r.run_seed_first << ',' << r.run_seed_last << '\n';
  }
  return os.str();
}

inline json experiment_manifest(const ExperimentConfig& cfg,
                                const ExperimentResult& result) {
  json timing = json::array();
  for (const auto& r : result.rows)
    timing.push_back({{"N", r.n_nodes},
                      {"estimator", r.spec.label()},
                      {"wall_ms", r.wall_ms}});
  return json{{"config", cfg.resolved}, {"timing", timing}};
}

// Per-entry scatter table for one replica: true entries vs scaled estimated
// entries, disconnected pairs first, column-major within each class.
struct MarginStudyRow {
  int pair_index = 0;
  int i = 0;
  int j = 0;
  double true_a = 0.0;
  double scaled_estimate = 0.0;
  std::string cls;  // "disconnected" | "connected"
};

struct MarginStudy {
  std::vector<MarginStudyRow> rows;
  double eta_theory = 0.0;
  double eta_plus_gamma_theory = 0.0;
  MarginReport report;
  std::uint64_t seed = 0;
};

inline MarginStudy run_margin_study(const ExperimentConfig& cfg, int n_nodes,
                                    const EstimatorSpec& spec, int run = 0) {
  cfg.validate();
  const std::uint64_t seed = detail::run_seed(cfg.master_seed, n_nodes, run);
  const double p = cfg.regime.p_of(n_nodes);
  const Graph g = generate_er(n_nodes, p, CounterRng::derive(seed, 1).key());
  const CombinationMatrix a = apply_policy(g, cfg.policy);
  const ObservationSet s =
      sample_observation_set(n_nodes, cfg.xi, CounterRng::derive(seed, 2).key());

  EstimateMatrix est;
  if (spec.source == EstimateSource::exact) {
    const CorrelationPair pair = exact_correlations(a, cfg.sigma);
    switch (spec.kind) {
      case EstimatorKind::granger:
        est = limiting_granger(pair.r0, pair.r1, s);
        break;
      case EstimatorKind::one_lag:
        est = limiting_one_lag(pair.r1, s);
        break;
      case EstimatorKind::residual:
        est = limiting_residual(pair.r0, pair.r1, s);
        break;
      default:
        throw std::invalid_argument("margin study: regularized_granger is sample-only");
    }
  } else {
    auto schedule = sample_schedule(
        cfg.schedule.n_ref, cfg.schedule.n_nodes_ref, cfg.regime,
        [&cfg](int n) { return static_cast<int>(std::lround(cfg.xi * n)); });
    DiffusionConfig dcfg;
    dcfg.sigma = cfg.sigma;
    dcfg.n_samples = schedule(n_nodes);
    const SampleBlock block = simulate(a, dcfg, s, CounterRng::derive(seed, 3).key());
    const CorrelationPair pair = empirical_correlations(block, cfg.demean);
    est = spec.kind == EstimatorKind::regularized_granger
              ? regularized_granger(pair, s)
              : sample_estimator(spec.kind, pair, s);
  }

  MarginStudy study;
  study.seed = seed;
  const double s_n = static_cast<double>(n_nodes) * p;
  const Matrix truth = restrict(a.a, s);
  const int k = s.size();
  // Column-major over off-diagonal entries, zeros before nonzeros.
  for (const bool connected_pass : {false, true}) {
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i) {
        if (i == j) continue;
        const bool connected = truth(i, j) > 0.0;
        if (connected != connected_pass) continue;
        MarginStudyRow row;
        row.pair_index = static_cast<int>(study.rows.size());
        row.i = i;
        row.j = j;
        row.true_a = truth(i, j);
        row.scaled_estimate = s_n * est.values(i, j);
        row.cls = connected ? "connected" : "disconnected";
        study.rows.push_back(row);
      }
  }
  const auto pred = predict(spec.kind == EstimatorKind::regularized_granger
                                ? EstimatorKind::granger
                                : spec.kind,
                            cfg.policy.rho, cfg.policy.kappa(), cfg.xi, p,
                            cfg.sigma * cfg.sigma);
  study.eta_theory = pred.eta;
  study.eta_plus_gamma_theory = pred.eta + pred.gamma;
  study.report = margins(est, a, n_nodes, p);
  return study;
}

inline std::string margin_study_csv(const MarginStudy& study) {
  std::ostringstream os;
  os << "pair_index,i,j,true_a,scaled_estimate,class,eta_theory,eta_plus_gamma_theory,seed\n";
  for (const auto& r : study.rows) {
    os << r.pair_index << ',' << r.i << ',' << r.j << ','
       << format_double(r.true_a) << ',' << format_double(r.scaled_estimate) << ','
       << r.cls << ',' << format_double(study.eta_theory) << ','
       << format_double(study.eta_plus_gamma_theory) << ',' << study.seed << '\n';
  }
  return os.str();
}

}  // namespace nettomo
