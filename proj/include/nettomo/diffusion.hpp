#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "nettomo/combination.hpp"
#include "nettomo/correlation.hpp"
#include "nettomo/graph.hpp"
#include "nettomo/rng.hpp"

namespace nettomo {

struct DiffusionConfig {
  double sigma = 1.0;
  long n_samples = 1;
  bool stationary_init = true;  // y_0 ~ N(0, R_0)
  long burn_in = 0;             // used only when stationary_init is false

  void validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("DiffusionConfig: sigma must be > 0");
    if (n_samples < 1) throw std::invalid_argument("DiffusionConfig: n_samples must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("DiffusionConfig: burn_in must be >= 0");
  }
};

struct SampleBlock {
  ObservationSet s;
  Matrix data;  // |S| x n, row l holds the stream of probed node s.indices[l]
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

namespace detail {

// Shared recursion: y_n = A y_{n-1} + sigma x_n, emitting the rows in `keep`.
// The draw order (y_0 factor, then one column of inputs per step) is fixed so
// that the same seed yields the same trajectory regardless of `keep`.
inline Matrix simulate_rows(const CombinationMatrix& a, const DiffusionConfig& cfg,
                            const std::vector<int>& keep, std::uint64_t seed) {
  cfg.validate();
  const int n_nodes = a.size();
  if (!(a.rho < 1.0))
    throw std::invalid_argument("simulate: combination matrix must have row sums < 1");
  CounterRng rng = CounterRng::derive(seed, 0x646966667573ULL);

  Eigen::VectorXd y(n_nodes);
  long warmup = 0;
  if (cfg.stationary_init) {
    // y_0 = L z with R_0 = L L'.
    const Matrix r0 = exact_r0(a, cfg.sigma);
    Eigen::LLT<Matrix> llt(r0);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("simulate: stationary covariance factorization failed");
    Eigen::VectorXd z(n_nodes);
    for (int i = 0; i < n_nodes; ++i) z(i) = rng.gaussian();
    y = llt.matrixL() * z;
  } else {
    y.setZero();
    warmup = cfg.burn_in;
  }

  Matrix out(keep.size(), cfg.n_samples);
  Eigen::VectorXd x(n_nodes);
  Eigen::VectorXd next(n_nodes);
  for (long t = -warmup; t < cfg.n_samples; ++t) {
    for (int i = 0; i < n_nodes; ++i) x(i) = rng.gaussian();
    next.noalias() = a.a * y;
    next += cfg.sigma * x;
    y.swap(next);
    if (t >= 0)
      for (std::size_t r = 0; r < keep.size(); ++r) out(r, t) = y(keep[r]);
  }
  return out;
}

}  // namespace detail

inline SampleBlock simulate(const CombinationMatrix& a, const DiffusionConfig& cfg,
                            const ObservationSet& s, std::uint64_t seed) {
  for (int i : s.indices)
    if (i < 0 || i >= a.size()) throw std::out_of_range("simulate: observation index out of range");
  SampleBlock block;
  block.s = s;
  block.data = detail::simulate_rows(a, cfg, s.indices, seed);
  block.sigma = cfg.sigma;
  block.seed = seed;
  return block;
}

inline Matrix simulate_full(const CombinationMatrix& a, const DiffusionConfig& cfg,
                            std::uint64_t seed) {
  std::vector<int> all(a.size());
  for (int i = 0; i < a.size(); ++i) all[i] = i;
  return detail::simulate_rows(a, cfg, all, seed);
}

inline CorrelationPair empirical_correlations(const SampleBlock& block,
                                              bool demean = false) {
  return empirical_correlations(block.data, demean);
}

}  // namespace nettomo
