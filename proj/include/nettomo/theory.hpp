#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "nettomo/estimators.hpp"
#include "nettomo/graph.hpp"

namespace nettomo {

// Limiting bias eta and identifiability gap Gamma of an estimator, under the
// uniform concentration regime with scaling s_N = N p_N.
struct ConsistencyPrediction {
  EstimatorKind estimator = EstimatorKind::granger;
  double eta = 0.0;
  double gamma = 0.0;

  static double scale(int n, double p_n) { return static_cast<double>(n) * p_n; }
};

inline ConsistencyPrediction predict(EstimatorKind kind, double rho, double kappa,
                                     double xi, double p, double sigma2) {
  if (!(kappa > 0.0) || kappa > rho || !(rho < 1.0))
    throw std::domain_error("predict: need 0 < kappa <= rho < 1");
  if (xi < 0.0 || xi >= 1.0) throw std::domain_error("predict: need 0 <= xi < 1");
  if (p < 0.0 || p > 1.0) throw std::domain_error("predict: need 0 <= p <= 1");
  if (!(sigma2 > 0.0)) throw std::domain_error("predict: need sigma2 > 0");

  const double zeta = rho - kappa;
  ConsistencyPrediction out;
  out.estimator = kind;
  switch (kind) {
    case EstimatorKind::granger:
      out.eta = kappa * kappa * p * (2.0 * rho - kappa) * (1.0 - xi) /
                (1.0 - (rho * rho - 2.0 * rho * kappa * xi + kappa * kappa * xi));
      out.gamma = kappa;
      break;
    case EstimatorKind::one_lag: {
      const double d = 1.0 - zeta * zeta;
      out.eta = sigma2 * kappa * kappa * p *
                (rho + rho * zeta * zeta + 2.0 * zeta) / ((1.0 - rho * rho) * d * d);
      out.gamma = sigma2 * kappa * (1.0 + zeta * zeta) / (d * d);
      break;
    }
    case EstimatorKind::residual: {
      const double d = 1.0 + rho - kappa;
      out.eta = -sigma2 * kappa * kappa * p / ((1.0 + rho) * d * d);
      out.gamma = sigma2 * kappa / (d * d);
      break;
    }
    case EstimatorKind::regularized_granger:
      throw std::invalid_argument("predict: no closed form for the regularized Granger estimator");
  }
  return out;
}

// Sample-size schedule n(N) = round(c * (N p_N)^2 * log S(N)), with c
// calibrated so that n(N_ref) = n_ref.
inline std::function<long(int)> sample_schedule(long n_ref, int n_nodes_ref,
                                                const ConnectionRegime& regime,
                                                std::function<int(int)> s_of) {
  if (n_ref < 2) throw std::invalid_argument("sample_schedule: n_ref must be >= 2");
  auto base = [regime, s_of](int n) {
    const double np = static_cast<double>(n) * regime.p_of(n);
    return np * np * std::log(static_cast<double>(s_of(n)));
  };
  const double c = static_cast<double>(n_ref) / base(n_nodes_ref);
  return [c, base](int n) {
    return std::max<long>(2, std::lround(c * base(n)));
  };
}

}  // namespace nettomo
