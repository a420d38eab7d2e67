#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nettomo/combination.hpp"
#include "nettomo/correlation.hpp"
#include "nettomo/graph.hpp"
#include "nettomo/lp.hpp"

namespace nettomo {

enum class EstimatorKind { granger, one_lag, residual, regularized_granger };

inline std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::granger: return "granger";
    case EstimatorKind::one_lag: return "one_lag";
    case EstimatorKind::residual: return "residual";
    case EstimatorKind::regularized_granger: return "regularized_granger";
  }
  throw std::logic_error("unknown estimator kind");
}

inline EstimatorKind estimator_from_string(const std::string& s) {
  if (s == "granger") return EstimatorKind::granger;
  if (s == "one_lag") return EstimatorKind::one_lag;
  if (s == "residual") return EstimatorKind::residual;
  if (s == "regularized_granger") return EstimatorKind::regularized_granger;
  throw std::invalid_argument("unknown estimator kind: " + s);
}

enum class EstimateSource { exact, sample };

struct EstimateMatrix {
  Matrix values;  // |S| x |S|
  EstimatorKind kind = EstimatorKind::granger;
  EstimateSource source = EstimateSource::exact;
  long n_samples = 0;  // sample source only
  ObservationSet s;
};

namespace detail {

inline Matrix solve_granger(const Matrix& r0_s, const Matrix& r1_s) {
  // A_hat = R1_s R0_s^{-1}, realized as a solve on the transposed system.
  Eigen::FullPivLU<Matrix> lu(r0_s);
  if (!lu.isInvertible())
    throw std::runtime_error("granger estimator: [R0]_S is singular");
  Matrix est = lu.solve(r1_s.transpose()).transpose();
  if (!est.allFinite())
    throw std::runtime_error("granger estimator: non-finite solution");
  return est;
}

}  // namespace detail

inline EstimateMatrix limiting_granger(const Matrix& r0, const Matrix& r1,
                                       const ObservationSet& s) {
  EstimateMatrix est;
  est.values = detail::solve_granger(restrict(r0, s), restrict(r1, s));
  est.kind = EstimatorKind::granger;
  est.s = s;
  return est;
}

inline EstimateMatrix limiting_one_lag(const Matrix& r1, const ObservationSet& s) {
  EstimateMatrix est;
  est.values = restrict(r1, s);
  est.kind = EstimatorKind::one_lag;
  est.s = s;
  return est;
}

inline EstimateMatrix limiting_residual(const Matrix& r0, const Matrix& r1,
                                        const ObservationSet& s) {
  EstimateMatrix est;
  est.values = restrict(r1, s) - restrict(r0, s);
  est.kind = EstimatorKind::residual;
  est.s = s;
  return est;
}

// Sample version: the same formulas applied to empirical correlations.
inline EstimateMatrix sample_estimator(EstimatorKind kind, const CorrelationPair& pair,
                                       const ObservationSet& s) {
  EstimateMatrix est;
  switch (kind) {
    case EstimatorKind::granger:
      est.values = detail::solve_granger(pair.r0, pair.r1);
      break;
    case EstimatorKind::one_lag:
      est.values = pair.r1;
      break;
    case EstimatorKind::residual:
      est.values = pair.r1 - pair.r0;
      break;
    case EstimatorKind::regularized_granger:
      throw std::invalid_argument("use regularized_granger() for the regularized kind");
  }
  est.kind = kind;
  est.source = pair.kind == CorrelationKind::exact ? EstimateSource::exact
                                                   : EstimateSource::sample;
  est.n_samples = pair.n_samples;
  est.s = s;
  return est;
}

// Row i minimizes || x [R0]_S - [R1]_i ||_inf subject to ||x||_1 <= 1.
// Rows are independent problems; each is solved to vertex optimality.
inline EstimateMatrix regularized_granger(const CorrelationPair& pair,
                                          const ObservationSet& s) {
  const int k = static_cast<int>(pair.r0.rows());
  EstimateMatrix est;
  est.values = Matrix(k, k);
  for (int i = 0; i < k; ++i) {
    const LpResult row = chebyshev_l1_row(pair.r0, pair.r1.row(i).transpose());
    est.values.row(i) = row.x.transpose();
  }
  est.kind = EstimatorKind::regularized_granger;
  est.source = pair.kind == CorrelationKind::exact ? EstimateSource::exact
                                                   : EstimateSource::sample;
  est.n_samples = pair.n_samples;
  est.s = s;
  return est;
}

// Exact latent-error structure of the Granger estimator:
//   A_hat = A_S + A_{SS'} (I - [A^2]_{S'})^{-1} [A^2]_{S'S}.
struct GrangerErrorDecomposition {
  Matrix a_s;    // true submatrix A_S
  Matrix error;  // latent contribution
  Matrix h;      // (I_{S'} - C)^{-1}
  Matrix c;      // [A^2]_{S'}
};

inline GrangerErrorDecomposition granger_error_decomposition(const CombinationMatrix& a,
                                                             const ObservationSet& s) {
  const int n = a.size();
  const std::vector<int> latent = complement_of(s, n);
  GrangerErrorDecomposition dec;
  dec.a_s = restrict(a.a, s);
  const int k = s.size();
  const int l = static_cast<int>(latent.size());
  if (l == 0) {
    dec.error = Matrix::Zero(k, k);
    dec.h = Matrix(0, 0);
    dec.c = Matrix(0, 0);
    return dec;
  }
  const Matrix a2 = a.a * a.a;
  dec.c = restrict_block(a2, latent, latent);
  // Spectral radius of C is below rho^2 < 1, so I - C is invertible.
  dec.h = (Matrix::Identity(l, l) - dec.c).partialPivLu().solve(Matrix::Identity(l, l));
  const Matrix a_ss = restrict_block(a.a, s.indices, latent);
  const Matrix a2_sls = restrict_block(a2, latent, s.indices);
  dec.error = a_ss * dec.h * a2_sls;
  return dec;
}

// Truncated matrix-power error series restricted to S, with geometric tail
// bound rho^{2k+1}/(1-rho) in max-norm.
//   one-lag:  sum_{h=1..k} [A^{2h+1}]_S
//   residual: sum_{h=1..k} ([A^{2h+1}]_S - [A^{2h}]_S)   (the -I_S term of the
//             full error is left to the caller)
struct SeriesError {
  Matrix partial_sum;
  double tail_bound = 0.0;
};

inline SeriesError series_error(EstimatorKind kind, const CombinationMatrix& a,
                                const ObservationSet& s, int k_max) {
  if (kind != EstimatorKind::one_lag && kind != EstimatorKind::residual)
    throw std::invalid_argument("series_error: only one_lag and residual have power series");
  if (k_max < 1) throw std::invalid_argument("series_error: k_max must be >= 1");
  const int n = a.size();
  const int k = s.size();
  Matrix power = a.a;  // A^1
  SeriesError out;
  out.partial_sum = Matrix::Zero(k, k);
  for (int h = 1; h <= k_max; ++h) {
    power = (power * a.a).eval();  // A^{2h}
    if (kind == EstimatorKind::residual) out.partial_sum -= restrict(power, s);
    power = (power * a.a).eval();  // A^{2h+1}
    out.partial_sum += restrict(power, s);
  }
  (void)n;
  out.tail_bound = std::pow(a.rho, 2 * k_max + 1) / (1.0 - a.rho);
  return out;
}

// Truncation order making the geometric tail fall below `tail_target`.
inline int default_series_order(double rho, double tail_target = 1e-10) {
  return static_cast<int>(
      std::ceil(std::log(tail_target * (1.0 - rho)) / (2.0 * std::log(rho))));
}

}  // namespace nettomo
