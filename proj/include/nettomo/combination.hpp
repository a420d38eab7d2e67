#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nettomo/graph.hpp"

namespace nettomo {

using Matrix = Eigen::MatrixXd;

// Symmetric nonnegative weight matrix with constant row sum rho and the
// kappa/d sandwich on its off-diagonal support.
struct CombinationMatrix {
  Matrix a;
  double rho = 0.0;
  double kappa = 0.0;

  int size() const { return static_cast<int>(a.rows()); }
};

struct CombinationPolicy {
  enum class Kind { laplacian, metropolis };

  Kind kind = Kind::metropolis;
  double rho = 0.99;
  double lambda = 1.0;  // Laplacian only

  static CombinationPolicy laplacian(double rho, double lambda) {
    validate(rho, lambda);
    return {Kind::laplacian, rho, lambda};
  }

  static CombinationPolicy metropolis(double rho) {
    validate(rho, 1.0);
    return {Kind::metropolis, rho, 1.0};
  }

  double kappa() const { return kind == Kind::laplacian ? rho * lambda : rho; }

  std::string name() const {
    return kind == Kind::laplacian ? "laplacian" : "metropolis";
  }

 private:
  static void validate(double rho, double lambda) {
    if (!(rho > 0.0) || rho >= 1.0)
      throw std::invalid_argument("CombinationPolicy: rho must lie in (0,1)");
    if (!(lambda > 0.0) || lambda > 1.0)
      throw std::invalid_argument("CombinationPolicy: lambda must lie in (0,1]");
  }
};

// Laplacian rule: a_ij = rho*lambda*g_ij/d_max.
// Metropolis rule: a_ij = rho*g_ij/max{d_i,d_j}.
// Self-weights fill each row up to rho.
inline CombinationMatrix apply_policy(const Graph& g, const CombinationPolicy& policy) {
  const int n = g.n;
  const DegreeProfile prof = degrees(g);
  CombinationMatrix out;
  out.a = Matrix::Zero(n, n);
  out.rho = policy.rho;
  out.kappa = policy.kappa();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!g.adj(i, j)) continue;
      double w;
      if (policy.kind == CombinationPolicy::Kind::laplacian) {
        w = policy.rho * policy.lambda / prof.d_max;
      } else {
        w = policy.rho / std::max(prof.degrees(i), prof.degrees(j));
      }
      out.a(i, j) = w;
      out.a(j, i) = w;
    }
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += out.a(i, j);
    const double self = policy.rho - off;
    if (self < -1e-12)
      throw std::domain_error("apply_policy: negative self-weight at row " +
                              std::to_string(i));
    out.a(i, i) = std::max(self, 0.0);
  }
  return out;
}

// CTA mapping: A = (1 - mu) W for a right-stochastic W; row sums become 1 - mu.
inline Matrix cta_weights(const Matrix& w, double mu) {
  if (!(mu > 0.0) || mu >= 1.0)
    throw std::invalid_argument("cta_weights: mu must lie in (0,1)");
  if (w.rows() != w.cols()) throw std::invalid_argument("cta_weights: square matrix required");
  for (int i = 0; i < w.rows(); ++i) {
    if (w.row(i).minCoeff() < 0.0 || std::abs(w.row(i).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("cta_weights: matrix is not right-stochastic at row " +
                                  std::to_string(i));
  }
  return (1.0 - mu) * w;
}

struct RegularityViolation {
  std::string kind;  // symmetry | row_sum | support | sandwich | diagonal
  int i = 0;
  int j = 0;
  double magnitude = 0.0;
};

struct RegularityReport {
  std::vector<RegularityViolation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks every clause of the regular-diffusion assumption and reports the
// worst offender per clause.
inline RegularityReport validate_regular(const Matrix& a, const Graph& g,
                                         double rho, double kappa,
                                         double tol = 1e-12) {
  if (a.rows() != g.n || a.cols() != g.n)
    throw std::invalid_argument("validate_regular: shape mismatch");
  RegularityReport report;
  const DegreeProfile prof = degrees(g);

  // One entry per violated clause, carrying the worst offending (i,j).
  struct Worst {
    RegularityViolation v;
    double mag = 0.0;
  };
  Worst symmetry, row_sum, support, sandwich, diagonal;
  auto update = [](Worst& w, const char* kind, int i, int j, double mag) {
    if (mag > w.mag) w = {{kind, i, j, mag}, mag};
  };

  const double lo = kappa / prof.d_max;
  const double hi = kappa / prof.d_min;
  for (int i = 0; i < g.n; ++i) {
    update(row_sum, "row_sum", i, i, std::abs(a.row(i).sum() - rho));
    if (a(i, i) < 0.0) update(diagonal, "diagonal", i, i, -a(i, i));
    for (int j = 0; j < g.n; ++j) {
      if (i == j) continue;
      if (j > i) update(symmetry, "symmetry", i, j, std::abs(a(i, j) - a(j, i)));
      if (g.adj(i, j)) {
        if (a(i, j) < lo)
          update(sandwich, "sandwich", i, j, lo - a(i, j));
        else if (a(i, j) > hi)
          update(sandwich, "sandwich", i, j, a(i, j) - hi);
      } else if (a(i, j) != 0.0) {
        update(support, "support", i, j, std::abs(a(i, j)));
      }
    }
  }
  for (const Worst* w : {&symmetry, &row_sum, &support, &sandwich, &diagonal})
    if (w->mag > tol) report.violations.push_back(w->v);
  return report;
}

}  // namespace nettomo
