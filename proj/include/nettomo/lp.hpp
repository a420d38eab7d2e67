#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nettomo {

struct LpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  bool optimal = false;
  int iterations = 0;
};

// Dense two-phase simplex with Bland's rule.
//   minimize c'x  subject to  A x <= b,  x >= 0.
// Sized for the per-row Chebyshev problems of this project (a few hundred
// variables), not for general large-scale use.
class SimplexSolver {
 public:
  SimplexSolver(int max_iterations, double tol = 1e-9)
      : max_iterations_(max_iterations), tol_(tol) {}

  LpResult minimize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& c) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    if (b.size() != m || c.size() != n)
      throw std::invalid_argument("SimplexSolver: inconsistent shapes");

    // Standard form with slacks; rows with negative rhs are negated and get
    // an artificial variable (their slack enters with coefficient -1).
    std::vector<int> artificial_rows;
    for (int i = 0; i < m; ++i)
      if (b(i) < 0.0) artificial_rows.push_back(i);
    const int n_art = static_cast<int>(artificial_rows.size());
    const int total = n + m + n_art;  // structural + slack + artificial

    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, total + 1);
    basis_.assign(m, -1);
    int art_col = n + m;
    for (int i = 0; i < m; ++i) {
      const double sgn = b(i) < 0.0 ? -1.0 : 1.0;
      tab.row(i).head(n) = sgn * a.row(i);
      tab(i, n + i) = sgn;  // slack (surplus when negated)
      tab(i, total) = sgn * b(i);
      if (sgn < 0.0) {
        tab(i, art_col) = 1.0;
        basis_[i] = art_col++;
      } else {
        basis_[i] = n + i;
      }
    }

    LpResult res;
    res.x = Eigen::VectorXd::Zero(n);

    if (n_art > 0) {
      // Phase 1: minimize the sum of artificials.
      Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
      phase1.segment(n + m, n_art).setOnes();
      Eigen::VectorXd cost_row = reduced_costs(tab, phase1, total);
      if (!pivot_loop(tab, cost_row, phase1, total, total, res.iterations)) return res;
      double infeas = 0.0;
      for (int i = 0; i < m; ++i)
        if (basis_[i] >= n + m) infeas += tab(i, total);
      if (infeas > 1e-7) return res;  // infeasible (cannot happen for Chebyshev rows)
      // Drive any residual (degenerate) artificials out of the basis.
      for (int i = 0; i < m; ++i) {
        if (basis_[i] < n + m) continue;
        int enter = -1;
        for (int j = 0; j < n + m && enter < 0; ++j)
          if (std::abs(tab(i, j)) > tol_) enter = j;
        if (enter >= 0) pivot(tab, i, enter, total);
      }
    }

    // Phase 2 over structural + slack columns; artificial columns are frozen.
    Eigen::VectorXd full_cost = Eigen::VectorXd::Zero(total);
    full_cost.head(n) = c;
    Eigen::VectorXd cost_row = reduced_costs(tab, full_cost, total);
    for (int j = n + m; j < total; ++j) cost_row(j) = 1.0;  // never re-enter
    if (!pivot_loop(tab, cost_row, full_cost, n + m, total, res.iterations)) return res;

    for (int i = 0; i < m; ++i)
      if (basis_[i] < n) res.x(basis_[i]) = tab(i, total);
    res.objective = c.dot(res.x);
    res.optimal = true;
    return res;
  }

 private:
  Eigen::VectorXd reduced_costs(const Eigen::MatrixXd& tab,
                                const Eigen::VectorXd& cost, int total) const {
    Eigen::VectorXd row = cost;
    const int m = static_cast<int>(tab.rows());
    for (int i = 0; i < m; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) row -= cb * tab.row(i).head(total);
    }
    return row;
  }

  // `frozen_from`: columns at or beyond this index keep reduced cost 1 after a
  // recompute (phase-2 artificial freeze-out).
  bool pivot_loop(Eigen::MatrixXd& tab, Eigen::VectorXd& cost_row,
                  const Eigen::VectorXd& cost, int frozen_from, int total,
                  int& iterations) {
    const int m = static_cast<int>(tab.rows());
    bool fresh = false;  // cost_row recomputed since the last pivot
    while (true) {
      // Bland: smallest-index entering column with negative reduced cost.
      int enter = -1;
      for (int j = 0; j < total; ++j)
        if (cost_row(j) < -tol_) { enter = j; break; }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (tab(i, enter) <= tol_) continue;
        const double ratio = tab(i, total) / tab(i, enter);
        if (leave < 0 || ratio < best_ratio - tol_ ||
            (ratio < best_ratio + tol_ && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        // The incrementally updated cost row drifts; recompute it from scratch
        // once before trusting an apparent unbounded ray.
        if (!fresh) {
          cost_row = reduced_costs(tab, cost, total);
          for (int j = frozen_from; j < total; ++j) cost_row(j) = 1.0;
          fresh = true;
          continue;
        }
        if (cost_row(enter) >= -1e3 * tol_ ||
            tab.col(enter).cwiseAbs().maxCoeff() <= 1e3 * tol_) {
          cost_row(enter) = 0.0;  // numerically null direction, not a real ray
          continue;
        }
        throw std::runtime_error("SimplexSolver: unbounded problem");
      }
      fresh = false;
      pivot(tab, leave, enter, total);
      const double cr = cost_row(enter);
      cost_row -= cr * tab.row(leave).head(total);
      cost_row(enter) = 0.0;
      if (++iterations > max_iterations_)
        return false;
    }
  }

  void pivot(Eigen::MatrixXd& tab, int row, int col, int total) {
    tab.row(row) /= tab(row, col);
    const int m = static_cast<int>(tab.rows());
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = tab(i, col);
      if (f != 0.0) tab.row(i) -= f * tab.row(row);
    }
    basis_[row] = col;
  }

  int max_iterations_;
  double tol_;
  std::vector<int> basis_;
};

// One row of the regularized Granger problem:
//   minimize || x R0 - r1 ||_inf  subject to  ||x||_1 <= 1,
// as an LP over (u, v, t) with x = u - v.
inline LpResult chebyshev_l1_row(const Eigen::MatrixXd& r0,
                                 const Eigen::VectorXd& r1_row,
                                 int max_iterations = 0, double tol = 1e-9) {
  const int s = static_cast<int>(r0.rows());
  if (r0.cols() != s || r1_row.size() != s)
    throw std::invalid_argument("chebyshev_l1_row: inconsistent shapes");
  const int nvar = 2 * s + 1;
  const int ncon = 2 * s + 1;
  // Scale the data to unit max magnitude: the argmin is unchanged and the
  // simplex tolerances stay meaningful when R0 entries are large.
  const double scale =
      std::max({r0.cwiseAbs().maxCoeff(), r1_row.cwiseAbs().maxCoeff(), 1e-300});
  const Eigen::MatrixXd r0s = r0 / scale;
  const Eigen::VectorXd r1s = r1_row / scale;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ncon, nvar);
  Eigen::VectorXd b(ncon);
  //  (u - v) R0 - t <= r1  and  -(u - v) R0 - t <= -r1
  for (int j = 0; j < s; ++j) {
    a.row(j).head(s) = r0s.col(j).transpose();
    a.row(j).segment(s, s) = -r0s.col(j).transpose();
    a(j, 2 * s) = -1.0;
    b(j) = r1s(j);
    a.row(s + j) = -a.row(j);
    a(s + j, 2 * s) = -1.0;
    b(s + j) = -r1s(j);
  }
  a.row(2 * s).head(2 * s).setOnes();
  b(2 * s) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvar);
  c(2 * s) = 1.0;

  if (max_iterations <= 0) max_iterations = 50 * nvar;
  SimplexSolver solver(max_iterations, tol);
  LpResult lp = solver.minimize(a, b, c);
  if (!lp.optimal)
    throw std::runtime_error("chebyshev_l1_row: LP did not converge within iteration budget");
  LpResult out;
  out.x = lp.x.head(s) - lp.x.segment(s, s);
  out.objective = lp.objective * scale;
  out.optimal = true;
  out.iterations = lp.iterations;
  return out;
}

}  // namespace nettomo
