#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "nettomo/combination.hpp"
#include "nettomo/graph.hpp"

namespace nettomo {

struct SampleBlock;  // diffusion.hpp

enum class CorrelationKind { exact, empirical };

struct CorrelationPair {
  Matrix r0;
  Matrix r1;
  CorrelationKind kind = CorrelationKind::exact;
  long n_samples = 0;  // empirical only
};

// Principal submatrix [M]_S.
inline Matrix restrict(const Matrix& m, const ObservationSet& s) {
  const int k = s.size();
  for (int i : s.indices)
    if (i < 0 || i >= m.rows())
      throw std::out_of_range("restrict: observation index out of range");
  Matrix out(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) out(r, c) = m(s.indices[r], s.indices[c]);
  return out;
}

// Rectangular block [M]_{RT} for arbitrary row/column index sets.
inline Matrix restrict_block(const Matrix& m, const std::vector<int>& rows,
                             const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

// Steady-state correlation R_0 = sigma^2 (I - A^2)^{-1}, via an SPD solve.
inline Matrix exact_r0(const CombinationMatrix& a, double sigma) {
  const int n = a.size();
  Matrix lhs = Matrix::Identity(n, n) - a.a * a.a;
  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("exact_r0: I - A^2 is not positive definite (unstable A?)");
  Matrix r0 = llt.solve(Matrix::Identity(n, n) * (sigma * sigma));
  r0 = ((r0 + r0.transpose()) * 0.5).eval();
  return r0;
}

// One-lag correlation R_1 = A R_0.
inline Matrix exact_r1(const CombinationMatrix& a, double sigma) {
  Matrix r1 = a.a * exact_r0(a, sigma);
  r1 = ((r1 + r1.transpose()) * 0.5).eval();
  return r1;
}

inline CorrelationPair exact_correlations(const CombinationMatrix& a, double sigma) {
  CorrelationPair pair;
  pair.r0 = exact_r0(a, sigma);
  pair.r1 = a.a * pair.r0;
  pair.r1 = ((pair.r1 + pair.r1.transpose()) * 0.5).eval();
  pair.kind = CorrelationKind::exact;
  return pair;
}

// Raw second moments over the probed rows:
//   R0_hat = (1/n) sum_i y_i y_i',  R1_hat = (1/(n-1)) sum_{i>=2} y_i y_{i-1}'.
// The process is zero-mean by model, so no de-meaning unless requested.
inline CorrelationPair empirical_correlations(const Matrix& data, bool demean = false) {
  const long n = data.cols();
  if (n < 2)
    throw std::invalid_argument("empirical_correlations: need at least 2 samples");
  Matrix y = data;
  if (demean) y.colwise() -= data.rowwise().mean();
  CorrelationPair pair;
  pair.r0 = (y * y.transpose()) / static_cast<double>(n);
  pair.r0 = ((pair.r0 + pair.r0.transpose()) * 0.5).eval();
  pair.r1 = (y.rightCols(n - 1) * y.leftCols(n - 1).transpose()) /
            static_cast<double>(n - 1);
  pair.kind = CorrelationKind::empirical;
  pair.n_samples = n;
  return pair;
}

}  // namespace nettomo
