#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nettomo/combination.hpp"
#include "nettomo/estimators.hpp"
#include "nettomo/graph.hpp"

namespace nettomo {

// Two-cluster split of scalar values. Candidate splits are restricted to the
// k-means-admissible ones (centroid midpoint separates the sorted clusters);
// among those the split with the largest centroid distance wins, which keeps
// heavily unbalanced clusters recoverable.
struct ClusterResult {
  std::optional<int> split_index;  // j*: first j sorted values form C0
  double c0 = 0.0;
  double c1 = 0.0;
  std::vector<int> assignments;  // per input value, 0 or 1
};

inline ClusterResult cluster_two(const std::vector<double>& values) {
  const int l = static_cast<int>(values.size());
  if (l == 0) throw std::invalid_argument("cluster_two: empty input");
  ClusterResult res;
  res.assignments.assign(l, 0);
  if (l == 1) {
    res.c0 = values[0];
    res.c1 = values[0];
    return res;
  }

  std::vector<int> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&values](int a, int b) { return values[a] < values[b]; });
  std::vector<double> v(l);
  for (int i = 0; i < l; ++i) v[i] = values[order[i]];

  double vmax_abs = 0.0;
  for (double x : v) vmax_abs = std::max(vmax_abs, std::abs(x));
  if (v[l - 1] - v[0] <= 1e-12 * (1.0 + vmax_abs)) {
    // Degenerate: all values coincide, single cluster.
    res.c0 = std::accumulate(v.begin(), v.end(), 0.0) / l;
    res.c1 = res.c0;
    return res;
  }

  std::vector<double> prefix(l + 1, 0.0);
  for (int i = 0; i < l; ++i) prefix[i + 1] = prefix[i] + v[i];
  const double total = prefix[l];

  int best_j = -1;
  double best_gap = -std::numeric_limits<double>::infinity();
  double best_c0 = 0.0, best_c1 = 0.0;
  for (int j = 1; j < l; ++j) {
    if (v[j - 1] == v[j]) continue;  // equal values collapse to one candidate
    const double c0 = prefix[j] / j;
    const double c1 = (total - prefix[j]) / (l - j);
    const double mid = 0.5 * (c0 + c1);
    if (!(v[j - 1] <= mid && mid <= v[j])) continue;  // not k-means admissible
    const double gap = c1 - c0;
    if (gap > best_gap) {
      best_gap = gap;
      best_j = j;
      best_c0 = c0;
      best_c1 = c1;
    }
  }
  if (best_j < 0) {
    // No admissible split (can only happen through ties); fall back to the
    // largest-gap boundary between distinct values.
    for (int j = 1; j < l; ++j) {
      if (v[j - 1] == v[j]) continue;
      const double gap = (total - prefix[j]) / (l - j) - prefix[j] / j;
      if (gap > best_gap) {
        best_gap = gap;
        best_j = j;
        best_c0 = prefix[j] / j;
        best_c1 = (total - prefix[j]) / (l - j);
      }
    }
  }
  res.split_index = best_j;
  res.c0 = best_c0;
  res.c1 = best_c1;
  for (int i = best_j; i < l; ++i) res.assignments[order[i]] = 1;
  return res;
}

enum class Symmetrize { logical_or, logical_and };

struct RecoveredGraph {
  AdjMatrix adj;  // |S| x |S|, symmetric, zero diagonal
  ClusterResult clusters;
  bool degenerate = false;  // single cluster -> all-disconnected call
};

// G_hat = clu(M): cluster the L = S(S-1) ordered off-diagonal entries, map
// class C1 to edges, then symmetrize.
inline RecoveredGraph recover_graph(const EstimateMatrix& est,
                                    Symmetrize rule = Symmetrize::logical_or) {
  const int k = static_cast<int>(est.values.rows());
  if (k < 2) throw std::invalid_argument("recover_graph: need |S| >= 2");
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(k) * (k - 1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) entries.push_back(est.values(i, j));

  RecoveredGraph out;
  out.clusters = cluster_two(entries);
  out.adj = AdjMatrix::Zero(k, k);
  out.degenerate = !out.clusters.split_index.has_value();
  if (out.degenerate) return out;  // no gap: conservative all-disconnected call

  std::size_t idx = 0;
  AdjMatrix raw = AdjMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) raw(i, j) = static_cast<std::uint8_t>(out.clusters.assignments[idx++]);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const bool edge = rule == Symmetrize::logical_or ? (raw(i, j) || raw(j, i))
                                                       : (raw(i, j) && raw(j, i));
      out.adj(i, j) = edge;
      out.adj(j, i) = edge;
    }
  return out;
}

// Margin diagnostics against the ground-truth combination matrix.
struct MarginReport {
  bool disconnected_defined = false;
  bool connected_defined = false;
  double delta_low = 0.0;   // min over disconnected pairs
  double delta_high = 0.0;  // max over disconnected pairs
  double Delta_low = 0.0;   // min over connected pairs
  double Delta_high = 0.0;  // max over connected pairs
  double scale = 0.0;       // s_N = N p_N
  double scaled_delta_low = 0.0;
  double scaled_delta_high = 0.0;
  double scaled_Delta_low = 0.0;
  double scaled_Delta_high = 0.0;
  double empirical_bias = 0.0;  // s_N * mean over disconnected entries
  double empirical_gap = 0.0;   // s_N * (Delta_low - delta_high)
};

inline MarginReport margins(const EstimateMatrix& est, const CombinationMatrix& a,
                            int n_nodes, double p) {
  const int k = static_cast<int>(est.values.rows());
  const Matrix truth = restrict(a.a, est.s);
  if (truth.rows() != k)
    throw std::invalid_argument("margins: estimate and observation set disagree");
  MarginReport rep;
  rep.scale = static_cast<double>(n_nodes) * p;
  double disc_sum = 0.0;
  long disc_count = 0;
  rep.delta_low = rep.Delta_low = std::numeric_limits<double>::infinity();
  rep.delta_high = rep.Delta_high = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double v = est.values(i, j);
      if (truth(i, j) > 0.0) {
        rep.connected_defined = true;
        rep.Delta_low = std::min(rep.Delta_low, v);
        rep.Delta_high = std::max(rep.Delta_high, v);
      } else {
        rep.disconnected_defined = true;
        rep.delta_low = std::min(rep.delta_low, v);
        rep.delta_high = std::max(rep.delta_high, v);
        disc_sum += v;
        ++disc_count;
      }
    }
  if (rep.disconnected_defined) {
    rep.scaled_delta_low = rep.scale * rep.delta_low;
    rep.scaled_delta_high = rep.scale * rep.delta_high;
    rep.empirical_bias = rep.scale * disc_sum / disc_count;
  }
  if (rep.connected_defined) {
    rep.scaled_Delta_low = rep.scale * rep.Delta_low;
    rep.scaled_Delta_high = rep.scale * rep.Delta_high;
  }
  if (rep.disconnected_defined && rep.connected_defined)
    rep.empirical_gap = rep.scale * (rep.Delta_low - rep.delta_high);
  return rep;
}

inline bool recovery_indicator(const AdjMatrix& recovered, const AdjMatrix& truth) {
  if (recovered.rows() != truth.rows() || recovered.cols() != truth.cols())
    throw std::invalid_argument("recovery_indicator: shape mismatch");
  return recovered == truth;
}

// Ground-truth subgraph adjacency over the probed set.
inline AdjMatrix truth_subgraph(const Graph& g, const ObservationSet& s) {
  const int k = s.size();
  AdjMatrix out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out(i, j) = (i == j) ? 0 : g.adj(s.indices[i], s.indices[j]);
  return out;
}

}  // namespace nettomo
