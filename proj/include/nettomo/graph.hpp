#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nettomo/rng.hpp"

namespace nettomo {

using AdjMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Undirected graph as a dense symmetric 0/1 adjacency with zero diagonal.
struct Graph {
  int n = 0;
  AdjMatrix adj;

  Graph() = default;
  explicit Graph(int n_nodes) : n(n_nodes), adj(AdjMatrix::Zero(n_nodes, n_nodes)) {
    if (n_nodes < 2) throw std::invalid_argument("Graph: need at least 2 nodes");
  }

  bool edge(int i, int j) const { return adj(i, j) != 0; }

  void add_edge(int i, int j) {
    if (i == j) throw std::invalid_argument("Graph: no self loops");
    adj(i, j) = 1;
    adj(j, i) = 1;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (adj(i, j)) out.emplace_back(i, j);
    return out;
  }
};

// Node degrees d_i = 1 + |neighbors of i| (the node counts itself).
struct DegreeProfile {
  Eigen::VectorXi degrees;
  int d_min = 0;
  int d_max = 0;
};

// Sorted probed-node subset with its target fraction.
struct ObservationSet {
  std::vector<int> indices;
  double xi_target = 0.0;

  int size() const { return static_cast<int>(indices.size()); }
};

// Connection-probability schedule p_N.
class ConnectionRegime {
 public:
  static ConnectionRegime dense(double p) {
    check_probability(p);
    return ConnectionRegime("dense", [p](int) { return p; });
  }

  // p_N = c (log N) / N^a with a < 1, clipped to (0,1].
  static ConnectionRegime uniform_sparse(double c, double a) {
    if (c <= 0.0 || a >= 1.0)
      throw std::invalid_argument("uniform_sparse: need c > 0 and a < 1");
    return ConnectionRegime("uniform_sparse", [c, a](int n) {
      const double p = c * std::log(static_cast<double>(n)) /
                       std::pow(static_cast<double>(n), a);
      return std::min(p, 1.0);
    });
  }

  // p_N = (log N + c_N) / N with a caller-supplied sequence c_N.
  static ConnectionRegime very_sparse(std::function<double(int)> c_of) {
    return ConnectionRegime("very_sparse", [c_of = std::move(c_of)](int n) {
      const double p = (std::log(static_cast<double>(n)) + c_of(n)) / n;
      return std::min(p, 1.0);
    });
  }

  static ConnectionRegime custom(std::function<double(int)> p_of) {
    return ConnectionRegime("custom", std::move(p_of));
  }

  double p_of(int n) const {
    const double p = p_of_(n);
    if (!(p > 0.0) || p > 1.0)
      throw std::domain_error("ConnectionRegime: p_N out of (0,1] at N=" +
                              std::to_string(n));
    return p;
  }

  const std::string& kind() const { return kind_; }

 private:
  ConnectionRegime(std::string kind, std::function<double(int)> p_of)
      : kind_(std::move(kind)), p_of_(std::move(p_of)) {}

  static void check_probability(double p) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("probability must lie in (0,1]");
  }

  std::string kind_;
  std::function<double(int)> p_of_;
};

// Erdos-Renyi draw: every unordered pair is an independent Bernoulli(p).
inline Graph generate_er(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_er: need n >= 2");
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("generate_er: p must lie in [0,1]");
  Graph g(n);
  CounterRng rng = CounterRng::derive(seed, 0x6772617068ULL);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.add_edge(i, j);
  return g;
}

inline DegreeProfile degrees(const Graph& g) {
  DegreeProfile prof;
  prof.degrees = Eigen::VectorXi(g.n);
  for (int i = 0; i < g.n; ++i) {
    int s = 1;
    for (int j = 0; j < g.n; ++j) s += g.adj(i, j);
    prof.degrees(i) = s;
  }
  prof.d_min = prof.degrees.minCoeff();
  prof.d_max = prof.degrees.maxCoeff();
  return prof;
}

inline bool is_connected(const Graph& g) {
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < g.n; ++v) {
      if (g.adj(u, v) && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.n;
}

// |S| = round(xi * n) indices drawn uniformly without replacement, sorted.
inline ObservationSet sample_observation_set(int n, double xi, std::uint64_t seed) {
  if (!(xi > 0.0) || xi >= 1.0)
    throw std::invalid_argument("sample_observation_set: xi must lie in (0,1)");
  const int s = static_cast<int>(std::lround(xi * n));
  if (s < 2 || s >= n)
    throw std::invalid_argument(
        "sample_observation_set: degenerate subset, round(xi*n) must lie in [2, n)");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  CounterRng rng = CounterRng::derive(seed, 0x6f6273736574ULL);
  for (int i = 0; i < s; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  ObservationSet out;
  out.indices.assign(pool.begin(), pool.begin() + s);
  std::sort(out.indices.begin(), out.indices.end());
  out.xi_target = xi;
  return out;
}

inline std::vector<int> complement_of(const ObservationSet& s, int n) {
  std::vector<char> in_s(n, 0);
  for (int i : s.indices) in_s[i] = 1;
  std::vector<int> out;
  out.reserve(n - s.size());
  for (int i = 0; i < n; ++i)
    if (!in_s[i]) out.push_back(i);
  return out;
}

// (d_min / (N p), d_max / (N p)): both converge to 1 under uniform concentration.
inline std::pair<double, double> concentration_ratio(const DegreeProfile& prof,
                                                     int n, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("concentration_ratio: p must be > 0");
  const double scale = static_cast<double>(n) * p;
  return {prof.d_min / scale, prof.d_max / scale};
}

}  // namespace nettomo
