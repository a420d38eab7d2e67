#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "nettomo/graph.hpp"

using namespace nettomo;

TEST_CASE("generate_er degenerate probabilities") {
  const Graph empty = generate_er(4, 0.0, 1);
  CHECK(empty.edges().empty());

  const Graph complete = generate_er(4, 1.0, 1);
  const DegreeProfile prof = degrees(complete);
  for (int i = 0; i < 4; ++i) CHECK(prof.degrees(i) == 4);
}

TEST_CASE("generate_er rejects invalid probability") {
  CHECK_THROWS_AS(generate_er(4, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_er(4, 1.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_er(1, 0.5, 1), std::invalid_argument);
}

TEST_CASE("generate_er mean degree matches binomial moments") {
  // d_i - 1 ~ Binomial(n-1, p); mean over nodes stays within 3 sigma of the
  // per-node mean (a loose bound, the average concentrates much faster).
  const int n = 1000;
  const double p = 0.1;
  const Graph g = generate_er(n, p, 7);
  const DegreeProfile prof = degrees(g);
  const double mean = prof.degrees.cast<double>().mean();
  const double expected = 1.0 + (n - 1) * p;
  const double sigma = std::sqrt((n - 1) * p * (1 - p));
  CHECK(std::abs(mean - expected) < 3.0 * sigma);
}

TEST_CASE("generated graphs are symmetric with zero diagonal") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const Graph g = generate_er(60, 0.3, seed);
    for (int i = 0; i < g.n; ++i) {
      CHECK(g.adj(i, i) == 0);
      for (int j = 0; j < g.n; ++j) CHECK(g.adj(i, j) == g.adj(j, i));
    }
  }
}

TEST_CASE("generate_er is reproducible for a fixed seed") {
  const Graph a = generate_er(200, 0.2, 42);
  const Graph b = generate_er(200, 0.2, 42);
  CHECK(a.adj == b.adj);
  const Graph c = generate_er(200, 0.2, 43);
  CHECK(a.adj != c.adj);
}

TEST_CASE("degrees on hand-counted graphs") {
  Graph empty(4);
  const DegreeProfile pe = degrees(empty);
  CHECK(pe.d_min == 1);
  CHECK(pe.d_max == 1);

  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  const DegreeProfile pp = degrees(path);
  CHECK(pp.degrees(0) == 2);
  CHECK(pp.degrees(1) == 3);
  CHECK(pp.degrees(2) == 2);
}

TEST_CASE("degree lower bound, isolated node iff d_min == 1") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = generate_er(30, 0.05, seed);
    const DegreeProfile prof = degrees(g);
    CHECK(prof.d_min >= 1);
    bool isolated = false;
    for (int i = 0; i < g.n; ++i) {
      int neighbors = 0;
      for (int j = 0; j < g.n; ++j) neighbors += g.adj(i, j);
      if (neighbors == 0) isolated = true;
    }
    CHECK((prof.d_min == 1) == isolated);
  }
}

TEST_CASE("is_connected") {
  Graph empty(3);
  CHECK_FALSE(is_connected(empty));
  CHECK(is_connected(generate_er(3, 1.0, 1)));

  Graph two_pairs(4);
  two_pairs.add_edge(0, 1);
  two_pairs.add_edge(2, 3);
  CHECK_FALSE(is_connected(two_pairs));
}

TEST_CASE("sample_observation_set size and bounds") {
  const ObservationSet s = sample_observation_set(10, 0.6, 1);
  CHECK(s.size() == 6);
  CHECK_THROWS_AS(sample_observation_set(5, 0.99, 1), std::invalid_argument);

  const ObservationSet big = sample_observation_set(1000, 0.2, 3);
  CHECK(big.size() == 200);
  std::set<int> unique(big.indices.begin(), big.indices.end());
  CHECK(unique.size() == 200);
  CHECK(std::is_sorted(big.indices.begin(), big.indices.end()));
  CHECK(*unique.begin() >= 0);
  CHECK(*unique.rbegin() < 1000);
}

TEST_CASE("complement_of partitions the node set") {
  const ObservationSet s = sample_observation_set(50, 0.4, 9);
  const std::vector<int> latent = complement_of(s, 50);
  CHECK(static_cast<int>(latent.size()) + s.size() == 50);
  std::set<int> all(s.indices.begin(), s.indices.end());
  all.insert(latent.begin(), latent.end());
  CHECK(all.size() == 50);
}

TEST_CASE("concentration_ratio closed cases") {
  const Graph complete = generate_er(100, 1.0, 1);
  const auto [rmin_c, rmax_c] = concentration_ratio(degrees(complete), 100, 1.0);
  CHECK(rmin_c == 1.0);
  CHECK(rmax_c == 1.0);

  Graph empty(10);
  const auto [rmin_e, rmax_e] = concentration_ratio(degrees(empty), 10, 0.5);
  CHECK(rmin_e == Catch::Approx(0.2));
  CHECK(rmax_e == Catch::Approx(0.2));
}

TEST_CASE("degree extremes at N=2000, p=0.1 match binomial-extreme scale") {
  // Expected fluctuation of the extremes: sigma*sqrt(2 ln N) around Np with
  // sigma = sqrt(Np(1-p)), i.e. a ratio band of roughly 1 +/- 0.26 here.
  int inside = 0;
  const int seeds = 100;
  double rmin_sum = 0.0, rmax_sum = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    const Graph g = generate_er(2000, 0.1, 1000 + seed);
    const auto [rmin, rmax] = concentration_ratio(degrees(g), 2000, 0.1);
    rmin_sum += rmin;
    rmax_sum += rmax;
    if (rmin >= 0.65 && rmax <= 1.35) ++inside;
  }
  CHECK(inside >= 99);
  CHECK(rmin_sum / seeds == Catch::Approx(0.786).margin(0.03));
  CHECK(rmax_sum / seeds == Catch::Approx(1.243).margin(0.03));
}

TEST_CASE("concentration sharpens along the uniform regime", "[slow]") {
  // p_N = omega_N log N / N with omega_N = log N: the fraction of seeds where
  // either ratio strays beyond 15% should fall as N grows.
  const std::vector<int> sizes{250, 500, 1000, 2000};
  const int seeds = 200;
  std::vector<double> stray_fraction;
  for (int n : sizes) {
    const double logn = std::log(static_cast<double>(n));
    const double p = std::min(1.0, logn * logn / n);
    int stray = 0;
    for (int seed = 0; seed < seeds; ++seed) {
      const auto prof = degrees(generate_er(n, p, 7000 + seed));
      const auto [rmin, rmax] = concentration_ratio(prof, n, p);
      if (std::max(std::abs(rmin - 1.0), std::abs(rmax - 1.0)) > 0.15) ++stray;
    }
    stray_fraction.push_back(static_cast<double>(stray) / seeds);
  }
  int improvements = 0;
  for (std::size_t i = 1; i < stray_fraction.size(); ++i)
    if (stray_fraction[i] <= stray_fraction[i - 1]) ++improvements;
  CHECK(improvements >= 3);
}

TEST_CASE("connection regimes stay in range and reject bad parameters") {
  const ConnectionRegime dense = ConnectionRegime::dense(0.1);
  CHECK(dense.p_of(100) == 0.1);
  CHECK(dense.p_of(100000) == 0.1);

  const ConnectionRegime sparse = ConnectionRegime::uniform_sparse(0.25, 0.5);
  for (int n : {100, 1000, 10000}) {
    const double p = sparse.p_of(n);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(sparse.p_of(400) == Catch::Approx(0.25 * std::log(400.0) / 20.0));

  CHECK_THROWS_AS(ConnectionRegime::dense(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConnectionRegime::dense(1.5), std::invalid_argument);
  CHECK_THROWS_AS(ConnectionRegime::uniform_sparse(0.25, 1.0), std::invalid_argument);
}
