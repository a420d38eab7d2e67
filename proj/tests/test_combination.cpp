#include <catch2/catch_amalgamated.hpp>

#include "nettomo/combination.hpp"
#include "nettomo/io.hpp"

using namespace nettomo;

namespace {

Graph star5() {
  Graph g(5);
  for (int leaf = 1; leaf < 5; ++leaf) g.add_edge(0, leaf);
  return g;
}

}  // namespace

TEST_CASE("metropolis on the empty graph is rho * I") {
  Graph g(4);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::metropolis(0.99));
  CHECK(a.a.isApprox(0.99 * Matrix::Identity(4, 4)));
  CHECK(a.kappa == 0.99);
}

TEST_CASE("metropolis on the triangle, hand computation") {
  const Graph g = generate_er(3, 1.0, 1);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::metropolis(0.99));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a.a(i, j) == Catch::Approx(0.33));
}

TEST_CASE("laplacian on the star, hand computation") {
  const CombinationMatrix a =
      apply_policy(star5(), CombinationPolicy::laplacian(0.9, 1.0));
  for (int leaf = 1; leaf < 5; ++leaf) {
    CHECK(a.a(0, leaf) == Catch::Approx(0.18));
    CHECK(a.a(leaf, leaf) == Catch::Approx(0.72));
  }
  CHECK(a.a(0, 0) == Catch::Approx(0.18));
  CHECK(a.kappa == Catch::Approx(0.9));
}

TEST_CASE("laplacian off-diagonals are all rho*lambda/d_max") {
  const Graph g = generate_er(20, 0.4, 5);
  const auto prof = degrees(g);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::laplacian(0.95, 0.8));
  const double w = 0.95 * 0.8 / prof.d_max;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      if (i != j && g.adj(i, j)) CHECK(a.a(i, j) == Catch::Approx(w));
}

TEST_CASE("apply_policy row sums, symmetry and stability") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generate_er(25, 0.3, seed);
    for (const auto& policy : {CombinationPolicy::metropolis(0.99),
                               CombinationPolicy::laplacian(0.99, 0.9)}) {
      const CombinationMatrix a = apply_policy(g, policy);
      for (int i = 0; i < g.n; ++i) {
        CHECK(a.a.row(i).sum() == Catch::Approx(policy.rho).margin(1e-12));
        CHECK(a.a(i, i) >= 0.0);
      }
      CHECK(a.a.isApprox(a.a.transpose()));
      // ||A||_inf = rho < 1 bounds the spectral radius.
      CHECK(a.a.cwiseAbs().rowwise().sum().maxCoeff() <= policy.rho + 1e-12);
    }
  }
}

TEST_CASE("apply_policy output passes validate_regular on a 100-seed sweep") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 3 + static_cast<int>(seed % 48);
    const Graph g = generate_er(n, 0.1 + 0.8 * ((seed * 7) % 10) / 10.0, seed);
    for (const auto& policy : {CombinationPolicy::metropolis(0.99),
                               CombinationPolicy::laplacian(0.9, 0.7)}) {
      const CombinationMatrix a = apply_policy(g, policy);
      const RegularityReport rep = validate_regular(a.a, g, a.rho, a.kappa);
      INFO("seed " << seed << " policy " << policy.name());
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("validate_regular flags specific violations") {
  const Graph g = generate_er(6, 0.5, 3);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::metropolis(0.99));

  SECTION("row sum violation") {
    Matrix bad = a.a;
    bad(2, 2) -= 0.01;  // row 2 now sums to 0.98
    const RegularityReport rep = validate_regular(bad, g, 0.99, a.kappa);
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.violations)
      if (v.kind == "row_sum" && v.i == 2) found = true;
    CHECK(found);
  }

  SECTION("support violation") {
    Matrix bad = a.a;
    int bi = -1, bj = -1;
    for (int i = 0; i < g.n && bi < 0; ++i)
      for (int j = 0; j < g.n; ++j)
        if (i != j && !g.adj(i, j)) { bi = i; bj = j; break; }
    REQUIRE(bi >= 0);
    bad(bi, bj) = 0.1;
    const RegularityReport rep = validate_regular(bad, g, 0.99, a.kappa);
    bool found = false;
    for (const auto& v : rep.violations)
      if (v.kind == "support") found = true;
    CHECK(found);
  }

  SECTION("asymmetry is flagged") {
    Matrix bad = a.a;
    int bi = -1, bj = -1;
    for (int i = 0; i < g.n && bi < 0; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (g.adj(i, j)) { bi = i; bj = j; break; }
    REQUIRE(bi >= 0);
    bad(bi, bj) += 1e-6;
    const RegularityReport rep = validate_regular(bad, g, 0.99, a.kappa);
    bool found = false;
    for (const auto& v : rep.violations)
      if (v.kind == "symmetry") found = true;
    CHECK(found);
  }
}

TEST_CASE("metropolis sandwich is tight where max degree is attained") {
  const Graph g = generate_er(30, 0.3, 11);
  const auto prof = degrees(g);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::metropolis(0.99));
  double min_offdiag = 1.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (i != j && g.adj(i, j)) min_offdiag = std::min(min_offdiag, a.a(i, j));
  CHECK(min_offdiag == Catch::Approx(a.kappa / prof.d_max));
}

TEST_CASE("cta_weights") {
  CHECK(cta_weights(Matrix::Identity(3, 3), 0.01)
            .isApprox(0.99 * Matrix::Identity(3, 3)));

  const Matrix uniform = Matrix::Constant(2, 2, 0.5);
  const Matrix scaled = cta_weights(uniform, 0.1);
  CHECK(scaled(0, 0) == Catch::Approx(0.45));
  CHECK(scaled(1, 1) == Catch::Approx(0.45));

  Matrix not_stochastic = Matrix::Constant(2, 2, 0.6);
  CHECK_THROWS_AS(cta_weights(not_stochastic, 0.1), std::invalid_argument);
}

TEST_CASE("cta_weights spectral radius bounded by row sum") {
  CounterRng rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix w(4, 4);
    for (int i = 0; i < 4; ++i) {
      double sum = 0.0;
      for (int j = 0; j < 4; ++j) {
        w(i, j) = rng.uniform01();
        sum += w(i, j);
      }
      w.row(i) /= sum;
    }
    const double mu = 0.05 + 0.9 * rng.uniform01();
    const Matrix a = cta_weights(w, mu);
    // Gershgorin: every eigenvalue modulus is at most the max row sum 1 - mu.
    const auto eigs = Eigen::EigenSolver<Matrix>(a).eigenvalues();
    CHECK(eigs.cwiseAbs().maxCoeff() <= 1.0 - mu + 1e-10);
  }
}

TEST_CASE("combination matrix JSON round trip") {
  const Graph g = generate_er(8, 0.4, 2);
  const CombinationMatrix a = apply_policy(g, CombinationPolicy::metropolis(0.95));
  const CombinationMatrix back = combination_from_json(to_json(a));
  CHECK(back.rho == a.rho);
  CHECK(back.kappa == a.kappa);
  CHECK(back.a == a.a);

  const Graph gback = graph_from_json(to_json(g));
  CHECK(gback.adj == g.adj);
}
