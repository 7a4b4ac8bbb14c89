#include "raopt/relax.hpp"

#include "raopt/instances.hpp"
#include "raopt/linalg.hpp"
#include "raopt/spectral.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace raopt;
using namespace raopt::testutil;

TEST_SUITE("relax") {

TEST_CASE("linear minimization over the cardinality polytope") {
  Vector g(3);
  g << 3.0, 1.0, 2.0;
  SUBCASE("two smallest entries") {
    Vector want(3);
    want << 0.0, 1.0, 1.0;
    CHECK((cardinality_lmo(g, 2, {}) - want).norm() == 0.0);
  }
  SUBCASE("fixing to zero excludes a coordinate") {
    Fixings fixings;
    fixings.zero = {1};
    Vector want(3);
    want << 0.0, 0.0, 1.0;
    CHECK((cardinality_lmo(g, 1, fixings) - want).norm() == 0.0);
  }
  SUBCASE("ties break to the lowest index") {
    Vector tied(3);
    tied << 1.0, 1.0, 2.0;
    Vector want(3);
    want << 1.0, 0.0, 0.0;
    CHECK((cardinality_lmo(tied, 1, {}) - want).norm() == 0.0);
  }
  SUBCASE("infeasible fixing counts are rejected") {
    Fixings fixings;
    fixings.one = {0, 1};
    CHECK_THROWS_AS(cardinality_lmo(g, 1, fixings), InputError);
    Fixings crowded;
    crowded.zero = {0, 1, 2};
    CHECK_THROWS_AS(cardinality_lmo(g, 1, crowded), InputError);
  }
}

TEST_CASE("solver convergence basics") {
  SUBCASE("constant objective converges immediately") {
    const Oracle oracle = [](const Vector& x) {
      return OracleEval{4.25, Vector::Zero(x.size())};
    };
    const RelaxationReport report = frank_wolfe(oracle, 5, 2, {});
    CHECK(report.converged);
    CHECK(report.iterations == 1);
    CHECK(report.primal == doctest::Approx(4.25));
    CHECK(report.dual_lb == doctest::Approx(4.25));
  }
  SUBCASE("non-finite oracle output raises a numeric error") {
    const Oracle oracle = [](const Vector& x) {
      return OracleEval{std::nan(""), Vector::Zero(x.size())};
    };
    CHECK_THROWS_AS(frank_wolfe(oracle, 4, 2, {}), NumericError);
  }
}

TEST_CASE("orthonormal instance closed forms") {
  const ExperimentInstance inst = unit_basis(4, 1.0);
  const double z2 = unit_basis_optimum(4, 2, 1.0);  // 3.0

  SUBCASE("envelope relaxation is tight") {
    const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRii, 2);
    CHECK(std::abs(report.primal - z2) <= 1e-4);
    CHECK(std::abs(report.dual_lb - z2) <= 1e-4);
    CHECK(report.converged);
  }
  SUBCASE("box relaxation settles at the uniform design value") {
    const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRi, 2);
    CHECK(std::abs(report.primal - 8.0 / 3.0) <= 1e-4);
    CHECK(std::abs(report.dual_lb - 8.0 / 3.0) <= 1e-4);
  }
}

TEST_CASE("box relaxation at k = n has a unique feasible point") {
  const ExperimentInstance inst = gaussian_instance(6, 3, 21, 0.8);
  const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRi, 6);
  std::vector<int> all(6);
  for (int i = 0; i < 6; ++i) all[i] = i;
  CHECK(rel_err(report.primal, objective_value(inst, all)) <= 1e-9);
  CHECK(report.design.x.minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("box relaxation degrades as the ridge vanishes") {
  // With orthonormal experiments and tiny lambda, the relaxation value stays
  // bounded by d*n/(k + n*lambda) while the integer optimum blows up.
  const double lambda = 0.01;
  const ExperimentInstance inst = unit_basis(4, lambda);
  const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRi, 2);
  const double cap = 4.0 * 4.0 / (2.0 + 4.0 * lambda);
  CHECK(report.primal <= cap + 1e-6);
  const double z2 = unit_basis_optimum(4, 2, lambda);
  CHECK(z2 == doctest::Approx(2.0 / 1.01 + 2.0 / 0.01).epsilon(1e-12));
  CHECK(z2 / report.dual_lb > 20.0);
}

TEST_CASE("submatrix relaxation reaches the negative-bound regime") {
  const ExperimentInstance inst = scalar_toy();
  const Oracle oracle = make_relaxation_oracle(inst, RelaxKind::AmespR, 2);

  SUBCASE("uniform two-thirds design evaluates to -1/28") {
    const OracleEval eval = oracle(Vector::Constant(3, 2.0 / 3.0));
    CHECK(std::abs(eval.value - (-1.0 / 28.0)) <= 1e-9);
  }
  SUBCASE("optimal value sits at or below the feasible value") {
    const RelaxationReport report = solve_relaxation(inst, RelaxKind::AmespR, 2);
    CHECK(report.primal <= -1.0 / 28.0 + 1e-9);
    CHECK(report.dual_lb < 0.0);
  }
}

TEST_CASE("submatrix relaxation at k = n matches the full objective") {
  const ExperimentInstance inst = gaussian_instance(5, 2, 33, 1.2);
  const RelaxationReport report = solve_relaxation(inst, RelaxKind::AmespR, 5);
  std::vector<int> all(5);
  for (int i = 0; i < 5; ++i) all[i] = i;
  CHECK(rel_err(report.primal, objective_value(inst, all)) <= 1e-8);
}

TEST_CASE("envelope relaxation at k = n matches the full objective") {
  const ExperimentInstance inst = gaussian_instance(5, 3, 35, 0.7);
  const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRii, 5);
  std::vector<int> all(5);
  for (int i = 0; i < 5; ++i) all[i] = i;
  CHECK(rel_err(report.primal, objective_value(inst, all)) <= 1e-8);
}

TEST_CASE("fixings pin coordinates and keep the bound valid for completions") {
  const ExperimentInstance inst = gaussian_instance(8, 3, 314, 0.8);
  const int k = 4;
  Fixings fixings;
  fixings.one = {2};
  fixings.zero = {5};
  const RelaxationReport report = solve_relaxation(inst, RelaxKind::RaodRii, k, fixings);

  CHECK(report.design.x[2] == 1.0);
  CHECK(report.design.x[5] == 0.0);
  CHECK(report.design.x.sum() == doctest::Approx(k).epsilon(1e-9));
  CHECK(report.design.x.minCoeff() >= -1e-9);
  CHECK(report.design.x.maxCoeff() <= 1.0 + 1e-9);

  // The certified bound holds for every binary completion of the fixing.
  double best_completion = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << 8); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
    if (!(mask & (1 << 2)) || (mask & (1 << 5))) continue;
    std::vector<int> subset;
    for (int i = 0; i < 8; ++i) {
      if (mask & (1 << i)) subset.push_back(i);
    }
    best_completion = std::min(best_completion, objective_value(inst, subset));
  }
  CHECK(report.dual_lb <= best_completion + 1e-9);
}

TEST_CASE("every dual bound undercuts the exhaustive optimum") {
  RngStream stream(67);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 2 + static_cast<int>(stream.uniform_int(3));
    const int n = 5 + static_cast<int>(stream.uniform_int(5));
    const double lambda = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1 ? 1.0 : 10.0);
    const ExperimentInstance inst = gaussian_instance(n, d, 400 + trial, lambda);
    for (int k = 1; k <= n; k += 2) {
      const double zk = brute_force(inst, k).objective;
      for (const RelaxKind kind :
           {RelaxKind::RaodRi, RelaxKind::AmespR, RelaxKind::RaodRii}) {
        const RelaxationReport report = solve_relaxation(inst, kind, k);
        CHECK(report.dual_lb <= zk + 1e-6);
        CHECK(report.dual_lb <= report.primal + 1e-9 * (1.0 + std::abs(report.primal)));
      }
    }
  }
}

TEST_CASE("envelope relaxation dominates the other two") {
  RngStream stream(71);
  const double tol = 1e-4;
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + static_cast<int>(stream.uniform_int(4));
    const int n = d + 3 + static_cast<int>(stream.uniform_int(8));
    const double lambda = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1 ? 1.0 : 10.0);
    const ExperimentInstance inst = gaussian_instance(n, d, 800 + trial, lambda);
    for (int k = 1; k <= n; k += 3) {
      const RelaxationReport ri = solve_relaxation(inst, RelaxKind::RaodRi, k);
      const RelaxationReport amesp = solve_relaxation(inst, RelaxKind::AmespR, k);
      const RelaxationReport rii = solve_relaxation(inst, RelaxKind::RaodRii, k);
      const double scale = 1.0 + std::abs(rii.primal);
      CHECK(rii.dual_lb >= ri.dual_lb - 2.0 * tol * scale);
      CHECK(rii.dual_lb >= amesp.dual_lb - 2.0 * tol * scale);
      if (k >= d) {
        CHECK(std::abs(rii.primal - ri.primal) <= 2.0 * tol * scale);
      }
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  RngStream stream(73);
  const double step = 1e-5;
  // Random interior points; the spectral objectives are smooth there almost
  // surely (eigenvalue ties have measure zero), so differencing is reliable.
  for (const RelaxKind kind : {RelaxKind::RaodRi, RelaxKind::AmespR, RelaxKind::RaodRii}) {
    int checked = 0;
    for (int trial = 0; trial < 16 && checked < 50; ++trial) {
      const int d = 2 + static_cast<int>(stream.uniform_int(3));
      const int n = 4 + static_cast<int>(stream.uniform_int(4));
      const ExperimentInstance inst = gaussian_instance(n, d, 600 + trial, 0.9);
      const Oracle oracle = make_relaxation_oracle(inst, kind, std::max(1, n / 2));
      Vector x(n);
      for (int i = 0; i < n; ++i) x[i] = 0.1 + 0.8 * stream.uniform();
      const OracleEval eval = oracle(x);
      for (int i = 0; i < n && checked < 50; ++i, ++checked) {
        Vector lo = x, hi = x;
        lo[i] -= step;
        hi[i] += step;
        const double fd = (oracle(hi).value - oracle(lo).value) / (2.0 * step);
        CHECK(std::abs(eval.gradient[i] - fd) <= 1e-4 * (1.0 + std::abs(fd)));
      }
    }
    CHECK(checked == 50);
  }
}

TEST_CASE("witness value equals the box-relaxation objective") {
  RngStream stream(79);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(stream.uniform_int(4));
    const int n = 2 + static_cast<int>(stream.uniform_int(6));
    const double lambda = 0.3 + 2.0 * stream.uniform();
    const ExperimentInstance inst = gaussian_instance(n, d, 900 + trial, lambda);
    const Oracle oracle = make_relaxation_oracle(inst, RelaxKind::RaodRi, 1);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = stream.uniform();
    const auto [witness, value] = least_squares_witness(inst, x);
    CHECK(rel_err(value, oracle(x).value) <= 1e-8);
  }
}

TEST_CASE("percentage gap") {
  CHECK(gap_percent(2.0, 1.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(gap_percent(1.0, -1.0 / 28.0) == doctest::Approx(100.0 * (1.0 + 1.0 / 28.0)).epsilon(1e-12));
  CHECK(gap_percent(3.5, 3.5) == 0.0);
  CHECK_THROWS_AS(gap_percent(0.0, 1.0), InputError);
  CHECK_THROWS_AS(gap_percent(-2.0, 1.0), InputError);
}

}  // TEST_SUITE
