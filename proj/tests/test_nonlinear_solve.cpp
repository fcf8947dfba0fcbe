#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robin_plap/nonlinear_solve.hpp"
#include "support.hpp"

using namespace robin_plap;
using test_support::random_field;
using test_support::unit_interval;

namespace {
DualVector unit_load(const RobinOperatorSpec& s) {
  return load(s, [](Point) { return 1.0; });
}
}  // namespace

TEST(SolverOptionsType, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.tol_residual = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.max_iters = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.shrink = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(SolveAp, LinearQuadraticSolution) {
  const auto m = unit_interval(256);
  const auto spec = RobinOperatorSpec::make(m, 2, 1);
  const auto [u, rep] = solve_Ap(spec, unit_load(spec));
  ASSERT_TRUE(rep.converged);
  double err = 0;
  for (std::size_t k = 0; k < m->num_nodes(); ++k)
    err = std::max(err, std::abs(u.coeffs[static_cast<Eigen::Index>(k)] - oracle::robin_quadratic(m->nodes()[k].x)));
  EXPECT_LE(err, 5e-4);
}

TEST(SolveAp, LinearMatchesDenseSolve) {
  const int n = 24;
  const auto m = unit_interval(n);
  const auto spec = RobinOperatorSpec::make(m, 2, 0.3);
  const auto f = load(spec, [](Point x) { return std::cos(5 * x.x); });
  const auto [u, rep] = solve_Ap(spec, f);
  ASSERT_TRUE(rep.converged);
  const auto d = oracle::dense_robin_1d(n, 0.3);
  const Eigen::VectorXd ref = d.stiffness_robin.ldlt().solve(f.entries);
  EXPECT_LT((u.coeffs - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SolveAp, ZeroRhsGivesZero) {
  const auto m = unit_interval(8);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto spec = RobinOperatorSpec::make(m, p, 1);
    const auto [u, rep] = solve_Ap(spec, DualVector::zero(m->num_nodes()));
    EXPECT_TRUE(rep.converged);
    EXPECT_LT(u.coeffs.cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SolveAp, NonlinearResidualAndMonotoneEnergy) {
  std::mt19937_64 rng(11);
  for (const auto& mesh : {unit_interval(40), share(Mesh::rectangle(1, 1, 6, 6))}) {
    for (double p : {1.5, 3.0, 4.0}) {
      const auto spec = RobinOperatorSpec::make(mesh, p, 1);
      const auto f = load(spec, [](Point x) { return 1.0 + std::sin(4 * x.x) + x.y; });
      const auto [u, rep] = solve_Ap(spec, f);
      ASSERT_TRUE(rep.converged) << "p=" << p;
      EXPECT_LE(residual(spec, u, f).norm(), 1e-10);
      EXPECT_NEAR(rep.energy_value, solve_functional(spec, u, f), 1e-12 * std::max(1.0, std::abs(rep.energy_value)));
      for (std::size_t k = 1; k < rep.energy_history.size(); ++k)
        EXPECT_LE(rep.energy_history[k], rep.energy_history[k - 1] + 1e-12);
      for (int k = 0; k < 20; ++k) {
        FeField v = u;
        v.coeffs += 1e-2 * random_field(mesh, rng).coeffs;
        EXPECT_GE(solve_functional(spec, v, f), rep.energy_value - 1e-14);
      }
    }
  }
}

TEST(SolveAp, InitialGuessIsUsedAndMeshChecked) {
  const auto m = unit_interval(16);
  const auto spec = RobinOperatorSpec::make(m, 3, 1);
  const auto f = unit_load(spec);
  const auto [u, rep] = solve_Ap(spec, f);
  SolverOptions o;
  o.initial_guess = u;
  const auto [u2, rep2] = solve_Ap(spec, f, o);
  EXPECT_TRUE(rep2.converged);
  EXPECT_LE(rep2.iterations, 1);
  o.initial_guess = FeField::zero(unit_interval(16));
  EXPECT_THROW(solve_Ap(spec, f, o), std::invalid_argument);
  EXPECT_THROW(solve_Ap(spec, DualVector::zero(3)), std::invalid_argument);
}

TEST(SolveAp, MatchesDirectMinimizationAtP4) {
  const int n = 10;
  const double p = 4, beta = 1;
  const auto spec = RobinOperatorSpec::make(unit_interval(n), p, beta);
  const auto [u, rep] = solve_Ap(spec, unit_load(spec));
  ASSERT_TRUE(rep.converged);
  const auto ref = oracle::coordinate_search(n, p, beta, 1.0);
  for (int k = 0; k <= n; ++k) EXPECT_NEAR(u.coeffs[k], ref[k], 1e-4);
  EXPECT_NEAR(rep.energy_value, oracle::functional_1d(ref, p, beta, 1.0), 1e-9);
}

TEST(SolveAp, ScalingHomogeneity) {
  // A_p(c u) = c^{p-1} A_p(u), so the solution for c^{p-1} f is c u.
  const auto m = unit_interval(20);
  const double p = 3, c = 2.5;
  const auto spec = RobinOperatorSpec::make(m, p, 1);
  const auto f = unit_load(spec);
  const auto [u, r1] = solve_Ap(spec, f);
  const auto [v, r2] = solve_Ap(spec, std::pow(c, p - 1) * f);
  ASSERT_TRUE(r1.converged && r2.converged);
  EXPECT_LT((v.coeffs - c * u.coeffs).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ContinuityCheck, DistancesDecay) {
  const auto m = unit_interval(32);
  const auto spec = RobinOperatorSpec::make(m, 3, 1);
  const auto f = unit_load(spec);
  std::vector<DualVector> seq;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) seq.push_back(f + eps * load(spec, [](Point x) { return x.x; }));
  const auto rep = continuity_check(spec, f, seq);
  ASSERT_EQ(rep.entries.size(), 4u);
  EXPECT_TRUE(rep.monotone_decay);
  EXPECT_LT(rep.final_solution_distance, 1e-3);
  for (std::size_t k = 1; k < rep.entries.size(); ++k)
    EXPECT_LT(rep.entries[k].solution_distance, rep.entries[k - 1].solution_distance);
}

TEST(NewtonSystem, SolvesSmallNonlinearSystem) {
  // x^3 + y = 2, x - y^3 = 0 has the root (1, 1).
  const ResidualFn r = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(2);
    out << v[0] * v[0] * v[0] + v[1] - 2, v[0] - v[1] * v[1] * v[1];
    return out;
  };
  const JacobianFn j = [](const Eigen::VectorXd& v) {
    SparseMatrix m(2, 2);
    m.insert(0, 0) = 3 * v[0] * v[0];
    m.insert(0, 1) = 1;
    m.insert(1, 0) = 1;
    m.insert(1, 1) = -3 * v[1] * v[1];
    m.makeCompressed();
    return m;
  };
  const auto res = newton_system(r, j, Eigen::Vector2d(2.0, 0.5));
  ASSERT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-9);
  EXPECT_NEAR(res.x[1], 1.0, 1e-9);
  EXPECT_LE(res.residual_norm, 1e-10);
}

TEST(NewtonSystem, ReportsDivergence) {
  // exp(x) + 1 = 0 has no real root.
  const ResidualFn r = [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Constant(1, std::exp(v[0]) + 1); };
  const JacobianFn j = [](const Eigen::VectorXd& v) {
    SparseMatrix m(1, 1);
    m.insert(0, 0) = std::exp(v[0]);
    return m;
  };
  NewtonOptions o;
  o.divergence_norm = 50;
  o.max_iters = 500;
  const auto res = newton_system(r, j, Eigen::VectorXd::Zero(1), o);
  EXPECT_FALSE(res.converged);
}
