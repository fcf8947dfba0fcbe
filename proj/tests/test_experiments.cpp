#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "robin_plap/experiments.hpp"
#include "support.hpp"

using namespace robin_plap;
using test_support::unit_interval;

namespace {
const Forcing kOne = [](Point) { return 1.0; };
}

TEST(Resonance, LinearInconsistencyMatchesNullVectorProjection) {
  const int n = 48;
  const auto spec = RobinOperatorSpec::make(unit_interval(n), 2, 1);
  const auto rep = experiment_resonance(spec, kOne);
  EXPECT_TRUE(rep.linear);

  const auto d = oracle::dense_robin_1d(n, 1.0);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(d.stiffness_robin, d.mass);
  EXPECT_NEAR(rep.lambda, es.eigenvalues()[0], 1e-9);
  const Eigen::VectorXd phi = es.eigenvectors().col(0);
  const Eigen::VectorXd b = d.mass * Eigen::VectorXd::Ones(n + 1);
  const double expected = std::abs(phi.dot(b)) / phi.norm();
  EXPECT_NEAR(rep.ls_residual, expected, 1e-8 * expected);
  EXPECT_GT(rep.ls_residual, 1e-6);
  EXPECT_TRUE(rep.non_solvable);
  EXPECT_TRUE(rep.solvable_off_resonance);
  EXPECT_LT(rep.off_resonance_residual, 1e-8);
}

TEST(Resonance, LinearForcingOrthogonalityIsRequired) {
  // A sign-changing h orthogonal to phi would be solvable; h >= 0 never is.
  const auto spec = RobinOperatorSpec::make(share(Mesh::rectangle(1, 1, 5, 5)), 2, 2);
  const auto rep = experiment_resonance(spec, [](Point x) { return x.x * x.y; });
  EXPECT_TRUE(rep.non_solvable);
  EXPECT_TRUE(rep.solvable_off_resonance);
}

TEST(Resonance, RejectsInvalidForcing) {
  const auto spec = RobinOperatorSpec::make(unit_interval(8), 2, 1);
  EXPECT_THROW(experiment_resonance(spec, Forcing{}), std::invalid_argument);
  EXPECT_THROW(experiment_resonance(spec, [](Point) { return -1.0; }), std::invalid_argument);
  EXPECT_THROW(experiment_resonance(spec, [](Point) { return 0.0; }), std::invalid_argument);
}

TEST(Resonance, NonlinearBatteryCountsOutcomes) {
  const auto spec = RobinOperatorSpec::make(unit_interval(16), 3, 1);
  ResonanceOptions o;
  o.max_newton_iters = 60;
  const auto rep = experiment_resonance(spec, kOne, o);
  EXPECT_FALSE(rep.linear);
  EXPECT_EQ(rep.starts, 10);
  EXPECT_LE(rep.diverged + rep.stalled, rep.starts);
  EXPECT_GE(rep.smallest_residual, 0.0);
  EXPECT_EQ(rep.non_solvable, rep.diverged + rep.stalled == rep.starts);
  EXPECT_NEAR(rep.lambda, first_eigenpair(spec).lambda, 1e-12);
}

TEST(Antimax, LinearSolutionsAreNegativeNearEigenvalue) {
  const int n = 64;
  const auto spec = RobinOperatorSpec::make(unit_interval(n), 2, 1);
  const auto rep = experiment_antimax(spec, kOne);
  ASSERT_EQ(rep.entries.size(), 4u);
  const auto d = oracle::dense_robin_1d(n, 1.0);
  const Eigen::VectorXd b = d.mass * Eigen::VectorXd::Ones(n + 1);
  for (const auto& e : rep.entries) {
    EXPECT_EQ(e.solutions_found, 1);
    const Eigen::VectorXd u = (d.stiffness_robin - e.mu * d.mass).lu().solve(b);
    EXPECT_NEAR(e.max_value, u.maxCoeff(), 1e-8 * std::max(1.0, u.cwiseAbs().maxCoeff()));
    if (e.delta <= 0.01) {
      EXPECT_TRUE(e.all_negative) << e.delta;
    }
  }
  EXPECT_GE(rep.threshold, 0.01);
  EXPECT_TRUE(rep.monotone_onset);
  EXPECT_TRUE(rep.below_positive);
  EXPECT_NEAR(rep.below.mu, 0.5 * rep.lambda, 1e-14);
}

TEST(Antimax, NonlinearSolutionsAreNegativeNearEigenvalue) {
  const auto spec = RobinOperatorSpec::make(unit_interval(64), 3, 1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = experiment_antimax(spec, kOne);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
  for (const auto& e : rep.entries) {
    if (e.delta <= 0.01) {
      EXPECT_GE(e.solutions_found, 1) << e.delta;
      EXPECT_TRUE(e.all_negative) << e.delta;
    }
  }
  EXPECT_TRUE(rep.below_positive);
}

TEST(Antimax, LargeSolutionsNearEigenvalueAreAccepted) {
  // At delta = 0.001 the solution has magnitude ~40; the residual floor is
  // above 1e-10 in absolute terms.
  const auto rep = experiment_antimax(RobinOperatorSpec::make(unit_interval(128), 3, 0.5), kOne);
  ASSERT_EQ(rep.entries.size(), 4u);
  for (const auto& e : rep.entries) {
    EXPECT_GE(e.solutions_found, 1) << e.delta;
    EXPECT_TRUE(e.all_negative) << e.delta;
  }
  EXPECT_LT(rep.entries.back().max_value, -10.0);
  EXPECT_TRUE(rep.monotone_onset);
}

TEST(Antimax, OptionValidation) {
  const auto spec = RobinOperatorSpec::make(unit_interval(8), 2, 1);
  AntimaxOptions o;
  o.delta_grid = {0.1, 0.2};
  EXPECT_THROW(experiment_antimax(spec, kOne, o), std::invalid_argument);
  o.delta_grid = {0.1, -0.01};
  EXPECT_THROW(experiment_antimax(spec, kOne, o), std::invalid_argument);
  o = {};
  o.below_factor = 1.0;
  EXPECT_THROW(experiment_antimax(spec, kOne, o), std::invalid_argument);
}

TEST(SpectralSolutions, DeduplicatesAndSolves) {
  const auto spec = RobinOperatorSpec::make(unit_interval(20), 3, 1);
  const auto rhs = load(spec, [](Point) { return 1.0; });
  const auto m = spec.mesh;
  // mu = 0 reduces to A_p(u) = f with a unique solution.
  const auto sols = spectral_solutions(spec, 0.0, rhs,
                                       {FeField::zero(m), FeField::constant(m, 1.0), FeField::constant(m, 0.5)},
                                       1e-10, 100);
  ASSERT_EQ(sols.size(), 1u);
  const auto [u, rep] = solve_Ap(spec, rhs);
  EXPECT_LT(sup_distance(sols[0], u), 1e-8);
}
