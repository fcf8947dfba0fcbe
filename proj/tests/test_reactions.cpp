#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "robin_plap/reactions.hpp"
#include "support.hpp"

using namespace robin_plap;
using test_support::unit_interval;

namespace {

constexpr std::array<double, 2> kExps{2.0, 3.0};

ReactionSpec bump() { return make_bump_reaction({BumpParameters{}, BumpParameters{}}, kExps); }

SamplingGrid small_grid() {
  SamplingGrid g;
  g.x_points = {Point{0.0, 0.0}, Point{0.5, 0.0}, Point{1.0, 0.0}};
  g.s_samples = 41;
  g.log_samples = 30;
  return g;
}

// Eigenvalues below eta = 4 for both components.
std::array<double, 2> eigenvalues() { return {oracle::robin_lambda1(1.0), 1.36}; }

}  // namespace

TEST(ReactionSpecType, Validation) {
  auto s = bump();
  EXPECT_NO_THROW(s.validate());
  s.k_minus[1] = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = bump();
  s.f[0] = nullptr;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Bump, ParameterValidation) {
  BumpParameters q;
  EXPECT_NO_THROW(q.validate());
  q.a = 1.5;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = {};
  q.m = -2.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = {};
  q.theta = 0.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = {};
  q.c = -1.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  EXPECT_THROW(make_bump_reaction({BumpParameters{}, BumpParameters{}}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Bump, ValuesAtBreakpoints) {
  const BumpParameters q;
  for (double p : {2.0, 3.0}) {
    EXPECT_EQ(bump_value(q, p, 0.0), 0.0);
    EXPECT_NEAR(bump_value(q, p, q.a), q.eta * std::pow(q.a, p - 1), 1e-14);
    EXPECT_NEAR(bump_value(q, p, q.k_plus), -q.c, 1e-14);
    EXPECT_NEAR(bump_value(q, p, q.b), q.theta * std::pow(q.b, p - 1), 1e-12);
    EXPECT_NEAR(bump_value(q, p, 7.0), q.theta * std::pow(7.0, p - 1), 1e-12);
    EXPECT_NEAR(bump_value(q, p, q.m), -q.eta * std::pow(-q.m, p - 1), 1e-14);
    EXPECT_NEAR(bump_value(q, p, q.k_minus), q.c_neg, 1e-14);
    EXPECT_EQ(bump_value(q, p, -50.0), q.c_neg);
  }
}

TEST(Bump, ContinuousWithFlatExtremaAtK) {
  const BumpParameters q;
  for (double p : {2.0, 3.0}) {
    for (double s0 : {q.a, q.k_plus, q.b, q.m, q.k_minus}) {
      EXPECT_NEAR(bump_value(q, p, s0 - 1e-9), bump_value(q, p, s0 + 1e-9), 1e-7);
      const double h = 1e-5;
      const double left = (bump_value(q, p, s0) - bump_value(q, p, s0 - h)) / h;
      const double right = (bump_value(q, p, s0 + h) - bump_value(q, p, s0)) / h;
      EXPECT_NEAR(left, right, 1e-3 * std::max(1.0, std::abs(left)));
    }
    const double h = 1e-8;
    EXPECT_NEAR((bump_value(q, p, q.k_plus + h) - bump_value(q, p, q.k_plus - h)) / (2 * h), 0.0, 1e-5);
    EXPECT_NEAR((bump_value(q, p, q.k_minus + h) - bump_value(q, p, q.k_minus - h)) / (2 * h), 0.0, 1e-5);
  }
}

TEST(Bump, ComponentsAreDecoupled) {
  const auto s = bump();
  EXPECT_EQ(s(0, Point{}, 0.3, -5.0), s(0, Point{}, 0.3, 9.0));
  EXPECT_EQ(s(1, Point{}, 4.0, 0.7), s(1, Point{}, -4.0, 0.7));
  EXPECT_EQ(s.name, "bump");
}

TEST(SamplingGridType, FromMesh) {
  const auto m = unit_interval(100);
  const auto g = SamplingGrid::from_mesh(*m, 11, 33);
  ASSERT_EQ(g.x_points.size(), 11u);
  EXPECT_EQ(g.s_samples, 33);
  EXPECT_DOUBLE_EQ(g.x_points.front().x, 0.0);
  EXPECT_DOUBLE_EQ(g.x_points.back().x, 1.0);
  EXPECT_EQ(SamplingGrid::from_mesh(*unit_interval(3), 50).x_points.size(), 4u);
  EXPECT_THROW(SamplingGrid::from_mesh(*m, 0), std::invalid_argument);
  EXPECT_THROW(check_H1(bump(), SamplingGrid{}), std::invalid_argument);
}

TEST(H1, BumpPassesPositiveForcingFails) {
  const auto r = check_H1(bump(), small_grid());
  EXPECT_TRUE(r.pass) << r.worst_violation;
  EXPECT_LE(r.worst_violation, kHypothesisTolerance);

  const auto one = make_expression_reaction("1", "0");
  const auto bad = check_H1(one, small_grid());
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.worst_violation, 1.0, 1e-12);
  EXPECT_EQ(bad.worst_at.component, 0);
}

TEST(H2, BumpPassesWithRadii) {
  const auto r = check_H2(bump(), kExps, eigenvalues(), small_grid());
  EXPECT_TRUE(r.pass) << r.note;
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(r.delta_plus[i], 0.0);
    EXPECT_GT(r.delta_minus[i], 0.0);
    EXPECT_LE(r.delta_plus[i], 1.0);
    EXPECT_LE(r.delta_minus[i], 1.0);
  }
  EXPECT_LE(r.positive_side_violation, kHypothesisTolerance);
  EXPECT_LE(r.negative_side_violation, kHypothesisTolerance);
}

TEST(H2, FailsWhenEtaNotAboveEigenvalue) {
  const auto r = check_H2(bump(), kExps, {5.0, 1.0}, small_grid());
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.worst_violation, 1.0, 1e-12);
  EXPECT_NE(r.note.find("eta_1"), std::string::npos);
}

TEST(H2, OneSidedReactionViolatesNegativeSide) {
  // theta (s^+)^{p-1}: passes for s -> 0+ and fails for s -> 0-.
  auto s = make_expression_reaction("4*max(s1,0)", "4*max(s2,0)^2");
  s.eta = {4.0, 4.0};
  const auto r = check_H2(s, kExps, eigenvalues(), small_grid());
  EXPECT_FALSE(r.pass);
  EXPECT_LE(r.positive_side_violation, kHypothesisTolerance);
  EXPECT_GT(r.negative_side_violation, 1.0);
}

TEST(H3, EmpiricalBoundsMatchMaxima) {
  const auto lin = make_expression_reaction("s1", "2*s2 + tanh(s1)");
  const auto r = check_H3(lin, 3.0, small_grid());
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.mu[0], 3.0, 1e-12);
  EXPECT_NEAR(r.mu[1], 6.0 + std::tanh(1e3), 1e-9);
  EXPECT_THROW(check_H3(lin, 0.0, small_grid()), std::invalid_argument);

  const auto b = check_H3(bump(), 1.0, small_grid());
  EXPECT_TRUE(b.pass);
  EXPECT_GE(b.mu[0], 0.5);
  EXPECT_LE(b.mu[0], 4.0);

  const auto blow = make_expression_reaction("1/s1", "0");
  EXPECT_FALSE(check_H3(blow, 1.0, small_grid()).pass);
}

TEST(H4, BumpPassesCubicGrowthFails) {
  EXPECT_TRUE(check_H4(bump(), kExps, small_grid()).pass);
  EXPECT_TRUE(check_H4(bump(), kExps, small_grid(), eigenvalues()).pass);
  EXPECT_FALSE(check_H4(bump(), kExps, small_grid(), std::array<double, 2>{5.0, 1.0}).pass);

  auto cubic = make_expression_reaction("s1^3", "4*max(s2,0)^2");
  cubic.theta = {4.0, 4.0};
  const auto r = check_H4(cubic, kExps, small_grid());
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_at.component, 0);
}

TEST(CoupledBump, H2HoldsButH4LimitIsNotUniform) {
  const auto s = make_bump_reaction({BumpParameters{}, BumpParameters{}}, kExps, true);
  EXPECT_EQ(s.name, "bump-coupled");
  EXPECT_LT(s.eta[0], 4.0);
  EXPECT_TRUE(check_H1(s, small_grid()).pass);
  EXPECT_TRUE(check_H2(s, kExps, eigenvalues(), small_grid()).pass);
  EXPECT_FALSE(check_H4(s, kExps, small_grid()).pass);
}

TEST(ZeroReaction, H1PassesH2Fails) {
  const auto z = make_zero_reaction();
  EXPECT_TRUE(check_H1(z, small_grid()).pass);
  EXPECT_FALSE(check_H2(z, kExps, eigenvalues(), small_grid()).pass);
  EXPECT_THROW(make_zero_reaction({1, 1}, {-1, 0}).validate(), std::invalid_argument);
}

TEST(ExpressionReaction, EvaluatesWithConstants) {
  const auto s = make_expression_reaction("k*s1 + x", "sin(pi*y) - s2^2", {{"k", 3.0}});
  EXPECT_DOUBLE_EQ(s(0, Point{0.25, 0}, 2.0, 0.0), 6.25);
  EXPECT_NEAR(s(1, Point{0, 0.5}, 0.0, 3.0), -8.0, 1e-15);
  EXPECT_THROW(make_expression_reaction("q*s1", "0"), std::invalid_argument);
  EXPECT_THROW(make_expression_reaction("s1 +", "0"), std::invalid_argument);
}

TEST(Truncate, ClampsNodewise) {
  const auto m = unit_interval(4);
  const FeField u(m, (Eigen::VectorXd(5) << -2, 0.5, 3, 0.1, -0.1).finished());
  const auto t = truncate(u, FeField::constant(m, 0.0), FeField::constant(m, 1.0));
  EXPECT_EQ(t.coeffs, (Eigen::VectorXd(5) << 0, 0.5, 1, 0.1, 0).finished());
  EXPECT_THROW(truncate(u, FeField::constant(m, 1.0), FeField::constant(m, 0.0)), std::invalid_argument);
}

TEST(AssembleF, TruncationAndUntruncatedAgreeInside) {
  const auto m = unit_interval(16);
  const auto spec = make_expression_reaction("s1*s2 + x", "s2");
  const FieldPair lo{FeField::constant(m, -1), FeField::constant(m, -1)};
  const FieldPair hi{FeField::constant(m, 1), FeField::constant(m, 1)};
  const auto u1 = FeField::interpolate(m, [](Point x) { return 0.5 * x.x; });
  const auto u2 = FeField::constant(m, -0.25);
  for (int i = 0; i < 2; ++i)
    EXPECT_LT((assemble_F(spec, i, u1, u2, lo, hi) - assemble_reaction(spec, i, u1, u2)).norm(), 1e-15);

  // Outside the box the clamp is active: f_2 = T(s2) = 1 integrates to 1.
  const auto big = FeField::constant(m, 5.0);
  EXPECT_NEAR(assemble_F(spec, 1, u1, big, lo, hi).entries.sum(), 1.0, 1e-12);
  EXPECT_NEAR(assemble_reaction(spec, 1, u1, big).entries.sum(), 5.0, 1e-12);
  EXPECT_THROW(assemble_reaction(spec, 2, u1, u2), std::invalid_argument);
}
