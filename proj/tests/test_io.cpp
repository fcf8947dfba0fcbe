#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "robin_plap/expression.hpp"
#include "robin_plap/io.hpp"
#include "robin_plap/parallel.hpp"
#include "support.hpp"

using namespace robin_plap;
using test_support::unit_interval;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(SolutionCsv, OneDimensional) {
  const auto m = unit_interval(2);
  const FieldPair u{FeField::constant(m, 1.0), FeField::constant(m, -0.25)};
  std::ostringstream out;
  write_solution_csv(out, u);
  EXPECT_EQ(out.str(), "x,u1,u2\n0,1,-0.25\n0.5,1,-0.25\n1,1,-0.25\n");
}

TEST(SolutionCsv, TwoDimensional) {
  const auto m = share(Mesh::rectangle(1, 1, 2, 2));
  const FieldPair u{FeField::zero(m), FeField::zero(m)};
  std::ostringstream out;
  write_solution_csv(out, u);
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 10u);
  EXPECT_EQ(l[0], "x,y,u1,u2");
  const FieldPair mixed{FeField::zero(m), FeField::zero(unit_interval(3))};
  EXPECT_THROW(write_solution_csv(out, mixed), std::invalid_argument);
}

TEST(BranchCsv, Rows) {
  Branch b;
  b.t = {0.0, 0.5};
  b.norms = {1.0, 2.0};
  std::ostringstream out;
  write_branch_csv(out, b);
  EXPECT_EQ(out.str(), "t,norm\n0,1\n0.5,2\n");
}

TEST(CandidatesCsv, LongFormat) {
  const auto m = unit_interval(2);
  Candidate a;
  a.u = {FeField::constant(m, 1.0), FeField::constant(m, 2.0)};
  a.residual_norm = 1e-12;
  Candidate b = a;
  b.inside_hull = false;
  std::ostringstream out;
  write_candidates_csv(out, {a, b});
  const auto l = lines(out.str());
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0], "candidate,x,u1,u2,inside_hull,residual");
  EXPECT_EQ(l[1], "0,0,1,2,1,9.9999999999999998e-13");
  EXPECT_EQ(l[6], "1,1,1,2,0,9.9999999999999998e-13");
}

TEST(SolutionVtk, ContainsPointData) {
  const auto m = unit_interval(3);
  const FieldPair u{FeField::constant(m, 1.0), FeField::constant(m, 2.0)};
  std::ostringstream out;
  write_solution_vtk(out, u);
  const std::string s = out.str();
  EXPECT_NE(s.find("POINT_DATA 4"), std::string::npos);
  EXPECT_NE(s.find("SCALARS u1 double 1"), std::string::npos);
  EXPECT_NE(s.find("SCALARS u2 double 1"), std::string::npos);
}

TEST(Parallel, RunsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t k) { ++hits[k]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, [](std::size_t k) {
      if (k % 7 == 3) throw std::runtime_error(std::to_string(k));
    });
    FAIL() << "no exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

TEST(Parallel, WorkerCountHonorsCap) {
  EXPECT_EQ(worker_count(1), 1u);
  EXPECT_GE(worker_count(8), 1u);
  ::setenv("ROBIN_PLAP_THREADS", "1", 1);
  EXPECT_EQ(worker_count(100), 1u);
  ::setenv("ROBIN_PLAP_THREADS", "junk", 1);
  EXPECT_GE(worker_count(100), 1u);
  ::unsetenv("ROBIN_PLAP_THREADS");
}

TEST(ExpressionParser, ArithmeticAndPrecedence) {
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2*3").evaluate(0, 0, 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2").evaluate(0, 0, 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-2^2").evaluate(0, 0, 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(1+2)*(3-1)/4").evaluate(0, 0, 0, 0), 1.5);
  EXPECT_DOUBLE_EQ(Expression::parse("x + 10*y + 100*s1 + 1000*s2").evaluate(1, 2, 3, 4), 4321.0);
}

TEST(ExpressionParser, FunctionsAndConstants) {
  const auto e = Expression::parse("exp(0) + log(1) + tanh(0) + abs(-2) + sqrt(9) + sin(0) + cos(0)");
  EXPECT_DOUBLE_EQ(e.evaluate(0, 0, 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("pow(2, 10) + min(1, -1) + max(1, -1)").evaluate(0, 0, 0, 0), 1024.0);
  EXPECT_NEAR(Expression::parse("pi").evaluate(0, 0, 0, 0), M_PI, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("eta*s1", {{"eta", 4.0}})(Point{}, 0.5, 0), 2.0);
  EXPECT_EQ(Expression::parse(" s1 ").text(), " s1 ");
}

TEST(ExpressionParser, Errors) {
  for (const char* bad : {"", "1 +", "(1", "foo", "sin(1", "pow(1)", "1 2", "s3", "max(1,2,3)"}) {
    EXPECT_THROW(Expression::parse(bad), std::invalid_argument) << bad;
  }
}
