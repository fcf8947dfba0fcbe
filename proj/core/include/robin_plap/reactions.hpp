#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robin_plap/assembly.hpp"
#include "robin_plap/expression.hpp"

namespace robin_plap {

/// f_i(x, s1, s2). Must be pure and reentrant.
using ReactionFn = std::function<double(const Point&, double, double)>;

/// Reaction pair of the coupled system together with the constants the
/// multiplicity hypotheses refer to. Component indices are 0 and 1.
struct ReactionSpec {
  std::string name;
  std::array<ReactionFn, 2> f;
  std::array<double, 2> k_plus{1.0, 1.0};
  std::array<double, 2> k_minus{-1.0, -1.0};
  std::array<double, 2> eta{0.0, 0.0};
  std::array<double, 2> theta{0.0, 0.0};

  /// Throws unless both functions are set and k_minus < 0 < k_plus.
  void validate() const;
  double operator()(int i, const Point& x, double s1, double s2) const { return f[i](x, s1, s2); }
};

/// Where the hypothesis checks sample. Results are necessary conditions on
/// the grid only; a sampled check cannot certify a liminf or a limit.
struct SamplingGrid {
  std::vector<Point> x_points;
  int s_samples = 100;   ///< points per bounded s-interval
  int log_samples = 50;  ///< points per log-spaced s-interval

  /// Mesh nodes, evenly thinned to at most `max_points`.
  static SamplingGrid from_mesh(const Mesh& mesh, int max_points = 50, int s_samples = 100);
};

struct SamplePoint {
  int component = 0;
  Point x;
  double s1 = 0.0;
  double s2 = 0.0;
};

struct HypothesisReport {
  std::string name;
  bool pass = false;
  /// Positive means violated; `pass` implies worst_violation <= 1e-9.
  double worst_violation = 0.0;
  SamplePoint worst_at;
  std::string note;
  /// H3: empirical bounds mu_i.
  std::array<double, 2> mu{0.0, 0.0};
  /// H2: largest sampled s > 0 (resp. |s| for s < 0) below which
  /// f_i >= xi_i |s|^{p_i-2} s holds with xi_i = (lambda_i + eta_i) / 2.
  std::array<double, 2> delta_plus{0.0, 0.0};
  std::array<double, 2> delta_minus{0.0, 0.0};
  /// H2: worst violation on the s > 0 side and on the s < 0 side.
  double positive_side_violation = 0.0;
  double negative_side_violation = 0.0;
};

inline constexpr double kHypothesisTolerance = 1e-9;

/// f_1(x, k1+, s2) v f_2(x, s1, k2+) <= 0 on [0, k1+] x [0, k2+] and the
/// mirrored >= 0 condition on the negative box.
HypothesisReport check_H1(const ReactionSpec& spec, const SamplingGrid& grid);

/// f_i / (|s_i|^{p_i-2} s_i) >= eta_i - 1e-6 for |s_i| on a log grid in
/// [1e-6, 1e-2] on both sides; fails outright if eta_i <= lambda_i.
HypothesisReport check_H2(const ReactionSpec& spec, std::array<double, 2> exponents,
                          std::array<double, 2> eigenvalues, const SamplingGrid& grid);

/// mu_i = max |f_i| over x, s_i in [-rho, rho], s_j in [-1e3, 1e3].
HypothesisReport check_H3(const ReactionSpec& spec, double rho, const SamplingGrid& grid);

/// |f_i / s_i^{p_i-1} - theta_i| <= 1e-3 at the largest s_i in [1e2, 1e6]
/// and not growing along the grid; |f_i / (|s_i|^{p_i-2} s_i)| <= 1e-3 at the
/// most negative s_i in [-1e6, -1e2]. With eigenvalues, also theta_i > lambda_i.
HypothesisReport check_H4(const ReactionSpec& spec, std::array<double, 2> exponents,
                          const SamplingGrid& grid,
                          std::optional<std::array<double, 2>> eigenvalues = std::nullopt);

/// Nodal clamp max(lower, min(u, upper)). Throws if lower > upper somewhere.
FeField truncate(const FeField& u, const FeField& lower, const FeField& upper);

using FieldPair = std::array<FeField, 2>;

/// Entries int f_i(x, T_1(u1), T_2(u2)) psi_j dx with T_k the truncation
/// into [lower_k, upper_k].
DualVector assemble_F(const ReactionSpec& spec, int i, const FeField& u1, const FeField& u2,
                      const FieldPair& lower, const FieldPair& upper);

/// Untruncated entries int f_i(x, u1, u2) psi_j dx.
DualVector assemble_reaction(const ReactionSpec& spec, int i, const FeField& u1, const FeField& u2);

/// Shape constants of the built-in "bump" reaction for one component.
///
///   0 <= s <= a:      eta s^{p-1}
///   a <= s <= k+:     cubic Hermite down to -c (zero slope at k+)
///   k+ <= s <= b:     cubic Hermite up to theta s^{p-1}
///   s >= b:           theta s^{p-1}
///   m <= s <= 0:      eta |s|^{p-2} s
///   k- <= s <= m:     cubic Hermite up to c_neg (zero slope at k-)
///   s <= k-:          c_neg
struct BumpParameters {
  double eta = 4.0;
  double theta = 4.0;
  double k_plus = 1.0;
  double k_minus = -1.0;
  double a = 0.2;
  double b = 2.0;
  double c = 0.5;
  double m = -0.2;
  double c_neg = 0.5;

  void validate() const;
};

double bump_value(const BumpParameters& params, double p, double s);

/// f_i(x, s1, s2) = bump_i(s_i). With `coupled`, f_i is multiplied by
/// (1 + 0.1 tanh(s_j)); eta_i is then lowered by the factor
/// 1 - 0.1 tanh(|k_j-|) so that the sampled H2 bound still holds, and the
/// H4 limit is no longer uniform in s_j.
ReactionSpec make_bump_reaction(const std::array<BumpParameters, 2>& params,
                                std::array<double, 2> exponents, bool coupled = false);

ReactionSpec make_zero_reaction(std::array<double, 2> k_plus = {1.0, 1.0},
                                std::array<double, 2> k_minus = {-1.0, -1.0});

/// Reaction from expression strings over x, y, s1, s2.
ReactionSpec make_expression_reaction(const std::string& f1, const std::string& f2,
                                      const Expression::Constants& constants = {});

}  // namespace robin_plap
