#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robin_plap/eigen.hpp"
#include "robin_plap/system.hpp"

namespace robin_plap {

enum class FamilyKind { tilde, hat };

const char* to_string(FamilyKind kind);

/// One member of a homotopy family, deforming a reference problem (t = 0)
/// into the system itself (t = 1).
///   tilde: t f_i + (1 - t) (1 + xi_i (s_i^+)^{p_i - 1})
///   hat:   t f_i + (1 - t) xi_i (s_i^+)^{p_i - 1}
struct HomotopyFamily {
  FamilyKind kind = FamilyKind::hat;
  SystemSpec sys;
  std::array<double, 2> xi{0.0, 0.0};
  double t = 0.0;

  void validate() const;
};

double tilde_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2);
double hat_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2);
double family_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2);

/// Reaction pair of the family at its current t. Captures a copy of `fam`.
ReactionPair family_reaction(const HomotopyFamily& fam);

/// ||u_1||_{p_1} + ||u_2||_{p_2}.
double pair_norm(const FieldPair& u, std::array<double, 2> exponents);

struct BallSpec {
  double radius = 1.0;
  bool contains(const FieldPair& u, std::array<double, 2> exponents) const {
    return pair_norm(u, exponents) < radius;
  }
};

/// Solves the family at fixed t by damped Newton from `start`.
/// Non-convergence is reported, not thrown.
CoupledResult solve_family_at(const HomotopyFamily& fam, const FieldPair& start,
                              const NewtonOptions& opts = {});

struct ContinuationOptions {
  int max_bisections = 5;
  NewtonOptions newton;
  /// Radii used only for reporting containment; zero means unset.
  double r_hat = 0.0;
  double r_tilde = 0.0;
};

struct Branch {
  std::vector<double> t;
  std::vector<FieldPair> solutions;
  std::vector<double> norms;
  bool reached_end = false;
  double max_norm = 0.0;
  bool within_r_hat = true;
  bool within_r_tilde = true;
};

/// 21 uniform points on [0, 1].
std::vector<double> default_t_grid();

/// One branch per start, warm-starting each t from the previous solution.
/// A failing step is bisected toward the target up to max_bisections times
/// before the branch ends.
std::vector<Branch> continuation(FamilyKind kind, const SystemSpec& sys, std::array<double, 2> xi,
                                 const std::vector<double>& t_grid, const std::vector<FieldPair>& starts,
                                 const ContinuationOptions& opts = {});

struct Candidate {
  FieldPair u;
  double residual_norm = 0.0;
  double norm = 0.0;
  bool inside_hull = true;
  /// Largest nodal distance outside [u_-, u_+]; inside means <= 1e-8.
  double hull_excursion = 0.0;
  std::string start_label;
};

struct ThirdSolutionOptions {
  std::vector<double> scales{2.0, 5.0, 10.0};
  double dedup_distance = 1e-6;
  double tol = 1e-10;
  NewtonOptions newton;
  /// Adds hat-family continuation endpoints to the start battery.
  bool use_continuation = true;
  std::optional<std::array<double, 2>> xi;
};

struct ThirdSolutionReport {
  std::vector<Candidate> candidates;
  int starts_tried = 0;
  int converged_runs = 0;
  double r_hat = 0.0;
  double r_tilde = 0.0;
  std::vector<Branch> branches;

  std::size_t outside_count() const;
};

/// Multi-start Newton on the untruncated system. The hull is spanned by the
/// negative and positive constant-sign solutions. Converged runs are
/// deduplicated in start order by sup distance.
ThirdSolutionReport find_third_solution(const SystemSpec& sys, const FieldPair& negative,
                                        const FieldPair& positive, const std::array<EigenPair, 2>& eig,
                                        const ThirdSolutionOptions& opts = {});

}  // namespace robin_plap
