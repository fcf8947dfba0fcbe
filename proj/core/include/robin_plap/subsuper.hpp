#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robin_plap/eigen.hpp"
#include "robin_plap/system.hpp"

namespace robin_plap {

/// Order interval [lower_1, upper_1] x [lower_2, upper_2].
struct TrappingRegion {
  FieldPair lower;
  FieldPair upper;

  /// Throws if lower > upper at some node.
  void validate() const;
  /// Largest nodal excursion of u outside the region (<= 0 when inside).
  double excursion(const FieldPair& u) const;
};

struct SubsuperReport {
  bool pass = false;
  /// Largest value of <A u, psi_j> - int f psi_j (subsolution side) or its
  /// negation (supersolution side), or of lower - upper for the ordering.
  double worst_margin = 0.0;
  std::string worst_inequality;  ///< "order", "sub1", "super1", "sub2", "super2"
  int worst_node = -1;
  int worst_probe = -1;          ///< -1 corner "lower", -2 corner "upper", k >= 0 random probe
  int probes_checked = 0;
  /// True when each f_i was monotone in s_j on the sampled region, in which
  /// case the corner probes alone are conclusive.
  bool monotone_detected = false;
};

struct SubsuperOptions {
  int probe_count = 64;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int max_halvings = 50;
};

/// Checks the four weak inequalities against every nodal hat function, for
/// the corner fields and probe_count random fields inside the region.
SubsuperReport verify_subsuper(const SystemSpec& sys, const TrappingRegion& region,
                               const SubsuperOptions& opts = {});

struct ConstructedRegion {
  TrappingRegion region;
  double epsilon = 0.0;
  int halvings = 0;
  SubsuperReport verification;
};

/// lower = eps * phi_i, upper = k_{i,+}. eps starts just below
/// min(delta, k_+ / 2) / max_i ||phi_i||_inf, delta = min_i delta_plus_i
/// from the H2 report, and is halved until verification passes.
ConstructedRegion construct_positive_pair(const SystemSpec& sys, const std::array<EigenPair, 2>& eig,
                                          const HypothesisReport& h2, const SubsuperOptions& opts = {});

/// Mirror: lower = k_{i,-}, upper = -eps * phi_i, delta from delta_minus.
ConstructedRegion construct_negative_pair(const SystemSpec& sys, const std::array<EigenPair, 2>& eig,
                                          const HypothesisReport& h2, const SubsuperOptions& opts = {});

/// Region with the given eps, no search. Used for forced-failure checks.
TrappingRegion positive_region(const SystemSpec& sys, const std::array<EigenPair, 2>& eig, double eps);
TrappingRegion negative_region(const SystemSpec& sys, const std::array<EigenPair, 2>& eig, double eps);

struct PicardOptions {
  int max_outer = 500;
  double tol = 1e-10;
  double trap_tol = 1e-8;
  std::vector<double> damping{1.0, 0.5, 0.25};
  SolverOptions inner = [] {
    SolverOptions o;
    o.tol_residual = 1e-12;
    return o;
  }();
};

struct RegionSolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  double omega = 1.0;
  double trap_excursion = 0.0;
  bool truncation_inactive = false;
  std::vector<double> residual_history;
  std::string diagnostics;
};

/// Sum over i of ||A_{p_i}(u_i) - F_i(T_1 u_1, T_2 u_2)|| with T_k the
/// truncation into the region.
double truncated_residual_norm(const SystemSpec& sys, const TrappingRegion& region, const FieldPair& u);

/// Gauss-Seidel Picard iteration u_i <- (1 - w) u_i + w A_{p_i}^{-1} F_i(T u)
/// from the lower corner, trying each damping factor in turn. Stops on the
/// truncated residual; `residual_norm` is the untruncated one.
std::pair<FieldPair, RegionSolveReport> solve_in_region(const SystemSpec& sys,
                                                        const TrappingRegion& region,
                                                        const PicardOptions& opts = {});

}  // namespace robin_plap
