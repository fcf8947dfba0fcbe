#pragma once

#include <functional>
#include <string>
#include <vector>

#include "robin_plap/eigen.hpp"

namespace robin_plap {

using Forcing = std::function<double(Point)>;

struct ResonanceOptions {
  double off_shift = 0.1;          ///< mu = lambda_h - off_shift for the solvable control
  double inconsistency_floor = 1e-6;
  double divergence_norm = 1e6;
  double stall_residual = 1e-3;
  int max_newton_iters = 200;
};

struct ResonanceReport {
  double lambda = 0.0;             ///< discrete first eigenvalue used
  bool linear = false;             ///< p = 2 path
  /// p = 2: least-squares residual of the singular system.
  double ls_residual = 0.0;
  /// p = 2: residual of the regular solve at lambda - off_shift.
  double off_resonance_residual = 0.0;
  bool solvable_off_resonance = false;
  /// p != 2: Newton battery outcome counts.
  int starts = 0;
  int diverged = 0;
  int stalled = 0;
  double smallest_residual = 0.0;
  bool non_solvable = false;
};

/// Tests -Delta_p u = lambda_p |u|^{p-2} u + h with Robin data for
/// solvability. h must be non-negative at the nodes and not identically 0.
ResonanceReport experiment_resonance(const RobinOperatorSpec& spec, const Forcing& h,
                                     const ResonanceOptions& opts = {});

struct AntimaxEntry {
  double delta = 0.0;
  double mu = 0.0;
  int solutions_found = 0;
  bool all_negative = false;
  double max_value = 0.0;          ///< largest nodal value over found solutions
};

struct AntimaxOptions {
  std::vector<double> delta_grid{0.5, 0.1, 0.01, 0.001};
  double below_factor = 0.5;       ///< control run at mu = below_factor * lambda
  double tol = 1e-10;
  int max_newton_iters = 200;
};

struct AntimaxReport {
  double lambda = 0.0;
  std::vector<AntimaxEntry> entries;
  /// Largest grid delta from which every smaller grid delta gave only
  /// strictly negative solutions; 0 if none.
  double threshold = 0.0;
  bool monotone_onset = false;
  AntimaxEntry below;              ///< mu < lambda, outside the window
  bool below_positive = false;
};

/// Solves -Delta_p u = mu |u|^{p-2} u + h for mu = lambda_p + delta / 2.
/// p = 2 uses a direct solve; otherwise Newton from several starts.
AntimaxReport experiment_antimax(const RobinOperatorSpec& spec, const Forcing& h,
                                 const AntimaxOptions& opts = {});

/// Solutions of A_p(u) = mu (|u|^{p-2} u, .) + (h, .) found from the given
/// starts, deduplicated. A run is accepted when the residual norm is at most
/// tol * max(1, ||mu |u|^{p-2} u|| + ||rhs||).
std::vector<FeField> spectral_solutions(const RobinOperatorSpec& spec, double mu, const DualVector& rhs,
                                        const std::vector<FeField>& starts, double tol, int max_iters,
                                        double divergence_norm = 1e6);

}  // namespace robin_plap
