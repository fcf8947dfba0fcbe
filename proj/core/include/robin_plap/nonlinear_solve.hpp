#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "robin_plap/assembly.hpp"

namespace robin_plap {

struct SolverOptions {
  double tol_residual = 1e-10;  ///< Euclidean norm of the residual vector
  int max_iters = 200;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
  std::optional<FeField> initial_guess;

  void validate() const;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual_norm = 0.0;
  double energy_value = 0.0;  ///< J(u) = E_p(u)/p - <f, u>
  /// J at the start and after every accepted step.
  std::vector<double> energy_history;
};

/// J(u) = E_p(u)/p - <f, u>, the strictly convex functional whose unique
/// critical point solves A_p(u) = f.
double solve_functional(const RobinOperatorSpec& spec, const FeField& u, const DualVector& f);

/// Discrete inverse of A_p: damped Newton on J with Armijo backtracking.
/// Falls back to a steepest-descent step when the regularized Newton
/// direction is not a descent direction. On non-convergence the best
/// iterate is returned with `converged == false`.
std::pair<FeField, SolveReport> solve_Ap(const RobinOperatorSpec& spec, const DualVector& f,
                                         const SolverOptions& opts = {});

struct ContinuityEntry {
  double data_distance = 0.0;      ///< ||f_n - f|| (Euclidean, dual entries)
  double solution_distance = 0.0;  ///< max nodal |u_n - u|
};

struct ContinuityReport {
  std::vector<ContinuityEntry> entries;
  bool monotone_decay = false;
  double final_solution_distance = 0.0;
};

/// Solves A_p(u_n) = f_n along the sequence and compares with A_p(u) = f.
ContinuityReport continuity_check(const RobinOperatorSpec& spec, const DualVector& f_limit,
                                  const std::vector<DualVector>& f_sequence,
                                  const SolverOptions& opts = {});

// --- Newton for general square residual systems -------------------------

struct NewtonOptions {
  double tol = 1e-10;
  int max_iters = 100;
  int max_backtracks = 40;
  double divergence_norm = 1e6;  ///< sup norm of the iterate
};

struct NewtonResult {
  Eigen::VectorXd x;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<SparseMatrix(const Eigen::VectorXd&)>;
using NormFn = std::function<double(const Eigen::VectorXd&)>;

/// Damped Newton on F(x) = 0 with backtracking on ||F||_2. Convergence is
/// judged with `norm` (Euclidean when empty).
NewtonResult newton_system(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                           Eigen::VectorXd x0, const NewtonOptions& opts = {},
                           const NormFn& norm = {});

}  // namespace robin_plap
