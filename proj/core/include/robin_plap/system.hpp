#pragma once

#include <array>

#include "robin_plap/nonlinear_solve.hpp"
#include "robin_plap/reactions.hpp"

namespace robin_plap {

/// Coupled problem: A_{p_i} u_i = f_i(x, u_1, u_2), i = 1, 2, on one mesh.
struct SystemSpec {
  std::array<RobinOperatorSpec, 2> ops;
  ReactionSpec reactions;

  /// Throws unless both operators are valid, share one mesh, and the
  /// reaction is well formed.
  void validate() const;
  const MeshPtr& mesh() const { return ops[0].mesh; }
  std::array<double, 2> exponents() const { return {ops[0].p, ops[1].p}; }
};

using ReactionPair = std::array<ReactionFn, 2>;

/// Stacks a field pair into one vector [u1; u2].
Eigen::VectorXd stack(const FieldPair& u);
FieldPair unstack(const MeshPtr& mesh, const Eigen::VectorXd& x);

/// Block residual [A_1(u1) - F_1; A_2(u2) - F_2] with untruncated F_i.
Eigen::VectorXd coupled_residual(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u);

/// Sum of the two block Euclidean norms.
double coupled_residual_norm(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u);

/// 2x2 block Jacobian. Reaction derivatives use central differences with
/// step 1e-6 scaled by max(1, |s|).
SparseMatrix coupled_jacobian(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u);

struct CoupledResult {
  FieldPair u;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Damped Newton on the untruncated coupled system.
CoupledResult coupled_newton(const SystemSpec& sys, const ReactionPair& f, const FieldPair& start,
                             const NewtonOptions& opts = {});

}  // namespace robin_plap
