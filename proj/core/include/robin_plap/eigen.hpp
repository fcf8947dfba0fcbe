#pragma once

#include "robin_plap/nonlinear_solve.hpp"

namespace robin_plap {

/// First Robin eigenpair: phi > 0 at every node, ||phi||_p = 1 and
/// E_p(phi) = lambda.
struct EigenPair {
  double lambda = 0.0;
  FeField phi;
};

struct EigenOptions {
  double tol = 1e-9;       ///< on ||A_p(phi) - lambda |phi|^{p-2} phi||
  int max_iters = 500;     ///< outer iterations per continuation level
  double p_step = 0.25;    ///< continuation step in p starting from p = 2
};

/// E_p(u) / ||u||_p^p. Throws on u == 0.
double rayleigh_quotient(const RobinOperatorSpec& spec, const FeField& u);

/// Euclidean norm of A_p(phi) - lambda * lp_duality(phi, p).
double eigen_residual_norm(const RobinOperatorSpec& spec, const EigenPair& pair);

/// Minimizes the Rayleigh quotient. At p = 2 this is inverse iteration on
/// (K + beta M_boundary) v = lambda M v. For other p the p = 2 eigenvector
/// is carried along p in steps of `p_step` with nonlinear inverse
/// iteration, A_p(w) = |u|^{p-2} u, u <- w / ||w||_p, each step of which
/// does not increase the quotient.
EigenPair first_eigenpair(const RobinOperatorSpec& spec, const EigenOptions& opts = {});

/// ||grad phi||_p^p - int |grad u|^{p-2} grad u . grad(phi^p / (u + eps)^{p-1}) dx,
/// evaluated at quadrature points. Nonnegative for phi, u >= 0.
double picone_check(const RobinOperatorSpec& spec, const FeField& phi, const FeField& u,
                    double eps);

}  // namespace robin_plap
