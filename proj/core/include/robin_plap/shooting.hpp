#pragma once

#include <vector>

#include "robin_plap/assembly.hpp"

namespace robin_plap {

struct ShootingOptions {
  int steps = 4000;            ///< RK4 steps across the interval
  double scan_step = 0.02;     ///< step in lambda^{1/p} while bracketing roots
  double lambda_max = 1e5;
};

struct ShootingEigenvalue {
  double lambda = 0.0;
  int sign_changes = 0;  ///< interior sign changes of the eigenfunction
};

/// The `count` smallest eigenvalues of the 1D Robin p-Laplacian on (a, b),
///   -(|u'|^{p-2}u')' = lambda |u|^{p-2} u,
///   |u'|^{p-2}u'(a) = beta |u(a)|^{p-2}u(a),  |u'|^{p-2}u'(b) = -beta |u(b)|^{p-2}u(b),
/// found by shooting from x = a and bracketing the boundary mismatch at b.
std::vector<ShootingEigenvalue> shooting_eigenvalues_1d(double p, double beta, double a, double b,
                                                        int count, const ShootingOptions& opts = {});

/// Boundary mismatch at x = b of the shot with parameter lambda, and the
/// number of interior sign changes of the shot.
double shooting_mismatch(double p, double beta, double a, double b, double lambda,
                         int steps, int* sign_changes = nullptr);

/// Second eigenvalue on the operator's interval; rejects 2D meshes. The
/// eigenfunction is checked to change sign exactly once.
double second_eigenvalue_1d(const RobinOperatorSpec& spec, const ShootingOptions& opts = {});

}  // namespace robin_plap
