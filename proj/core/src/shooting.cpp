#include "robin_plap/shooting.hpp"

#include <cmath>
#include <stdexcept>

namespace robin_plap {

double shooting_mismatch(double p, double beta, double a, double b, double lambda,
                         int steps, int* sign_changes) {
  // y = (u, v), v = |u'|^{p-2} u'
  const double q = 1.0 / (p - 1.0);
  const auto rhs = [&](double u, double v, double& du, double& dv) {
    du = signed_pow(v, q);
    dv = -lambda * signed_pow(u, p - 1.0);
  };
  const double h = (b - a) / steps;
  double u = 1.0, v = beta;
  int changes = 0;
  double last_sign = 1.0;
  for (int i = 0; i < steps; ++i) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    rhs(u, v, k1u, k1v);
    rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
    rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
    rhs(u + h * k3u, v + h * k3v, k4u, k4v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (i + 1 < steps && u != 0.0) {
      const double s = u > 0.0 ? 1.0 : -1.0;
      if (s != last_sign) ++changes;
      last_sign = s;
    }
  }
  if (sign_changes) *sign_changes = changes;
  return v + beta * signed_pow(u, p - 1.0);
}

std::vector<ShootingEigenvalue> shooting_eigenvalues_1d(double p, double beta, double a, double b,
                                                        int count, const ShootingOptions& opts) {
  if (!(p > 1.0) || !(beta > 0.0) || !(a < b) || count < 1) {
    throw std::invalid_argument("shooting_eigenvalues_1d: invalid arguments");
  }
  const auto g = [&](double lambda) { return shooting_mismatch(p, beta, a, b, lambda, opts.steps); };
  std::vector<ShootingEigenvalue> out;
  double sigma = 0.0;
  double lo = 0.0, g_lo = g(0.0);
  while (static_cast<int>(out.size()) < count) {
    sigma += opts.scan_step;
    const double hi = std::pow(sigma, p);
    if (hi > opts.lambda_max) throw std::runtime_error("shooting_eigenvalues_1d: lambda_max exceeded");
    const double g_hi = g(hi);
    if ((g_lo < 0.0) != (g_hi < 0.0)) {
      double l = lo, r = hi, gl = g_lo;
      for (int it = 0; it < 200 && r - l > 1e-14 * r; ++it) {
        const double mid = 0.5 * (l + r);
        const double gm = g(mid);
        if ((gm < 0.0) == (gl < 0.0)) {
          l = mid;
          gl = gm;
        } else {
          r = mid;
        }
      }
      ShootingEigenvalue ev;
      ev.lambda = 0.5 * (l + r);
      shooting_mismatch(p, beta, a, b, ev.lambda, opts.steps, &ev.sign_changes);
      out.push_back(ev);
    }
    lo = hi;
    g_lo = g_hi;
  }
  return out;
}

double second_eigenvalue_1d(const RobinOperatorSpec& spec, const ShootingOptions& opts) {
  spec.validate();
  const Mesh& mesh = *spec.mesh;
  if (mesh.dimension() != 1) {
    throw std::invalid_argument("second_eigenvalue_1d: only 1D meshes are supported");
  }
  const auto nodes = mesh.nodes();
  const auto evs = shooting_eigenvalues_1d(spec.p, spec.beta, nodes.front().x, nodes.back().x, 2, opts);
  if (evs[1].sign_changes != 1) {
    throw std::runtime_error("second_eigenvalue_1d: eigenfunction does not change sign exactly once");
  }
  return evs[1].lambda;
}

}  // namespace robin_plap
