#pragma once

// Reference computations used by the tests. Nothing here calls the library's
// assembly or solvers.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  if (glo * g(hi) > 0.0) throw std::runtime_error("bisect: no sign change");
  for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Smallest Robin eigenvalue of -u'' on (0, 1): tan(sqrt(l)/2) = beta / sqrt(l).
inline double robin_lambda1(double beta) {
  const double pi = std::numbers::pi;
  return bisect([beta](double l) { return std::tan(std::sqrt(l) / 2) - beta / std::sqrt(l); }, 1e-12, pi * pi - 1e-9);
}

/// Second Robin eigenvalue (odd eigenfunction): sqrt(l) cot(sqrt(l)/2) = -beta.
inline double robin_lambda2(double beta) {
  const double pi = std::numbers::pi;
  return bisect([beta](double l) {
    const double r = std::sqrt(l);
    return r * std::cos(r / 2) / std::sin(r / 2) + beta;
  }, pi * pi + 1e-9, 4 * pi * pi - 1e-9);
}

/// Closed-form solution of -u'' = 1, u'(0) = u(0), u'(1) = -u(1).
inline double robin_quadratic(double x) { return -x * x / 2 + x / 2 + 0.5; }

/// P1 matrices on the uniform mesh of (0, 1) with n elements.
struct Dense1D {
  Eigen::MatrixXd stiffness_robin;  // K + beta M_boundary
  Eigen::MatrixXd mass;
};

inline Dense1D dense_robin_1d(int n, double beta) {
  const double h = 1.0 / n;
  Dense1D d;
  d.stiffness_robin = Eigen::MatrixXd::Zero(n + 1, n + 1);
  d.mass = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int e = 0; e < n; ++e) {
    d.stiffness_robin(e, e) += 1 / h;
    d.stiffness_robin(e + 1, e + 1) += 1 / h;
    d.stiffness_robin(e, e + 1) -= 1 / h;
    d.stiffness_robin(e + 1, e) -= 1 / h;
    d.mass(e, e) += h / 3;
    d.mass(e + 1, e + 1) += h / 3;
    d.mass(e, e + 1) += h / 6;
    d.mass(e + 1, e) += h / 6;
  }
  d.stiffness_robin(0, 0) += beta;
  d.stiffness_robin(n, n) += beta;
  return d;
}

inline Eigen::VectorXd generalized_eigenvalues(const Dense1D& d) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(d.stiffness_robin, d.mass, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Discrete J(u) = E_p(u)/p - <load(f), u> on the uniform mesh of (0, 1),
/// evaluated directly from nodal values.
inline double functional_1d(const std::vector<double>& u, double p, double beta, double f) {
  const int n = static_cast<int>(u.size()) - 1;
  const double h = 1.0 / n;
  double e = 0.0;
  for (int k = 0; k < n; ++k) e += h * std::pow(std::abs((u[k + 1] - u[k]) / h), p);
  e += beta * (std::pow(std::abs(u[0]), p) + std::pow(std::abs(u[n]), p));
  double load = 0.0;
  for (int k = 0; k <= n; ++k) load += f * u[k] * ((k == 0 || k == n) ? h / 2 : h);
  return e / p - load;
}

/// Coordinate search: cyclic golden-section minimization per coordinate.
inline std::vector<double> coordinate_search(int n, double p, double beta, double f, int sweeps = 4000) {
  std::vector<double> u(n + 1, 0.0);
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double width = s < 50 ? 1.0 : 1e-2;
      double a = u[k] - width, b = u[k] + width;
      auto j = [&](double v) {
        const double keep = u[k];
        u[k] = v;
        const double r = functional_1d(u, p, beta, f);
        u[k] = keep;
        return r;
      };
      double c = b - g * (b - a), d = a + g * (b - a);
      double jc = j(c), jd = j(d);
      while (b - a > 1e-13) {
        if (jc < jd) {
          b = d;
          d = c;
          jd = jc;
          c = b - g * (b - a);
          jc = j(c);
        } else {
          a = c;
          c = d;
          jc = jd;
          d = a + g * (b - a);
          jd = j(d);
        }
      }
      const double next = 0.5 * (a + b);
      moved = std::max(moved, std::abs(next - u[k]));
      u[k] = next;
    }
    if (moved < 1e-12) break;
  }
  return u;
}

/// Composite Gauss-Legendre (5 points) on `pieces` equal subintervals of [a, b].
inline double integrate(const std::function<double(double)>& g, double a, double b, int pieces = 64) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const double h = (b - a) / pieces;
  double s = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double m = a + (k + 0.5) * h;
    for (int q = 0; q < 5; ++q) s += 0.5 * h * w[q] * g(m + 0.5 * h * x[q]);
  }
  return s;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace oracle
