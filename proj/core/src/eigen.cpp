#include "robin_plap/eigen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

namespace robin_plap {

namespace {

FeField normalized(FeField u, double p) {
  const double n = lp_norm(u, p);
  if (!(n > 0.0)) throw std::runtime_error("eigen: iterate collapsed to zero");
  u.coeffs /= n;
  return u;
}

EigenPair finalize(const RobinOperatorSpec& spec, FeField phi) {
  if (phi.coeffs.sum() < 0.0) phi.coeffs = -phi.coeffs;
  phi = normalized(std::move(phi), spec.p);
  if (!(phi.coeffs.minCoeff() > 0.0)) {
    throw std::runtime_error("first_eigenpair: eigenfunction is not strictly positive");
  }
  return {energy(spec, phi), std::move(phi)};
}

EigenPair linear_inverse_iteration(const RobinOperatorSpec& spec, const EigenOptions& opts) {
  const Mesh& mesh = *spec.mesh;
  const Eigen::SparseMatrix<double> a = jacobian(RobinOperatorSpec::make(spec.mesh, 2.0, spec.beta),
                                                 FeField::zero(spec.mesh));
  const Eigen::SparseMatrix<double> m = mass_matrix(mesh);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("first_eigenpair: factorization failed");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.num_nodes()));
  v /= std::sqrt(v.dot(m * v));
  for (int it = 0; it < opts.max_iters; ++it) {
    Eigen::VectorXd w = ldlt.solve(m * v);
    v = w / std::sqrt(w.dot(m * w));
    const double lambda = v.dot(a * v);
    const double res = (a * v - lambda * (m * v)).norm();
    if (res <= opts.tol) return {lambda, FeField(spec.mesh, v)};
  }
  throw std::runtime_error("first_eigenpair: inverse iteration did not converge");
}

// Nonlinear inverse iteration at fixed p starting from `start`.
EigenPair nonlinear_inverse_iteration(const RobinOperatorSpec& spec, FeField start,
                                      const EigenOptions& opts) {
  FeField u = normalized(std::move(start), spec.p);
  double lambda = energy(spec, u);
  SolverOptions inner;
  inner.tol_residual = std::max(1e-13, 1e-3 * opts.tol);
  inner.max_iters = 400;
  for (int it = 0; it < opts.max_iters; ++it) {
    const DualVector g = lp_duality(u, spec.p);
    FeField guess = u;
    guess.coeffs *= std::pow(lambda, -1.0 / (spec.p - 1.0));
    inner.initial_guess = std::move(guess);
    auto [w, report] = solve_Ap(spec, g, inner);
    if (!report.converged && report.final_residual_norm > 10.0 * inner.tol_residual) {
      throw std::runtime_error("first_eigenpair: inner solve failed (residual " +
                               std::to_string(report.final_residual_norm) + ")");
    }
    u = normalized(std::move(w), spec.p);
    lambda = energy(spec, u);
    const double res = (apply_Ap(spec, u) - lambda * lp_duality(u, spec.p)).norm();
    if (res <= opts.tol) return {lambda, std::move(u)};
  }
  throw std::runtime_error("first_eigenpair: nonlinear inverse iteration did not converge at p = " +
                           std::to_string(spec.p));
}

}  // namespace

double rayleigh_quotient(const RobinOperatorSpec& spec, const FeField& u) {
  const double denom = lp_norm_pow(u, spec.p);
  if (!(denom > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero field");
  return energy(spec, u) / denom;
}

double eigen_residual_norm(const RobinOperatorSpec& spec, const EigenPair& pair) {
  return (apply_Ap(spec, pair.phi) - pair.lambda * lp_duality(pair.phi, spec.p)).norm();
}

EigenPair first_eigenpair(const RobinOperatorSpec& spec, const EigenOptions& opts) {
  spec.validate();
  if (!(opts.p_step > 0.0)) throw std::invalid_argument("first_eigenpair: p_step must be positive");
  EigenPair linear = linear_inverse_iteration(spec, opts);
  if (spec.p == 2.0) return finalize(spec, std::move(linear.phi));

  FeField phi = std::move(linear.phi);
  if (phi.coeffs.sum() < 0.0) phi.coeffs = -phi.coeffs;
  const double direction = spec.p > 2.0 ? 1.0 : -1.0;
  double p = 2.0;
  EigenPair current;
  while (p != spec.p) {
    p += direction * opts.p_step;
    if ((spec.p - p) * direction <= 0.0) p = spec.p;
    RobinOperatorSpec level = spec;
    level.p = p;
    if (level.grad_regularization == 0.0) level.grad_regularization = RobinOperatorSpec::kDefaultRegularization;
    current = nonlinear_inverse_iteration(level, std::move(phi), opts);
    phi = current.phi;
  }
  return finalize(spec, std::move(current.phi));
}

double picone_check(const RobinOperatorSpec& spec, const FeField& phi, const FeField& u,
                    double eps) {
  spec.validate();
  require_mesh(phi, spec.mesh);
  require_mesh(u, spec.mesh);
  if (!(eps > 0.0)) throw std::invalid_argument("picone_check: eps must be positive");
  if (phi.coeffs.minCoeff() < 0.0 || u.coeffs.minCoeff() < 0.0) {
    throw std::invalid_argument("picone_check: fields must be nonnegative");
  }
  const Mesh& mesh = *spec.mesh;
  const double p = spec.p;
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim, mesh.quadrature_order());
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    const auto grads = mesh.basis_gradients(e);
    Point gp, gu;
    for (int k = 0; k <= dim; ++k) {
      gp.x += grads[k].x * phi.coeffs[v[k]];
      gp.y += grads[k].y * phi.coeffs[v[k]];
      gu.x += grads[k].x * u.coeffs[v[k]];
      gu.y += grads[k].y * u.coeffs[v[k]];
    }
    const double norm_u = std::hypot(gu.x, gu.y);
    const double flux = norm_u == 0.0 ? 0.0 : std::pow(norm_u, p - 2.0);
    const double grad_phi_p = std::pow(std::hypot(gp.x, gp.y), p);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double phi_q = 0.0, u_q = 0.0;
      for (int k = 0; k <= dim; ++k) {
        phi_q += rule.coords[q][k] * phi.coeffs[v[k]];
        u_q += rule.coords[q][k] * u.coeffs[v[k]];
      }
      const double shifted = u_q + eps;
      // grad(phi^p / (u+eps)^{p-1})
      const double c_phi = p * std::pow(phi_q, p - 1.0) / std::pow(shifted, p - 1.0);
      const double c_u = (p - 1.0) * std::pow(phi_q, p) / std::pow(shifted, p);
      const double wx = c_phi * gp.x - c_u * gu.x;
      const double wy = c_phi * gp.y - c_u * gu.y;
      local += rule.weights[q] * (grad_phi_p - flux * (gu.x * wx + gu.y * wy));
    }
    total += local * mesh.element_volume(e);
  }
  return total;
}

}  // namespace robin_plap
