#include "robin_plap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "robin_plap/nonlinear_solve.hpp"

namespace robin_plap {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

DualVector checked_forcing(const RobinOperatorSpec& spec, const Forcing& h) {
  if (!h) throw std::invalid_argument("forcing h is empty");
  bool nonzero = false;
  for (const Point& x : spec.mesh->nodes()) {
    const double v = h(x);
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("forcing h must be finite and non-negative");
    nonzero = nonzero || v > 0.0;
  }
  if (!nonzero) throw std::invalid_argument("forcing h must not vanish identically");
  return load(spec, h);
}

SparseMatrix robin_matrix(const RobinOperatorSpec& spec) {
  return stiffness_matrix(*spec.mesh) + spec.beta * boundary_mass_matrix(*spec.mesh);
}

// Direct solve of (A - mu M) u = b for p = 2.
FeField linear_shifted_solve(const RobinOperatorSpec& spec, double mu, const DualVector& b, double* residual) {
  const ColMatrix s = ColMatrix(robin_matrix(spec) - mu * mass_matrix(*spec.mesh));
  Eigen::SparseLU<ColMatrix> lu(s);
  if (lu.info() != Eigen::Success) throw std::runtime_error("shifted linear system is singular");
  Eigen::VectorXd u = lu.solve(b.entries);
  if (residual) *residual = (s * u - b.entries).norm();
  return FeField(spec.mesh, std::move(u));
}

FeField positive_part_start(const RobinOperatorSpec& spec, const DualVector& b) {
  SolverOptions so;
  so.tol_residual = 1e-8;
  return solve_Ap(spec, b, so).first;
}

}  // namespace

std::vector<FeField> spectral_solutions(const RobinOperatorSpec& spec, double mu, const DualVector& rhs,
                                        const std::vector<FeField>& starts, double tol, int max_iters,
                                        double divergence_norm) {
  spec.validate();
  const MeshPtr& mesh = spec.mesh;
  const double eps = spec.grad_regularization > 0.0 ? spec.grad_regularization : RobinOperatorSpec::kDefaultRegularization;
  const auto res = [&](const Eigen::VectorXd& x) {
    const FeField u(mesh, x);
    return Eigen::VectorXd(apply_Ap(spec, u).entries - mu * lp_duality(u, spec.p).entries - rhs.entries);
  };
  const auto jac = [&](const Eigen::VectorXd& x) {
    const FeField u(mesh, x);
    return SparseMatrix(jacobian(spec, u) - mu * lp_duality_jacobian(u, spec.p, eps));
  };
  NewtonOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  opts.divergence_norm = divergence_norm;
  std::vector<FeField> found;
  for (const FeField& s : starts) {
    const NewtonResult r = newton_system(res, jac, s.coeffs, opts);
    if (r.diverged || !r.x.allFinite()) continue;
    FeField u(mesh, r.x);
    const double scale = std::max(1.0, mu * lp_duality(u, spec.p).norm() + rhs.norm());
    if (!r.converged && !(r.residual_norm <= tol * scale)) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const FeField& v) { return sup_distance(u, v) < 1e-6; });
    if (!dup) found.push_back(std::move(u));
  }
  return found;
}

ResonanceReport experiment_resonance(const RobinOperatorSpec& spec, const Forcing& h, const ResonanceOptions& opts) {
  spec.validate();
  const DualVector b = checked_forcing(spec, h);
  ResonanceReport rep;
  rep.linear = spec.p == 2.0;

  if (rep.linear) {
    const Eigen::MatrixXd a = Eigen::MatrixXd(robin_matrix(spec));
    const Eigen::MatrixXd m = Eigen::MatrixXd(mass_matrix(*spec.mesh));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gen(a, m, Eigen::EigenvaluesOnly);
    if (gen.info() != Eigen::Success) throw std::runtime_error("generalized eigenvalue solve failed");
    rep.lambda = gen.eigenvalues()(0);

    const Eigen::MatrixXd s = a - rep.lambda * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(s);
    if (sym.info() != Eigen::Success) throw std::runtime_error("symmetric eigenvalue solve failed");
    const double scale = sym.eigenvalues().cwiseAbs().maxCoeff();
    double ls2 = 0.0;
    for (Eigen::Index k = 0; k < s.rows(); ++k) {
      if (std::abs(sym.eigenvalues()(k)) <= 1e-10 * scale) {
        const double c = sym.eigenvectors().col(k).dot(b.entries);
        ls2 += c * c;
      }
    }
    rep.ls_residual = std::sqrt(ls2);
    rep.non_solvable = rep.ls_residual > opts.inconsistency_floor;

    linear_shifted_solve(spec, rep.lambda - opts.off_shift, b, &rep.off_resonance_residual);
    rep.solvable_off_resonance = rep.off_resonance_residual <= 1e-8 * std::max(1.0, b.norm());
    return rep;
  }

  const EigenPair eig = first_eigenpair(spec);
  rep.lambda = eig.lambda;
  std::vector<FeField> starts{positive_part_start(spec, b), FeField::zero(spec.mesh),
                              FeField::constant(spec.mesh, 1.0), FeField::constant(spec.mesh, -1.0)};
  for (double c : {1.0, 10.0, 100.0}) {
    starts.emplace_back(spec.mesh, c * eig.phi.coeffs);
    starts.emplace_back(spec.mesh, -c * eig.phi.coeffs);
  }
  rep.starts = static_cast<int>(starts.size());
  rep.smallest_residual = std::numeric_limits<double>::infinity();

  const double eps = spec.grad_regularization;
  NewtonOptions no;
  no.max_iters = opts.max_newton_iters;
  no.divergence_norm = opts.divergence_norm;
  const auto res = [&](const Eigen::VectorXd& x) {
    const FeField u(spec.mesh, x);
    return Eigen::VectorXd(apply_Ap(spec, u).entries - rep.lambda * lp_duality(u, spec.p).entries - b.entries);
  };
  const auto jac = [&](const Eigen::VectorXd& x) {
    const FeField u(spec.mesh, x);
    return SparseMatrix(jacobian(spec, u) - rep.lambda * lp_duality_jacobian(u, spec.p, eps));
  };
  for (const FeField& s : starts) {
    const NewtonResult r = newton_system(res, jac, s.coeffs, no);
    rep.smallest_residual = std::min(rep.smallest_residual, r.residual_norm);
    if (r.diverged || r.x.cwiseAbs().maxCoeff() > opts.divergence_norm) {
      ++rep.diverged;
    } else if (r.residual_norm > opts.stall_residual) {
      ++rep.stalled;
    }
  }
  rep.non_solvable = rep.diverged + rep.stalled == rep.starts;
  return rep;
}

AntimaxReport experiment_antimax(const RobinOperatorSpec& spec, const Forcing& h, const AntimaxOptions& opts) {
  spec.validate();
  const DualVector b = checked_forcing(spec, h);
  for (std::size_t k = 0; k < opts.delta_grid.size(); ++k) {
    if (!(opts.delta_grid[k] > 0.0)) throw std::invalid_argument("delta grid must be positive");
    if (k > 0 && !(opts.delta_grid[k] < opts.delta_grid[k - 1]))
      throw std::invalid_argument("delta grid must be decreasing");
  }
  if (!(opts.below_factor > 0.0 && opts.below_factor < 1.0))
    throw std::invalid_argument("below_factor must lie in (0, 1)");

  const bool linear = spec.p == 2.0;
  const EigenPair eig = first_eigenpair(spec);
  AntimaxReport rep;
  rep.lambda = eig.lambda;
  const FeField pos = positive_part_start(spec, b);

  auto run = [&](double mu) {
    AntimaxEntry e;
    e.mu = mu;
    std::vector<FeField> sols;
    if (linear) {
      sols.push_back(linear_shifted_solve(spec, mu, b, nullptr));
    } else {
      std::vector<FeField> starts;
      if (mu > rep.lambda) {
        const double s = std::pow(pair(b, eig.phi) / (mu - rep.lambda), 1.0 / (spec.p - 1.0));
        for (double c : {1.0, 0.5, 2.0, -1.0}) starts.emplace_back(spec.mesh, -c * s * eig.phi.coeffs);
      }
      starts.push_back(pos);
      starts.push_back(FeField(spec.mesh, -pos.coeffs));
      sols = spectral_solutions(spec, mu, b, starts, opts.tol, opts.max_newton_iters);
    }
    e.solutions_found = static_cast<int>(sols.size());
    e.max_value = -std::numeric_limits<double>::infinity();
    double min_value = std::numeric_limits<double>::infinity();
    for (const auto& u : sols) {
      e.max_value = std::max(e.max_value, u.coeffs.maxCoeff());
      min_value = std::min(min_value, u.coeffs.minCoeff());
    }
    e.all_negative = !sols.empty() && e.max_value < 0.0;
    return std::pair{e, !sols.empty() && min_value > 0.0};
  };

  for (double d : opts.delta_grid) {
    auto [e, positive] = run(rep.lambda + 0.5 * d);
    e.delta = d;
    rep.entries.push_back(e);
  }
  for (auto it = rep.entries.rbegin(); it != rep.entries.rend() && it->all_negative; ++it) rep.threshold = it->delta;
  const auto first_neg = std::find_if(rep.entries.begin(), rep.entries.end(), [](const AntimaxEntry& e) { return e.all_negative; });
  rep.monotone_onset = first_neg != rep.entries.end() &&
                       std::all_of(first_neg, rep.entries.end(), [](const AntimaxEntry& e) { return e.all_negative; });

  auto [below, positive] = run(opts.below_factor * rep.lambda);
  rep.below = below;
  rep.below_positive = positive;
  return rep;
}

}  // namespace robin_plap
