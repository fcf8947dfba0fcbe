#include "robin_plap/nonlinear_solve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace robin_plap {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

// Energies below this relative change are treated as roundoff.
constexpr double kEnergyNoise = 1e-13;

}  // namespace

void SolverOptions::validate() const {
  if (!(tol_residual > 0.0)) throw std::invalid_argument("SolverOptions: tol_residual must be positive");
  if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("SolverOptions: shrink must lie in (0,1)");
}

double solve_functional(const RobinOperatorSpec& spec, const FeField& u, const DualVector& f) {
  return energy(spec, u) / spec.p - pair(f, u);
}

std::pair<FeField, SolveReport> solve_Ap(const RobinOperatorSpec& spec, const DualVector& f,
                                         const SolverOptions& opts) {
  spec.validate();
  opts.validate();
  if (f.size() != spec.mesh->num_nodes()) throw std::invalid_argument("solve_Ap: rhs size mismatch");
  if (!f.entries.allFinite()) throw std::invalid_argument("solve_Ap: non-finite rhs");

  FeField u = opts.initial_guess ? *opts.initial_guess : FeField::zero(spec.mesh);
  require_mesh(u, spec.mesh);

  SolveReport report;
  double j_value = solve_functional(spec, u, f);
  report.energy_history.push_back(j_value);
  Eigen::VectorXd r = residual(spec, u, f).entries;
  double r_norm = r.norm();

  Eigen::SimplicialLDLT<ColMatrix> ldlt;
  for (int it = 0; it < opts.max_iters && r_norm > opts.tol_residual; ++it) {
    const ColMatrix h = jacobian(spec, u);
    ldlt.compute(h);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("solve_Ap: singular Jacobian after regularization");
    }
    Eigen::VectorXd d = ldlt.solve(-r);
    double slope = r.dot(d);
    if (!d.allFinite() || !(slope < 0.0)) {
      d = -r;
      slope = -r.squaredNorm();
    }

    double alpha = 1.0;
    bool accepted = false;
    FeField trial = u;
    double trial_j = j_value;
    Eigen::VectorXd trial_r;
    for (int k = 0; k < opts.max_backtracks; ++k, alpha *= opts.shrink) {
      trial_r.resize(0);
      trial.coeffs = u.coeffs + alpha * d;
      if (!trial.coeffs.allFinite()) continue;
      trial_j = solve_functional(spec, trial, f);
      const double decrease = trial_j - j_value;
      if (decrease <= opts.sufficient_decrease * alpha * slope) {
        accepted = true;
      } else if (std::abs(decrease) <= kEnergyNoise * (std::abs(j_value) + 1.0)) {
        // J is flat to roundoff here; judge the step by the residual.
        trial_r = residual(spec, trial, f).entries;
        accepted = trial_r.norm() < r_norm;
      }
      if (accepted) break;
    }
    if (!accepted) break;

    u = std::move(trial);
    j_value = trial_j;
    r = trial_r.size() ? trial_r : residual(spec, u, f).entries;
    r_norm = r.norm();
    report.energy_history.push_back(j_value);
    report.iterations = it + 1;
  }

  report.final_residual_norm = r_norm;
  report.energy_value = j_value;
  report.converged = r_norm <= opts.tol_residual;
  return {std::move(u), std::move(report)};
}

ContinuityReport continuity_check(const RobinOperatorSpec& spec, const DualVector& f_limit,
                                  const std::vector<DualVector>& f_sequence,
                                  const SolverOptions& opts) {
  ContinuityReport report;
  const auto [u_limit, limit_report] = solve_Ap(spec, f_limit, opts);
  if (!limit_report.converged) throw std::runtime_error("continuity_check: limit solve failed");
  SolverOptions warm = opts;
  warm.initial_guess = u_limit;
  for (const auto& f_n : f_sequence) {
    const auto [u_n, rep] = solve_Ap(spec, f_n, warm);
    if (!rep.converged) throw std::runtime_error("continuity_check: sequence solve failed");
    report.entries.push_back({(f_n - f_limit).norm(), sup_distance(u_n, u_limit)});
  }
  report.monotone_decay = true;
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    if (report.entries[i].solution_distance > report.entries[i - 1].solution_distance) {
      report.monotone_decay = false;
    }
  }
  report.final_solution_distance =
      report.entries.empty() ? 0.0 : report.entries.back().solution_distance;
  return report;
}

NewtonResult newton_system(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                           Eigen::VectorXd x0, const NewtonOptions& opts, const NormFn& norm) {
  const auto measure = [&norm](const Eigen::VectorXd& r) { return norm ? norm(r) : r.norm(); };
  NewtonResult result;
  result.x = std::move(x0);
  Eigen::VectorXd r = residual_fn(result.x);
  result.residual_norm = measure(r);
  Eigen::SparseLU<ColMatrix> lu;
  for (int it = 0; it < opts.max_iters; ++it) {
    if (result.residual_norm <= opts.tol) break;
    const ColMatrix jac = jacobian_fn(result.x);
    lu.compute(jac);
    Eigen::VectorXd d;
    if (lu.info() == Eigen::Success) d = lu.solve(-r);
    if (lu.info() != Eigen::Success || !d.allFinite()) {
      d = -(jac.transpose() * r);
      const double scale = (jac * d).squaredNorm();
      if (!(scale > 0.0)) break;
      d *= -r.dot(jac * d) / scale;
    }

    const double merit = r.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial, trial_r;
    for (int k = 0; k < opts.max_backtracks; ++k, alpha *= 0.5) {
      trial = result.x + alpha * d;
      trial_r = residual_fn(trial);
      if (trial_r.allFinite() && trial_r.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    result.x = std::move(trial);
    r = std::move(trial_r);
    result.residual_norm = measure(r);
    result.iterations = it + 1;
    if (result.x.cwiseAbs().maxCoeff() > opts.divergence_norm) {
      result.diverged = true;
      break;
    }
  }
  result.converged = !result.diverged && result.residual_norm <= opts.tol;
  return result;
}

}  // namespace robin_plap
