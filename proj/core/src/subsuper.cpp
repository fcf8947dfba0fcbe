#include "robin_plap/subsuper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace robin_plap {

namespace {

struct Worst {
  double margin = -std::numeric_limits<double>::infinity();
  std::string inequality;
  int node = -1;
  int probe = -1;

  void take(double m, const char* which, int n, int pr) {
    if (m > margin) {
      margin = m;
      inequality = which;
      node = n;
      probe = pr;
    }
  }
};

// Max over j of sign * (<A u, psi_j> - int f(x, w1, w2) psi_j).
void check_side(const SystemSpec& sys, int i, const FieldPair& w, const DualVector& au, double sign,
                const char* label, int probe, Worst& worst) {
  const DualVector f = assemble_reaction(sys.reactions, i, w[0], w[1]);
  const Eigen::VectorXd m = sign * (au.entries - f.entries);
  Eigen::Index j = 0;
  const double v = m.maxCoeff(&j);
  worst.take(v, label, static_cast<int>(j), probe);
}

bool detect_monotone(const SystemSpec& sys, const TrappingRegion& r) {
  constexpr int kSteps = 9;
  const auto nodes = sys.mesh()->nodes();
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto idx = static_cast<Eigen::Index>(k);
      for (double own : {r.lower[i].coeffs[idx], r.upper[i].coeffs[idx]}) {
        const double lo = r.lower[j].coeffs[idx];
        const double hi = r.upper[j].coeffs[idx];
        bool up = true, down = true;
        double prev = 0.0;
        for (int s = 0; s <= kSteps; ++s) {
          const double other = lo + (hi - lo) * s / kSteps;
          const double v = i == 0 ? sys.reactions.f[0](nodes[k], own, other)
                                  : sys.reactions.f[1](nodes[k], other, own);
          if (s > 0) {
            up = up && v >= prev - 1e-14;
            down = down && v <= prev + 1e-14;
          }
          prev = v;
        }
        if (!up && !down) return false;
      }
    }
  }
  return true;
}

FeField constant_like(const MeshPtr& mesh, double c) { return FeField::constant(mesh, c); }

ConstructedRegion construct(const SystemSpec& sys, const std::array<EigenPair, 2>& eig,
                            const HypothesisReport& h2, const SubsuperOptions& opts, bool positive) {
  sys.validate();
  const auto& delta_side = positive ? h2.delta_plus : h2.delta_minus;
  const double delta = std::min(delta_side[0], delta_side[1]);
  if (!(delta > 0.0)) throw std::runtime_error("H2 sampling gave no admissible radius (delta = 0)");
  double kmin = std::numeric_limits<double>::infinity();
  double phimax = 0.0;
  for (int i = 0; i < 2; ++i) {
    require_mesh(eig[i].phi, sys.mesh());
    kmin = std::min(kmin, positive ? sys.reactions.k_plus[i] : -sys.reactions.k_minus[i]);
    phimax = std::max(phimax, sup_norm(eig[i].phi));
  }
  ConstructedRegion out;
  out.epsilon = 0.99 * std::min(delta, 0.5 * kmin) / phimax;
  for (out.halvings = 0; out.halvings <= opts.max_halvings; ++out.halvings) {
    out.region = positive ? positive_region(sys, eig, out.epsilon) : negative_region(sys, eig, out.epsilon);
    out.verification = verify_subsuper(sys, out.region, opts);
    if (out.verification.pass) return out;
    if (out.halvings < opts.max_halvings) out.epsilon *= 0.5;
  }
  std::ostringstream msg;
  msg << (positive ? "positive" : "negative") << " sub-supersolution pair not found after "
      << opts.max_halvings << " halvings; worst inequality " << out.verification.worst_inequality
      << " at node " << out.verification.worst_node << " with margin " << out.verification.worst_margin;
  throw std::runtime_error(msg.str());
}

}  // namespace

void TrappingRegion::validate() const {
  for (int i = 0; i < 2; ++i) {
    require_same_mesh(lower[i], upper[i]);
    require_same_mesh(lower[i], lower[0]);
    if ((lower[i].coeffs.array() > upper[i].coeffs.array()).any())
      throw std::invalid_argument("trapping region is not ordered");
  }
}

double TrappingRegion::excursion(const FieldPair& u) const {
  double e = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    require_same_mesh(u[i], lower[i]);
    e = std::max(e, (lower[i].coeffs - u[i].coeffs).maxCoeff());
    e = std::max(e, (u[i].coeffs - upper[i].coeffs).maxCoeff());
  }
  return e;
}

SubsuperReport verify_subsuper(const SystemSpec& sys, const TrappingRegion& region,
                               const SubsuperOptions& opts) {
  sys.validate();
  if (opts.probe_count < 0) throw std::invalid_argument("probe_count must be non-negative");
  SubsuperReport report;
  Worst worst;
  for (int i = 0; i < 2; ++i) {
    require_mesh(region.lower[i], sys.mesh());
    require_mesh(region.upper[i], sys.mesh());
    Eigen::Index j = 0;
    const double order = (region.lower[i].coeffs - region.upper[i].coeffs).maxCoeff(&j);
    worst.take(order, "order", static_cast<int>(j), -1);
  }

  const std::array<DualVector, 2> a_lower{apply_Ap(sys.ops[0], region.lower[0]),
                                          apply_Ap(sys.ops[1], region.lower[1])};
  const std::array<DualVector, 2> a_upper{apply_Ap(sys.ops[0], region.upper[0]),
                                          apply_Ap(sys.ops[1], region.upper[1])};
  auto check_probe = [&](const FieldPair& v, int probe) {
    check_side(sys, 0, {region.lower[0], v[1]}, a_lower[0], 1.0, "sub1", probe, worst);
    check_side(sys, 0, {region.upper[0], v[1]}, a_upper[0], -1.0, "super1", probe, worst);
    check_side(sys, 1, {v[0], region.lower[1]}, a_lower[1], 1.0, "sub2", probe, worst);
    check_side(sys, 1, {v[0], region.upper[1]}, a_upper[1], -1.0, "super2", probe, worst);
    ++report.probes_checked;
  };
  check_probe(region.lower, -1);
  check_probe(region.upper, -2);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = region.lower[0].coeffs.size();
  for (int k = 0; k < opts.probe_count; ++k) {
    FieldPair v = region.lower;
    for (int i = 0; i < 2; ++i) {
      for (Eigen::Index m = 0; m < n; ++m) {
        const double lo = region.lower[i].coeffs[m];
        const double hi = std::max(lo, region.upper[i].coeffs[m]);
        v[i].coeffs[m] = lo + unit(rng) * (hi - lo);
      }
    }
    check_probe(v, k);
  }

  report.worst_margin = worst.margin;
  report.worst_inequality = worst.inequality;
  report.worst_node = worst.node;
  report.worst_probe = worst.probe;
  report.pass = worst.margin <= opts.tol;
  report.monotone_detected = detect_monotone(sys, region);
  return report;
}

TrappingRegion positive_region(const SystemSpec& sys, const std::array<EigenPair, 2>& eig, double eps) {
  const MeshPtr& mesh = sys.mesh();
  TrappingRegion r;
  for (int i = 0; i < 2; ++i) {
    r.lower[i] = FeField(mesh, eps * eig[i].phi.coeffs);
    r.upper[i] = constant_like(mesh, sys.reactions.k_plus[i]);
  }
  return r;
}

TrappingRegion negative_region(const SystemSpec& sys, const std::array<EigenPair, 2>& eig, double eps) {
  const MeshPtr& mesh = sys.mesh();
  TrappingRegion r;
  for (int i = 0; i < 2; ++i) {
    r.lower[i] = constant_like(mesh, sys.reactions.k_minus[i]);
    r.upper[i] = FeField(mesh, -eps * eig[i].phi.coeffs);
  }
  return r;
}

ConstructedRegion construct_positive_pair(const SystemSpec& sys, const std::array<EigenPair, 2>& eig,
                                          const HypothesisReport& h2, const SubsuperOptions& opts) {
  return construct(sys, eig, h2, opts, true);
}

ConstructedRegion construct_negative_pair(const SystemSpec& sys, const std::array<EigenPair, 2>& eig,
                                          const HypothesisReport& h2, const SubsuperOptions& opts) {
  return construct(sys, eig, h2, opts, false);
}

double truncated_residual_norm(const SystemSpec& sys, const TrappingRegion& region, const FieldPair& u) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    r += residual(sys.ops[i], u[i], assemble_F(sys.reactions, i, u[0], u[1], region.lower, region.upper)).norm();
  return r;
}

std::pair<FieldPair, RegionSolveReport> solve_in_region(const SystemSpec& sys,
                                                        const TrappingRegion& region,
                                                        const PicardOptions& opts) {
  sys.validate();
  region.validate();
  if (opts.damping.empty()) throw std::invalid_argument("at least one damping factor is required");
  const ReactionPair& f = sys.reactions.f;
  RegionSolveReport report;
  FieldPair best = region.lower;
  double best_res = std::numeric_limits<double>::infinity();
  std::ostringstream diag;

  for (double omega : opts.damping) {
    if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("damping factors must lie in (0, 1]");
    FieldPair u = region.lower;
    std::vector<double> history;
    double run_best = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    bool done = false;
    for (int k = 1; k <= opts.max_outer; ++k) {
      for (int i = 0; i < 2; ++i) {
        const DualVector rhs = assemble_F(sys.reactions, i, u[0], u[1], region.lower, region.upper);
        SolverOptions inner = opts.inner;
        inner.initial_guess = u[i];
        auto [next, rep] = solve_Ap(sys.ops[i], rhs, inner);
        u[i].coeffs = (1.0 - omega) * u[i].coeffs + omega * next.coeffs;
      }
      const double res = truncated_residual_norm(sys, region, u);
      history.push_back(res);
      if (res < best_res) {
        best_res = res;
        best = u;
        report.iterations = k;
        report.omega = omega;
        report.residual_history = history;
      }
      if (res <= opts.tol) {
        done = true;
        break;
      }
      if (!std::isfinite(res)) break;
      if (res < 0.9 * run_best) {
        run_best = res;
        since_improvement = 0;
      } else if (++since_improvement > 50) {
        break;
      }
    }
    diag << "omega=" << omega << ": " << history.size() << " sweeps, last residual "
         << (history.empty() ? 0.0 : history.back()) << "; ";
    if (done) break;
  }

  report.residual_norm = coupled_residual_norm(sys, f, best);
  report.trap_excursion = region.excursion(best);
  report.converged = best_res <= opts.tol && report.residual_norm <= opts.tol &&
                     report.trap_excursion <= opts.trap_tol;
  report.truncation_inactive = report.trap_excursion <= opts.trap_tol;
  report.diagnostics = diag.str();
  return {best, report};
}

}  // namespace robin_plap
