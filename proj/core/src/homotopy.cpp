#include "robin_plap/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "robin_plap/parallel.hpp"
#include "robin_plap/shooting.hpp"

namespace robin_plap {

namespace {

double positive_power(double s, double e) { return s > 0.0 ? std::pow(s, e) : 0.0; }

double own(int i, double s1, double s2) { return i == 0 ? s1 : s2; }

std::string scale_label(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+g", c);
  return buf;
}

void require_component(int i) {
  if (i < 0 || i > 1) throw std::invalid_argument("component index must be 0 or 1");
}

}  // namespace

const char* to_string(FamilyKind kind) { return kind == FamilyKind::tilde ? "tilde" : "hat"; }

void HomotopyFamily::validate() const {
  sys.validate();
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("homotopy parameter t must lie in [0, 1]");
  for (double x : xi) {
    if (!std::isfinite(x)) throw std::invalid_argument("xi must be finite");
  }
}

double tilde_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2) {
  require_component(i);
  const double base = 1.0 + fam.xi[i] * positive_power(own(i, s1, s2), fam.sys.ops[i].p - 1.0);
  return fam.t * fam.sys.reactions.f[i](x, s1, s2) + (1.0 - fam.t) * base;
}

double hat_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2) {
  require_component(i);
  const double base = fam.xi[i] * positive_power(own(i, s1, s2), fam.sys.ops[i].p - 1.0);
  return fam.t * fam.sys.reactions.f[i](x, s1, s2) + (1.0 - fam.t) * base;
}

double family_f(const HomotopyFamily& fam, int i, const Point& x, double s1, double s2) {
  return fam.kind == FamilyKind::tilde ? tilde_f(fam, i, x, s1, s2) : hat_f(fam, i, x, s1, s2);
}

ReactionPair family_reaction(const HomotopyFamily& fam) {
  auto shared = std::make_shared<const HomotopyFamily>(fam);
  ReactionPair out;
  for (int i = 0; i < 2; ++i) {
    out[i] = [shared, i](const Point& x, double s1, double s2) { return family_f(*shared, i, x, s1, s2); };
  }
  return out;
}

double pair_norm(const FieldPair& u, std::array<double, 2> exponents) {
  return lp_norm(u[0], exponents[0]) + lp_norm(u[1], exponents[1]);
}

CoupledResult solve_family_at(const HomotopyFamily& fam, const FieldPair& start, const NewtonOptions& opts) {
  fam.validate();
  for (const auto& c : start) {
    require_mesh(c, fam.sys.mesh());
    if (!c.coeffs.allFinite()) throw std::invalid_argument("homotopy start must be finite");
  }
  return coupled_newton(fam.sys, family_reaction(fam), start, opts);
}

std::vector<double> default_t_grid() {
  std::vector<double> t(21);
  for (int k = 0; k <= 20; ++k) t[static_cast<std::size_t>(k)] = k / 20.0;
  return t;
}

std::vector<Branch> continuation(FamilyKind kind, const SystemSpec& sys, std::array<double, 2> xi,
                                 const std::vector<double>& t_grid, const std::vector<FieldPair>& starts,
                                 const ContinuationOptions& opts) {
  if (t_grid.empty()) return {};
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] >= 0.0 && t_grid[k] <= 1.0)) throw std::invalid_argument("t grid must lie in [0, 1]");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw std::invalid_argument("t grid must be increasing");
  }
  const auto exps = sys.exponents();
  std::vector<Branch> branches(starts.size());

  parallel_for(starts.size(), [&](std::size_t s) {
    Branch& b = branches[s];
    HomotopyFamily fam{kind, sys, xi, t_grid.front()};
    auto record = [&](double t, const FieldPair& u) {
      b.t.push_back(t);
      b.solutions.push_back(u);
      b.norms.push_back(pair_norm(u, exps));
      b.max_norm = std::max(b.max_norm, b.norms.back());
    };

    CoupledResult first = solve_family_at(fam, starts[s], opts.newton);
    if (!first.converged) return;
    record(fam.t, first.u);
    FieldPair current = first.u;
    double t_cur = fam.t;
    bool alive = true;
    for (std::size_t k = 1; k < t_grid.size() && alive; ++k) {
      const double target = t_grid[k];
      double goal = target;
      int bisections = 0;
      while (true) {
        fam.t = goal;
        CoupledResult r = solve_family_at(fam, current, opts.newton);
        if (r.converged) {
          current = r.u;
          t_cur = goal;
          record(goal, current);
          if (goal == target) break;
          goal = target;
          continue;
        }
        if (++bisections > opts.max_bisections) {
          alive = false;
          break;
        }
        goal = 0.5 * (t_cur + goal);
      }
    }
    b.reached_end = alive && b.t.back() == t_grid.back();
    if (opts.r_hat > 0.0) b.within_r_hat = b.max_norm < opts.r_hat;
    if (opts.r_tilde > 0.0) b.within_r_tilde = b.max_norm < opts.r_tilde;
  });
  return branches;
}

std::size_t ThirdSolutionReport::outside_count() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const Candidate& c) { return !c.inside_hull; }));
}

ThirdSolutionReport find_third_solution(const SystemSpec& sys, const FieldPair& negative,
                                        const FieldPair& positive, const std::array<EigenPair, 2>& eig,
                                        const ThirdSolutionOptions& opts) {
  sys.validate();
  const MeshPtr& mesh = sys.mesh();
  for (int i = 0; i < 2; ++i) {
    require_mesh(negative[i], mesh);
    require_mesh(positive[i], mesh);
    require_mesh(eig[i].phi, mesh);
  }
  const auto exps = sys.exponents();
  const auto& rx = sys.reactions;
  ThirdSolutionReport report;

  // Hull [u_-, u_+] and the reporting radii.
  FieldPair hull_lo = negative, hull_hi = positive, extreme = positive;
  for (int i = 0; i < 2; ++i) {
    hull_lo[i].coeffs = negative[i].coeffs.cwiseMin(positive[i].coeffs);
    hull_hi[i].coeffs = negative[i].coeffs.cwiseMax(positive[i].coeffs);
    extreme[i].coeffs = negative[i].coeffs.cwiseAbs().cwiseMax(positive[i].coeffs.cwiseAbs());
  }
  report.r_hat = 2.0 * pair_norm(extreme, exps);
  report.r_tilde = 10.0 * report.r_hat;

  std::vector<FieldPair> starts;
  std::vector<std::string> labels;
  auto add = [&](FieldPair u, std::string label) {
    starts.push_back(std::move(u));
    labels.push_back(std::move(label));
  };
  add(positive, "positive");
  add(negative, "negative");
  add({FeField::zero(mesh), FeField::zero(mesh)}, "zero");
  const int signs[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (double c : opts.scales) {
    for (const auto& sg : signs) {
      FieldPair u;
      for (int i = 0; i < 2; ++i) {
        const double k = sg[i] > 0 ? rx.k_plus[i] : rx.k_minus[i];
        u[i] = FeField::constant(mesh, c * k);
      }
      add(u, "const(" + scale_label(sg[0] * c) + "," + scale_label(sg[1] * c) + ")");
    }
    for (const auto& sg : signs) {
      FieldPair u{FeField(mesh, sg[0] * c * eig[0].phi.coeffs), FeField(mesh, sg[1] * c * eig[1].phi.coeffs)};
      add(u, "phi(" + scale_label(sg[0] * c) + "," + scale_label(sg[1] * c) + ")");
    }
  }

  NewtonOptions newton = opts.newton;
  newton.tol = opts.tol;

  if (opts.use_continuation) {
    std::optional<std::array<double, 2>> xi = opts.xi;
    if (!xi && mesh->dimension() == 1) {
      std::array<double, 2> x{};
      for (int i = 0; i < 2; ++i) x[i] = 0.5 * (eig[i].lambda + second_eigenvalue_1d(sys.ops[i]));
      xi = x;
    }
    if (xi) {
      std::vector<FieldPair> cont_starts{{FeField::zero(mesh), FeField::zero(mesh)}};
      for (const auto& sg : signs) {
        cont_starts.push_back({FeField(mesh, sg[0] * 2.0 * eig[0].phi.coeffs),
                               FeField(mesh, sg[1] * 2.0 * eig[1].phi.coeffs)});
      }
      ContinuationOptions copts;
      copts.newton = newton;
      copts.r_hat = report.r_hat;
      copts.r_tilde = report.r_tilde;
      report.branches = continuation(FamilyKind::hat, sys, *xi, default_t_grid(), cont_starts, copts);
      for (std::size_t b = 0; b < report.branches.size(); ++b) {
        if (report.branches[b].reached_end)
          add(report.branches[b].solutions.back(), "hat-branch-" + std::to_string(b));
      }
    }
  }

  std::vector<CoupledResult> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) { runs[k] = coupled_newton(sys, rx.f, starts[k], newton); });
  report.starts_tried = static_cast<int>(starts.size());

  for (std::size_t k = 0; k < runs.size(); ++k) {
    const CoupledResult& r = runs[k];
    if (!r.converged) continue;
    ++report.converged_runs;
    const bool duplicate = std::any_of(report.candidates.begin(), report.candidates.end(), [&](const Candidate& c) {
      return std::max(sup_distance(c.u[0], r.u[0]), sup_distance(c.u[1], r.u[1])) < opts.dedup_distance;
    });
    if (duplicate) continue;
    Candidate c;
    c.u = r.u;
    c.residual_norm = r.residual_norm;
    c.norm = pair_norm(r.u, exps);
    double excursion = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
      excursion = std::max(excursion, (hull_lo[i].coeffs - r.u[i].coeffs).maxCoeff());
      excursion = std::max(excursion, (r.u[i].coeffs - hull_hi[i].coeffs).maxCoeff());
    }
    c.hull_excursion = excursion;
    c.inside_hull = excursion <= 1e-8;
    c.start_label = labels[k];
    report.candidates.push_back(std::move(c));
  }
  return report;
}

}  // namespace robin_plap
