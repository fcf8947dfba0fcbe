#include "robin_plap/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace robin_plap {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 2)));
  const double step = (hi - lo) / static_cast<double>(v.size() - 1);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = lo + step * static_cast<double>(k);
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  auto e = linspace(std::log10(lo), std::log10(hi), n);
  for (double& t : e) t = std::pow(10.0, t);
  e.front() = lo;
  e.back() = hi;
  return e;
}

// Evaluates f_i with s_i = si and the other argument sj.
double eval_component(const ReactionSpec& spec, int i, const Point& x, double si, double sj) {
  return i == 0 ? spec.f[0](x, si, sj) : spec.f[1](x, sj, si);
}

SamplePoint sample(int i, const Point& x, double si, double sj) {
  SamplePoint sp;
  sp.component = i;
  sp.x = x;
  sp.s1 = i == 0 ? si : sj;
  sp.s2 = i == 0 ? sj : si;
  return sp;
}

void record(HypothesisReport& r, double violation, const SamplePoint& at) {
  if (!std::isfinite(violation)) violation = std::numeric_limits<double>::infinity();
  if (violation > r.worst_violation || r.worst_at.component < 0) {
    r.worst_violation = violation;
    r.worst_at = at;
  }
}

HypothesisReport start(const char* name) {
  HypothesisReport r;
  r.name = name;
  r.worst_violation = -std::numeric_limits<double>::infinity();
  r.worst_at.component = -1;
  return r;
}

void finish(HypothesisReport& r) {
  if (r.worst_at.component < 0) r.worst_at.component = 0;
  r.pass = r.worst_violation <= kHypothesisTolerance;
}

void require_grid(const SamplingGrid& grid) {
  if (grid.x_points.empty()) throw std::invalid_argument("sampling grid has no x points");
  if (grid.s_samples < 2 || grid.log_samples < 2)
    throw std::invalid_argument("sampling grid needs at least 2 samples per axis");
}

double hermite(double s, double s0, double y0, double d0, double s1, double y1, double d1) {
  const double h = s1 - s0;
  const double t = (s - s0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

void ReactionSpec::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!f[i]) throw std::invalid_argument("reaction component " + std::to_string(i + 1) + " is empty");
    if (!(k_minus[i] < 0.0 && k_plus[i] > 0.0))
      throw std::invalid_argument("reaction requires k_minus < 0 < k_plus");
  }
}

SamplingGrid SamplingGrid::from_mesh(const Mesh& mesh, int max_points, int s_samples) {
  if (max_points < 1) throw std::invalid_argument("max_points must be positive");
  SamplingGrid g;
  g.s_samples = s_samples;
  const auto nodes = mesh.nodes();
  const std::size_t n = nodes.size();
  const std::size_t m = std::min<std::size_t>(n, static_cast<std::size_t>(max_points));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t idx = m == 1 ? 0 : k * (n - 1) / (m - 1);
    g.x_points.push_back(nodes[idx]);
  }
  return g;
}

HypothesisReport check_H1(const ReactionSpec& spec, const SamplingGrid& grid) {
  spec.validate();
  require_grid(grid);
  auto r = start("H1");
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const auto pos = linspace(0.0, spec.k_plus[j], grid.s_samples);
    const auto neg = linspace(spec.k_minus[j], 0.0, grid.s_samples);
    for (const Point& x : grid.x_points) {
      for (double sj : pos) {
        const double v = eval_component(spec, i, x, spec.k_plus[i], sj);
        record(r, v, sample(i, x, spec.k_plus[i], sj));
      }
      for (double sj : neg) {
        const double v = eval_component(spec, i, x, spec.k_minus[i], sj);
        record(r, -v, sample(i, x, spec.k_minus[i], sj));
      }
    }
  }
  finish(r);
  return r;
}

HypothesisReport check_H2(const ReactionSpec& spec, std::array<double, 2> exponents,
                          std::array<double, 2> eigenvalues, const SamplingGrid& grid) {
  spec.validate();
  require_grid(grid);
  auto r = start("H2");
  std::ostringstream note;
  const auto small = logspace(1e-6, 1e-2, grid.log_samples);
  double pos_side = -std::numeric_limits<double>::infinity();
  double neg_side = pos_side;
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double p = exponents[i];
    const double eta = spec.eta[i];
    if (!(eta > eigenvalues[i])) {
      record(r, eigenvalues[i] - eta, sample(i, grid.x_points.front(), 0.0, 0.0));
      note << "eta_" << i + 1 << " <= lambda_" << i + 1 << "; ";
    }
    const auto pos_j = linspace(0.0, spec.k_plus[j], grid.s_samples);
    const auto neg_j = linspace(spec.k_minus[j], 0.0, grid.s_samples);
    for (const Point& x : grid.x_points) {
      for (double s : small) {
        const double denom = std::pow(s, p - 1.0);
        for (double sj : pos_j) {
          const double ratio = eval_component(spec, i, x, s, sj) / denom;
          pos_side = std::max(pos_side, (eta - 1e-6) - ratio);
          record(r, (eta - 1e-6) - ratio, sample(i, x, s, sj));
        }
        for (double sj : neg_j) {
          const double ratio = eval_component(spec, i, x, -s, sj) / (-denom);
          neg_side = std::max(neg_side, (eta - 1e-6) - ratio);
          record(r, (eta - 1e-6) - ratio, sample(i, x, -s, sj));
        }
      }
    }

    // Largest sampled radius on which f_i stays above xi |s|^{p-2} s.
    const double xi = 0.5 * (eigenvalues[i] + eta);
    const int n_delta = 4 * grid.s_samples;
    auto radius = [&](double k, const std::vector<double>& sj_grid, double sign) {
      const auto ss = linspace(0.0, std::abs(k), n_delta + 1);
      double last_ok = 0.0;
      for (std::size_t m = 1; m < ss.size(); ++m) {
        const double s = sign * ss[m];
        const double bound = xi * signed_pow(s, p - 1.0);
        bool ok = true;
        for (const Point& x : grid.x_points) {
          for (double sj : sj_grid) {
            const double v = eval_component(spec, i, x, s, sj);
            if (sign > 0 ? v < bound : v > bound) {
              ok = false;
              break;
            }
          }
          if (!ok) break;
        }
        if (!ok) break;
        last_ok = ss[m];
      }
      return last_ok;
    };
    r.delta_plus[i] = radius(spec.k_plus[i], pos_j, 1.0);
    r.delta_minus[i] = radius(spec.k_minus[i], neg_j, -1.0);
  }
  r.positive_side_violation = std::isnan(pos_side) ? std::numeric_limits<double>::infinity() : pos_side;
  r.negative_side_violation = std::isnan(neg_side) ? std::numeric_limits<double>::infinity() : neg_side;
  finish(r);
  note << "sampled on |s| in [1e-6, 1e-2]; a liminf is not certified by sampling";
  r.note = note.str();
  return r;
}

HypothesisReport check_H3(const ReactionSpec& spec, double rho, const SamplingGrid& grid) {
  spec.validate();
  require_grid(grid);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("H3 needs a finite rho > 0");
  auto r = start("H3");
  const auto si_grid = linspace(-rho, rho, 2 * grid.s_samples + 1);
  auto sj_grid = linspace(-1e3, 1e3, 2 * grid.s_samples + 1);
  const auto fine = linspace(-10.0, 10.0, 2 * grid.s_samples + 1);
  sj_grid.insert(sj_grid.end(), fine.begin(), fine.end());
  for (int i = 0; i < 2; ++i) {
    double mu = 0.0;
    for (const Point& x : grid.x_points) {
      for (double si : si_grid) {
        for (double sj : sj_grid) {
          const double v = std::abs(eval_component(spec, i, x, si, sj));
          if (!std::isfinite(v)) {
            mu = std::numeric_limits<double>::infinity();
            record(r, mu, sample(i, x, si, sj));
          } else if (v > mu) {
            mu = v;
          }
        }
      }
    }
    r.mu[i] = mu;
  }
  if (r.worst_at.component < 0) r.worst_violation = 0.0;
  finish(r);
  r.note = "sampled on s_j in [-1e3, 1e3]";
  return r;
}

HypothesisReport check_H4(const ReactionSpec& spec, std::array<double, 2> exponents,
                          const SamplingGrid& grid,
                          std::optional<std::array<double, 2>> eigenvalues) {
  spec.validate();
  require_grid(grid);
  constexpr double kTol = 1e-3;
  auto r = start("H4");
  std::ostringstream note;
  const auto large = logspace(1e2, 1e6, grid.log_samples);
  const auto sj_grid = linspace(-1e3, 1e3, grid.s_samples);
  for (int i = 0; i < 2; ++i) {
    const double p = exponents[i];
    const double theta = spec.theta[i];
    if (eigenvalues && !(theta > (*eigenvalues)[i])) {
      record(r, (*eigenvalues)[i] - theta, sample(i, grid.x_points.front(), 0.0, 0.0));
      note << "theta_" << i + 1 << " <= lambda_" << i + 1 << "; ";
    }
    // Max error over x, s_j for each s on the grid, both directions.
    std::vector<double> err_pos(large.size(), 0.0), err_neg(large.size(), 0.0);
    std::vector<SamplePoint> at_pos(large.size()), at_neg(large.size());
    for (std::size_t k = 0; k < large.size(); ++k) {
      const double s = large[k];
      const double denom = std::pow(s, p - 1.0);
      for (const Point& x : grid.x_points) {
        for (double sj : sj_grid) {
          double e = std::abs(eval_component(spec, i, x, s, sj) / denom - theta);
          if (!std::isfinite(e)) e = std::numeric_limits<double>::infinity();
          if (e >= err_pos[k]) {
            err_pos[k] = e;
            at_pos[k] = sample(i, x, s, sj);
          }
          e = std::abs(eval_component(spec, i, x, -s, sj) / denom);
          if (!std::isfinite(e)) e = std::numeric_limits<double>::infinity();
          if (e >= err_neg[k]) {
            err_neg[k] = e;
            at_neg[k] = sample(i, x, -s, sj);
          }
        }
      }
    }
    record(r, err_pos.back() - kTol, at_pos.back());
    record(r, err_neg.back() - kTol, at_neg.back());
    // The error must not grow from the first to the last grid point.
    record(r, err_pos.back() - err_pos.front() - kHypothesisTolerance, at_pos.back());
    record(r, err_neg.back() - err_neg.front() - kHypothesisTolerance, at_neg.back());
  }
  finish(r);
  note << "sampled on |s| in [1e2, 1e6]; a limit is not certified by sampling";
  r.note = note.str();
  return r;
}

FeField truncate(const FeField& u, const FeField& lower, const FeField& upper) {
  require_same_mesh(u, lower);
  require_same_mesh(u, upper);
  Eigen::VectorXd c(u.coeffs.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double lo = lower.coeffs[k];
    const double hi = upper.coeffs[k];
    if (lo > hi) throw std::invalid_argument("truncate: lower bound exceeds upper bound");
    c[k] = std::clamp(u.coeffs[k], lo, hi);
  }
  return FeField(u.mesh, std::move(c));
}

DualVector assemble_F(const ReactionSpec& spec, int i, const FeField& u1, const FeField& u2,
                      const FieldPair& lower, const FieldPair& upper) {
  if (i < 0 || i > 1) throw std::invalid_argument("component index must be 0 or 1");
  const FeField t1 = truncate(u1, lower[0], upper[0]);
  const FeField t2 = truncate(u2, lower[1], upper[1]);
  return assemble_reaction(spec, i, t1, t2);
}

DualVector assemble_reaction(const ReactionSpec& spec, int i, const FeField& u1, const FeField& u2) {
  if (i < 0 || i > 1) throw std::invalid_argument("component index must be 0 or 1");
  require_same_mesh(u1, u2);
  return assemble_field_load(*u1.mesh, u1.coeffs, u2.coeffs, spec.f[i], u1.mesh->quadrature_order());
}

void BumpParameters::validate() const {
  if (!(eta > 0 && theta > 0)) throw std::invalid_argument("bump: eta and theta must be positive");
  if (!(0 < a && a < k_plus && k_plus < b)) throw std::invalid_argument("bump: need 0 < a < k_plus < b");
  if (!(k_minus < m && m < 0)) throw std::invalid_argument("bump: need k_minus < m < 0");
  if (!(c >= 0 && c_neg >= 0)) throw std::invalid_argument("bump: c and c_neg must be non-negative");
}

double bump_value(const BumpParameters& q, double p, double s) {
  if (s >= 0.0) {
    if (s <= q.a) return q.eta * std::pow(s, p - 1.0);
    if (s <= q.k_plus)
      return hermite(s, q.a, q.eta * std::pow(q.a, p - 1.0), q.eta * (p - 1.0) * std::pow(q.a, p - 2.0),
                     q.k_plus, -q.c, 0.0);
    if (s <= q.b)
      return hermite(s, q.k_plus, -q.c, 0.0, q.b, q.theta * std::pow(q.b, p - 1.0),
                     q.theta * (p - 1.0) * std::pow(q.b, p - 2.0));
    return q.theta * std::pow(s, p - 1.0);
  }
  if (s >= q.m) return -q.eta * std::pow(-s, p - 1.0);
  if (s >= q.k_minus)
    return hermite(s, q.k_minus, q.c_neg, 0.0, q.m, -q.eta * std::pow(-q.m, p - 1.0),
                   q.eta * (p - 1.0) * std::pow(-q.m, p - 2.0));
  return q.c_neg;
}

ReactionSpec make_bump_reaction(const std::array<BumpParameters, 2>& params,
                                std::array<double, 2> exponents, bool coupled) {
  for (int i = 0; i < 2; ++i) {
    params[i].validate();
    if (!(exponents[i] > 1.0)) throw std::invalid_argument("bump: exponents must exceed 1");
  }
  ReactionSpec spec;
  spec.name = coupled ? "bump-coupled" : "bump";
  for (int i = 0; i < 2; ++i) {
    spec.k_plus[i] = params[i].k_plus;
    spec.k_minus[i] = params[i].k_minus;
    spec.eta[i] = params[i].eta;
    spec.theta[i] = params[i].theta;
  }
  const auto q0 = params[0];
  const auto q1 = params[1];
  const double p0 = exponents[0];
  const double p1 = exponents[1];
  if (!coupled) {
    spec.f[0] = [q0, p0](const Point&, double s1, double) { return bump_value(q0, p0, s1); };
    spec.f[1] = [q1, p1](const Point&, double, double s2) { return bump_value(q1, p1, s2); };
  } else {
    spec.f[0] = [q0, p0](const Point&, double s1, double s2) {
      return bump_value(q0, p0, s1) * (1.0 + 0.1 * std::tanh(s2));
    };
    spec.f[1] = [q1, p1](const Point&, double s1, double s2) {
      return bump_value(q1, p1, s2) * (1.0 + 0.1 * std::tanh(s1));
    };
    spec.eta[0] *= 1.0 - 0.1 * std::tanh(-params[1].k_minus);
    spec.eta[1] *= 1.0 - 0.1 * std::tanh(-params[0].k_minus);
  }
  return spec;
}

ReactionSpec make_zero_reaction(std::array<double, 2> k_plus, std::array<double, 2> k_minus) {
  ReactionSpec spec;
  spec.name = "zero";
  spec.f[0] = [](const Point&, double, double) { return 0.0; };
  spec.f[1] = [](const Point&, double, double) { return 0.0; };
  spec.k_plus = k_plus;
  spec.k_minus = k_minus;
  return spec;
}

ReactionSpec make_expression_reaction(const std::string& f1, const std::string& f2,
                                      const Expression::Constants& constants) {
  ReactionSpec spec;
  spec.name = "expression";
  const Expression e1 = Expression::parse(f1, constants);
  const Expression e2 = Expression::parse(f2, constants);
  spec.f[0] = [e1](const Point& x, double s1, double s2) { return e1(x, s1, s2); };
  spec.f[1] = [e2](const Point& x, double s1, double s2) { return e2(x, s1, s2); };
  return spec;
}

}  // namespace robin_plap
