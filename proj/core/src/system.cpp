#include "robin_plap/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace robin_plap {

namespace {

constexpr double kFdStep = 1e-6;

using Triplet = Eigen::Triplet<double>;

void append_block(std::vector<Triplet>& out, const SparseMatrix& m, Eigen::Index row0,
                  Eigen::Index col0, double scale) {
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
  }
}

// d f / d s_k by central differences.
FieldIntegrand partial(const ReactionFn& f, int k) {
  return [f, k](const Point& x, double s1, double s2) {
    const double s = k == 0 ? s1 : s2;
    const double h = kFdStep * std::max(1.0, std::abs(s));
    if (k == 0) return (f(x, s1 + h, s2) - f(x, s1 - h, s2)) / (2.0 * h);
    return (f(x, s1, s2 + h) - f(x, s1, s2 - h)) / (2.0 * h);
  };
}

}  // namespace

void SystemSpec::validate() const {
  ops[0].validate();
  ops[1].validate();
  if (ops[0].mesh != ops[1].mesh) throw std::invalid_argument("system operators must share one mesh");
  reactions.validate();
}

Eigen::VectorXd stack(const FieldPair& u) {
  require_same_mesh(u[0], u[1]);
  Eigen::VectorXd x(u[0].coeffs.size() + u[1].coeffs.size());
  x << u[0].coeffs, u[1].coeffs;
  return x;
}

FieldPair unstack(const MeshPtr& mesh, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(mesh->num_nodes());
  if (x.size() != 2 * n) throw std::invalid_argument("stacked vector has the wrong length");
  return {FeField(mesh, x.head(n)), FeField(mesh, x.tail(n))};
}

Eigen::VectorXd coupled_residual(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u) {
  require_mesh(u[0], sys.mesh());
  require_mesh(u[1], sys.mesh());
  const Mesh& mesh = *sys.mesh();
  const int order = mesh.quadrature_order();
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  Eigen::VectorXd r(2 * n);
  for (int i = 0; i < 2; ++i) {
    const DualVector a = apply_Ap(sys.ops[i], u[i]);
    const DualVector g = assemble_field_load(mesh, u[0].coeffs, u[1].coeffs, f[i], order);
    r.segment(i * n, n) = a.entries - g.entries;
  }
  return r;
}

double coupled_residual_norm(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u) {
  const Eigen::VectorXd r = coupled_residual(sys, f, u);
  const Eigen::Index n = r.size() / 2;
  return r.head(n).norm() + r.tail(n).norm();
}

SparseMatrix coupled_jacobian(const SystemSpec& sys, const ReactionPair& f, const FieldPair& u) {
  const Mesh& mesh = *sys.mesh();
  const int order = mesh.quadrature_order();
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  std::vector<Triplet> t;
  for (int i = 0; i < 2; ++i) {
    append_block(t, jacobian(sys.ops[i], u[i]), i * n, i * n, 1.0);
    for (int k = 0; k < 2; ++k) {
      const SparseMatrix d = assemble_field_mass(mesh, u[0].coeffs, u[1].coeffs, partial(f[i], k), order);
      append_block(t, d, i * n, k * n, -1.0);
    }
  }
  SparseMatrix jac(2 * n, 2 * n);
  jac.setFromTriplets(t.begin(), t.end());
  return jac;
}

CoupledResult coupled_newton(const SystemSpec& sys, const ReactionPair& f, const FieldPair& start,
                             const NewtonOptions& opts) {
  sys.validate();
  const MeshPtr& mesh = sys.mesh();
  const auto n = static_cast<Eigen::Index>(mesh->num_nodes());
  const auto res = [&](const Eigen::VectorXd& x) { return coupled_residual(sys, f, unstack(mesh, x)); };
  const auto jac = [&](const Eigen::VectorXd& x) { return coupled_jacobian(sys, f, unstack(mesh, x)); };
  const auto norm = [n](const Eigen::VectorXd& r) { return r.head(n).norm() + r.tail(n).norm(); };
  const NewtonResult nr = newton_system(res, jac, stack(start), opts, norm);
  CoupledResult out;
  out.u = unstack(mesh, nr.x);
  out.converged = nr.converged;
  out.diverged = nr.diverged;
  out.iterations = nr.iterations;
  out.residual_norm = nr.residual_norm;
  return out;
}

}  // namespace robin_plap
