#include "robin_plap/fe_field.hpp"

#include <cmath>
#include <stdexcept>

namespace robin_plap {

FeField::FeField(MeshPtr m, Eigen::VectorXd c) : mesh(std::move(m)), coeffs(std::move(c)) {
  if (!mesh) throw std::invalid_argument("FeField: null mesh");
  if (static_cast<std::size_t>(coeffs.size()) != mesh->num_nodes()) {
    throw std::invalid_argument("FeField: coefficient count does not match node count");
  }
  if (!coeffs.allFinite()) throw std::invalid_argument("FeField: non-finite coefficient");
}

FeField FeField::zero(MeshPtr mesh) {
  const auto n = static_cast<Eigen::Index>(mesh->num_nodes());
  return FeField(std::move(mesh), Eigen::VectorXd::Zero(n));
}

FeField FeField::constant(MeshPtr mesh, double value) {
  const auto n = static_cast<Eigen::Index>(mesh->num_nodes());
  return FeField(std::move(mesh), Eigen::VectorXd::Constant(n, value));
}

FeField FeField::interpolate(MeshPtr mesh, const std::function<double(Point)>& g) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(mesh->num_nodes()));
  const auto nodes = mesh->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) c[static_cast<Eigen::Index>(i)] = g(nodes[i]);
  return FeField(std::move(mesh), std::move(c));
}

DualVector operator+(const DualVector& a, const DualVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("DualVector size mismatch");
  return DualVector(a.entries + b.entries);
}

DualVector operator-(const DualVector& a, const DualVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("DualVector size mismatch");
  return DualVector(a.entries - b.entries);
}

DualVector operator*(double s, const DualVector& a) { return DualVector(s * a.entries); }

double pair(const DualVector& f, const FeField& u) {
  if (f.size() != u.size()) throw std::invalid_argument("pair: size mismatch");
  return f.entries.dot(u.coeffs);
}

void require_same_mesh(const FeField& a, const FeField& b) {
  if (a.mesh != b.mesh) throw std::invalid_argument("fields live on different meshes");
}

void require_mesh(const FeField& u, const MeshPtr& mesh) {
  if (u.mesh != mesh) throw std::invalid_argument("field does not live on the operator mesh");
}

double lp_norm_pow(const FeField& u, double p) {
  const Mesh& mesh = *u.mesh;
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim, mesh.quadrature_order());
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double value = 0.0;
      for (int k = 0; k <= dim; ++k) value += rule.coords[q][k] * u.coeffs[v[k]];
      sum += rule.weights[q] * std::pow(std::abs(value), p);
    }
    total += sum * mesh.element_volume(e);
  }
  return total;
}

double lp_norm(const FeField& u, double p) { return std::pow(lp_norm_pow(u, p), 1.0 / p); }

double gradient_lp_norm_pow(const FeField& u, double p) {
  const Mesh& mesh = *u.mesh;
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    const auto grads = mesh.basis_gradients(e);
    double gx = 0.0, gy = 0.0;
    for (std::size_t k = 0; k < grads.size(); ++k) {
      gx += grads[k].x * u.coeffs[v[k]];
      gy += grads[k].y * u.coeffs[v[k]];
    }
    total += std::pow(std::hypot(gx, gy), p) * mesh.element_volume(e);
  }
  return total;
}

double w1p_norm(const FeField& u, double p) {
  return std::pow(lp_norm_pow(u, p) + gradient_lp_norm_pow(u, p), 1.0 / p);
}

double sup_norm(const FeField& u) { return u.coeffs.cwiseAbs().maxCoeff(); }

double sup_distance(const FeField& a, const FeField& b) {
  require_same_mesh(a, b);
  return (a.coeffs - b.coeffs).cwiseAbs().maxCoeff();
}

}  // namespace robin_plap
