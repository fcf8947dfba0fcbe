#include "robin_plap/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace robin_plap {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& t) {
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Point element_gradient(const Mesh& mesh, std::size_t e, const Eigen::VectorXd& u) {
  const auto& v = mesh.elements()[e].nodes;
  const auto grads = mesh.basis_gradients(e);
  Point g;
  for (std::size_t k = 0; k < grads.size(); ++k) {
    g.x += grads[k].x * u[v[k]];
    g.y += grads[k].y * u[v[k]];
  }
  return g;
}

// Calls fn(weight, bary, value) at every boundary quadrature node. In 1D the
// facet is a single node with counting measure.
template <class Fn>
void for_each_boundary_point(const Mesh& mesh, const Eigen::VectorXd& u, Fn&& fn) {
  const int order = mesh.quadrature_order();
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim - 1, order);
  for (std::size_t f = 0; f < mesh.num_boundary_facets(); ++f) {
    const auto& nodes = mesh.boundary_facets()[f].nodes;
    const double measure = mesh.facet_measure(f);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double value = 0.0;
      for (int k = 0; k < dim; ++k) value += rule.coords[q][k] * u[nodes[k]];
      fn(rule.weights[q] * measure, nodes, rule.coords[q], value);
    }
  }
}

}  // namespace

double signed_pow(double s, double e) {
  if (s == 0.0) return 0.0;
  return s > 0.0 ? std::pow(s, e) : -std::pow(-s, e);
}

RobinOperatorSpec RobinOperatorSpec::make(MeshPtr mesh, double p, double beta) {
  RobinOperatorSpec spec;
  spec.mesh = std::move(mesh);
  spec.p = p;
  spec.beta = beta;
  spec.grad_regularization = p == 2.0 ? 0.0 : kDefaultRegularization;
  spec.validate();
  return spec;
}

void RobinOperatorSpec::validate() const {
  if (!mesh) throw std::invalid_argument("RobinOperatorSpec: missing mesh");
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("RobinOperatorSpec: p must exceed 1");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("RobinOperatorSpec: beta must be positive");
  }
  if (!(grad_regularization >= 0.0)) {
    throw std::invalid_argument("RobinOperatorSpec: negative regularization");
  }
  if (grad_regularization == 0.0 && p != 2.0) {
    throw std::invalid_argument(
        "RobinOperatorSpec: zero regularization is only allowed at p = 2");
  }
}

double energy(const RobinOperatorSpec& spec, const FeField& u) {
  spec.validate();
  require_mesh(u, spec.mesh);
  const Mesh& mesh = *spec.mesh;
  double interior = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Point g = element_gradient(mesh, e, u.coeffs);
    interior += std::pow(std::hypot(g.x, g.y), spec.p) * mesh.element_volume(e);
  }
  double boundary = 0.0;
  for_each_boundary_point(mesh, u.coeffs, [&](double w, const auto&, const auto&, double value) {
    boundary += w * std::pow(std::abs(value), spec.p);
  });
  return interior + spec.beta * boundary;
}

DualVector apply_interior(const RobinOperatorSpec& spec, const FeField& u) {
  spec.validate();
  require_mesh(u, spec.mesh);
  const Mesh& mesh = *spec.mesh;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.coeffs.size());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Point g = element_gradient(mesh, e, u.coeffs);
    const double norm = std::hypot(g.x, g.y);
    // 0^{p-2} * 0 := 0
    const double scale = norm == 0.0 ? 0.0 : std::pow(norm, spec.p - 2.0);
    const auto& v = mesh.elements()[e].nodes;
    const auto grads = mesh.basis_gradients(e);
    const double vol = mesh.element_volume(e);
    for (std::size_t k = 0; k < grads.size(); ++k) {
      out[v[k]] += vol * scale * (g.x * grads[k].x + g.y * grads[k].y);
    }
  }
  return DualVector(std::move(out));
}

DualVector apply_boundary(const RobinOperatorSpec& spec, const FeField& u) {
  spec.validate();
  require_mesh(u, spec.mesh);
  const Mesh& mesh = *spec.mesh;
  const int dim = mesh.dimension();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.coeffs.size());
  for_each_boundary_point(mesh, u.coeffs, [&](double w, const auto& nodes, const auto& bary, double value) {
    const double flux = spec.beta * signed_pow(value, spec.p - 1.0);
    for (int k = 0; k < dim; ++k) out[nodes[k]] += w * flux * bary[k];
  });
  return DualVector(std::move(out));
}

DualVector apply_Ap(const RobinOperatorSpec& spec, const FeField& u) {
  return apply_interior(spec, u) + apply_boundary(spec, u);
}

DualVector residual(const RobinOperatorSpec& spec, const FeField& u, const DualVector& rhs) {
  if (rhs.size() != u.size()) throw std::invalid_argument("residual: shape mismatch");
  return apply_Ap(spec, u) - rhs;
}

SparseMatrix jacobian(const RobinOperatorSpec& spec, const FeField& u) {
  spec.validate();
  require_mesh(u, spec.mesh);
  const Mesh& mesh = *spec.mesh;
  const double p = spec.p;
  const double eps = spec.grad_regularization;
  const int per = mesh.nodes_per_element();
  Triplets t;
  t.reserve(mesh.num_elements() * per * per + mesh.num_boundary_facets() * 4);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Point g = element_gradient(mesh, e, u.coeffs);
    const double a = g.x * g.x + g.y * g.y + eps;
    const double iso = std::pow(a, 0.5 * (p - 2.0));
    const double aniso = p == 2.0 ? 0.0 : (p - 2.0) * std::pow(a, 0.5 * (p - 4.0));
    const auto& v = mesh.elements()[e].nodes;
    const auto grads = mesh.basis_gradients(e);
    const double vol = mesh.element_volume(e);
    for (int i = 0; i < per; ++i) {
      const double gi = g.x * grads[i].x + g.y * grads[i].y;
      for (int j = 0; j < per; ++j) {
        const double gj = g.x * grads[j].x + g.y * grads[j].y;
        const double dot = grads[i].x * grads[j].x + grads[i].y * grads[j].y;
        t.emplace_back(v[i], v[j], vol * (iso * dot + aniso * gi * gj));
      }
    }
  }
  const int dim = mesh.dimension();
  for_each_boundary_point(mesh, u.coeffs, [&](double w, const auto& nodes, const auto& bary, double value) {
    const double d = spec.beta * (p - 1.0) * std::pow(value * value + eps, 0.5 * (p - 2.0));
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) t.emplace_back(nodes[i], nodes[j], w * d * bary[i] * bary[j]);
    }
  });
  return from_triplets(mesh.num_nodes(), t);
}

DualVector assemble_field_load(const Mesh& mesh, const Eigen::VectorXd& u1,
                               const Eigen::VectorXd& u2, const FieldIntegrand& g,
                               int order) {
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim, order);
  const auto nodes = mesh.nodes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    const double vol = mesh.element_volume(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.coords[q];
      Point x;
      double a = 0.0, b = 0.0;
      for (int k = 0; k <= dim; ++k) {
        x.x += l[k] * nodes[v[k]].x;
        x.y += l[k] * nodes[v[k]].y;
        a += l[k] * u1[v[k]];
        b += l[k] * u2[v[k]];
      }
      const double value = rule.weights[q] * vol * g(x, a, b);
      for (int k = 0; k <= dim; ++k) out[v[k]] += value * l[k];
    }
  }
  return DualVector(std::move(out));
}

SparseMatrix assemble_field_mass(const Mesh& mesh, const Eigen::VectorXd& u1,
                                 const Eigen::VectorXd& u2, const FieldIntegrand& w,
                                 int order) {
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim, order);
  const auto nodes = mesh.nodes();
  Triplets t;
  t.reserve(mesh.num_elements() * (dim + 1) * (dim + 1));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    const double vol = mesh.element_volume(e);
    double local[3][3] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.coords[q];
      Point x;
      double a = 0.0, b = 0.0;
      for (int k = 0; k <= dim; ++k) {
        x.x += l[k] * nodes[v[k]].x;
        x.y += l[k] * nodes[v[k]].y;
        a += l[k] * u1[v[k]];
        b += l[k] * u2[v[k]];
      }
      const double value = rule.weights[q] * vol * w(x, a, b);
      for (int i = 0; i <= dim; ++i) {
        for (int j = 0; j <= dim; ++j) local[i][j] += value * l[i] * l[j];
      }
    }
    for (int i = 0; i <= dim; ++i) {
      for (int j = 0; j <= dim; ++j) t.emplace_back(v[i], v[j], local[i][j]);
    }
  }
  return from_triplets(mesh.num_nodes(), t);
}

DualVector load(const Mesh& mesh, const std::function<double(Point)>& g) {
  const Eigen::VectorXd none = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  return assemble_field_load(mesh, none, none,
                             [&g](const Point& x, double, double) { return g(x); },
                             mesh.quadrature_order());
}

DualVector load(const RobinOperatorSpec& spec, const std::function<double(Point)>& g) {
  spec.validate();
  return load(*spec.mesh, g);
}

DualVector lp_duality(const FeField& u, double p) {
  return assemble_field_load(*u.mesh, u.coeffs, u.coeffs,
                             [p](const Point&, double s, double) { return signed_pow(s, p - 1.0); },
                             u.mesh->quadrature_order());
}

SparseMatrix lp_duality_jacobian(const FeField& u, double p, double eps) {
  return assemble_field_mass(*u.mesh, u.coeffs, u.coeffs,
                             [p, eps](const Point&, double s, double) {
                               return (p - 1.0) * std::pow(s * s + eps, 0.5 * (p - 2.0));
                             },
                             u.mesh->quadrature_order());
}

SparseMatrix stiffness_matrix(const Mesh& mesh) {
  const int per = mesh.nodes_per_element();
  Triplets t;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[e].nodes;
    const auto grads = mesh.basis_gradients(e);
    const double vol = mesh.element_volume(e);
    for (int i = 0; i < per; ++i) {
      for (int j = 0; j < per; ++j) {
        t.emplace_back(v[i], v[j], vol * (grads[i].x * grads[j].x + grads[i].y * grads[j].y));
      }
    }
  }
  return from_triplets(mesh.num_nodes(), t);
}

SparseMatrix mass_matrix(const Mesh& mesh) {
  const Eigen::VectorXd none = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  return assemble_field_mass(mesh, none, none, [](const Point&, double, double) { return 1.0; },
                             std::max(2, mesh.quadrature_order()));
}

SparseMatrix boundary_mass_matrix(const Mesh& mesh) {
  const int dim = mesh.dimension();
  const auto& rule = reference_rule(dim - 1, std::max(2, mesh.quadrature_order()));
  Triplets t;
  for (std::size_t f = 0; f < mesh.num_boundary_facets(); ++f) {
    const auto& nodes = mesh.boundary_facets()[f].nodes;
    const double measure = mesh.facet_measure(f);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          t.emplace_back(nodes[i], nodes[j],
                         rule.weights[q] * measure * rule.coords[q][i] * rule.coords[q][j]);
        }
      }
    }
  }
  return from_triplets(mesh.num_nodes(), t);
}

}  // namespace robin_plap
