#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>

#include "robin_plap/mesh.hpp"

namespace robin_plap {

using MeshPtr = std::shared_ptr<const Mesh>;

inline MeshPtr share(Mesh mesh) {
  return std::make_shared<const Mesh>(std::move(mesh));
}

/// Piecewise-linear finite-element function: one coefficient per node.
struct FeField {
  MeshPtr mesh;
  Eigen::VectorXd coeffs;

  FeField() = default;
  /// Throws if the length does not match the node count or an entry is not
  /// finite.
  FeField(MeshPtr mesh, Eigen::VectorXd coeffs);

  static FeField zero(MeshPtr mesh);
  static FeField constant(MeshPtr mesh, double value);
  static FeField interpolate(MeshPtr mesh, const std::function<double(Point)>& g);

  std::size_t size() const { return static_cast<std::size_t>(coeffs.size()); }
};

/// Element of the discrete dual space: entries are indexed by the nodal
/// test functions.
struct DualVector {
  Eigen::VectorXd entries;

  DualVector() = default;
  explicit DualVector(Eigen::VectorXd e) : entries(std::move(e)) {}

  static DualVector zero(std::size_t n) {
    return DualVector(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  }
  std::size_t size() const { return static_cast<std::size_t>(entries.size()); }
  double norm() const { return entries.norm(); }
};

DualVector operator+(const DualVector& a, const DualVector& b);
DualVector operator-(const DualVector& a, const DualVector& b);
DualVector operator*(double s, const DualVector& a);

/// Duality pairing <f, u> on the nodal basis.
double pair(const DualVector& f, const FeField& u);

/// Throws std::invalid_argument unless both fields live on the same mesh.
void require_same_mesh(const FeField& a, const FeField& b);
void require_mesh(const FeField& u, const MeshPtr& mesh);

/// Integral of |u|^p over the domain with the mesh's quadrature order.
double lp_norm_pow(const FeField& u, double p);
double lp_norm(const FeField& u, double p);
/// Integral of |grad u|^p.
double gradient_lp_norm_pow(const FeField& u, double p);
/// (||u||_p^p + ||grad u||_p^p)^(1/p).
double w1p_norm(const FeField& u, double p);
double sup_norm(const FeField& u);
double sup_distance(const FeField& a, const FeField& b);

}  // namespace robin_plap
