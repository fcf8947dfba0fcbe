#pragma once

#include <functional>

#include <Eigen/SparseCore>

#include "robin_plap/fe_field.hpp"

namespace robin_plap {

/// Compressed row storage; assembled by element scatter-add.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Everything that defines the Robin p-Laplacian A_p and its energy:
///
///   <A_p(u), psi> = int |grad u|^{p-2} grad u . grad psi dx
///                 + beta int_{boundary} |u|^{p-2} u psi dsigma
///
/// `grad_regularization` only enters the Jacobian, where |grad u|^{p-2} is
/// replaced by (|grad u|^2 + eps)^{(p-2)/2}.
struct RobinOperatorSpec {
  static constexpr double kDefaultRegularization = 1e-10;

  double p = 2.0;
  double beta = 1.0;
  MeshPtr mesh;
  double grad_regularization = 0.0;

  /// Operator with the default regularization (zero at p = 2).
  static RobinOperatorSpec make(MeshPtr mesh, double p, double beta);

  /// Throws std::invalid_argument on p <= 1, beta <= 0, eps < 0, a null
  /// mesh, or eps == 0 with p != 2.
  void validate() const;
};

/// sign(s) |s|^e with 0 mapped to 0.
double signed_pow(double s, double e);

/// E_p(u) = int |grad u|^p dx + beta int_{boundary} |u|^p dsigma.
double energy(const RobinOperatorSpec& spec, const FeField& u);

/// Interior part B_p(u) of the splitting A_p = B_p + beta C_p.
DualVector apply_interior(const RobinOperatorSpec& spec, const FeField& u);
/// Boundary part beta C_p(u).
DualVector apply_boundary(const RobinOperatorSpec& spec, const FeField& u);
DualVector apply_Ap(const RobinOperatorSpec& spec, const FeField& u);

/// apply_Ap(u) - rhs.
DualVector residual(const RobinOperatorSpec& spec, const FeField& u, const DualVector& rhs);

/// Symmetric positive semidefinite linearization of A_p at u. At p = 2 this
/// is exactly K + beta M_boundary.
SparseMatrix jacobian(const RobinOperatorSpec& spec, const FeField& u);

/// Entries int g psi_j dx.
DualVector load(const RobinOperatorSpec& spec, const std::function<double(Point)>& g);
DualVector load(const Mesh& mesh, const std::function<double(Point)>& g);

/// Pointwise integrand g(x, u_1(x), u_2(x)) evaluated at quadrature points.
using FieldIntegrand = std::function<double(const Point&, double, double)>;

/// Entries int g(x, u1, u2) psi_j dx with the given quadrature order.
DualVector assemble_field_load(const Mesh& mesh, const Eigen::VectorXd& u1,
                               const Eigen::VectorXd& u2, const FieldIntegrand& g,
                               int order);

/// Entries int w(x, u1, u2) psi_k psi_l dx.
SparseMatrix assemble_field_mass(const Mesh& mesh, const Eigen::VectorXd& u1,
                                 const Eigen::VectorXd& u2, const FieldIntegrand& w,
                                 int order);

/// Entries int |u|^{p-2} u psi_j dx: the gradient of ||u||_p^p / p.
DualVector lp_duality(const FeField& u, double p);
/// (p-1) int (u^2 + eps)^{(p-2)/2} psi_k psi_l dx.
SparseMatrix lp_duality_jacobian(const FeField& u, double p, double eps);

SparseMatrix stiffness_matrix(const Mesh& mesh);
SparseMatrix mass_matrix(const Mesh& mesh);
SparseMatrix boundary_mass_matrix(const Mesh& mesh);

}  // namespace robin_plap
