#pragma once

#include <array>
#include <vector>

namespace robin_plap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One node of a quadrature rule mapped to a physical element or facet.
struct QuadraturePoint {
  Point point;
  double weight = 0.0;
};

using QuadratureRule = std::vector<QuadraturePoint>;

/// Quadrature on a reference simplex expressed in barycentric coordinates.
/// Weights are relative: they sum to 1, so the physical weight of a node is
/// `weight * measure(simplex)`. Unused barycentric slots are zero.
struct BarycentricRule {
  std::vector<std::array<double, 3>> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureOrder = 10;

/// Gauss-Legendre nodes and weights on [-1, 1] with `points` nodes.
void gauss_legendre(int points, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Relative rule exact for polynomials of total degree `order` on a
/// simplex of dimension 0 (a point), 1 (segment) or 2 (triangle).
/// Triangles use the collapsed (Duffy) tensor-product Gauss rule.
const BarycentricRule& reference_rule(int simplex_dim, int order);

/// Physical rule on the segment [a, b]; weights sum to |b - a|.
QuadratureRule segment_quadrature(Point a, Point b, int order);

/// Physical rule on the triangle (a, b, c); weights sum to its area.
QuadratureRule triangle_quadrature(Point a, Point b, Point c, int order);

}  // namespace robin_plap
