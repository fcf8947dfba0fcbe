#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "robin_plap/quadrature.hpp"

namespace robin_plap {

/// A segment (1D) or triangle (2D). Only the first `dimension + 1` entries
/// of `nodes` are meaningful.
struct Element {
  std::array<int, 3> nodes{};
};

/// A boundary point (1D) or boundary edge (2D) with its outward unit normal.
struct BoundaryFacet {
  std::array<int, 2> nodes{};
  Point normal;
  int element = -1;
};

/// Conforming P1 mesh of an interval or of a structured rectangle.
///
/// Immutable after construction. Element basis gradients and volumes are
/// precomputed; every assembly routine reads them from here.
class Mesh {
 public:
  static constexpr int kDefaultQuadratureOrder = 4;

  /// Uniform mesh of (a, b) with n segments.
  static Mesh interval(double a, double b, int n,
                       int quadrature_order = kDefaultQuadratureOrder);

  /// (0, lx) x (0, ly) split into nx * ny cells, each cut into two
  /// triangles along the diagonal from lower-left to upper-right.
  static Mesh rectangle(double lx, double ly, int nx, int ny,
                        int quadrature_order = kDefaultQuadratureOrder);

  int dimension() const { return dimension_; }
  int quadrature_order() const { return quadrature_order_; }
  int nodes_per_element() const { return dimension_ + 1; }
  int nodes_per_facet() const { return dimension_; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_boundary_facets() const { return facets_.size(); }

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Element> elements() const { return elements_; }
  std::span<const BoundaryFacet> boundary_facets() const { return facets_; }

  double element_volume(std::size_t e) const { return volumes_[e]; }
  /// Length of a boundary edge in 2D; 1 for a boundary point (counting
  /// measure) in 1D.
  double facet_measure(std::size_t f) const { return facet_measures_[f]; }

  /// Constant gradients of the element's local P1 basis functions.
  std::span<const Point> basis_gradients(std::size_t e) const {
    return {gradients_[e].data(), static_cast<std::size_t>(dimension_ + 1)};
  }

  double domain_measure() const;
  double boundary_measure() const;
  /// Largest element diameter.
  double mesh_size() const;

  /// Physical quadrature on an element or a boundary facet.
  QuadratureRule element_quadrature(std::size_t e, int order) const;
  QuadratureRule facet_quadrature(std::size_t f, int order) const;

  /// Legacy-VTK ASCII unstructured grid (points and cells only).
  void write_vtk(std::ostream& out) const;

 private:
  Mesh() = default;
  void finalize();

  int dimension_ = 1;
  int quadrature_order_ = kDefaultQuadratureOrder;
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<BoundaryFacet> facets_;
  std::vector<double> volumes_;
  std::vector<double> facet_measures_;
  std::vector<std::array<Point, 3>> gradients_;
};

}  // namespace robin_plap
