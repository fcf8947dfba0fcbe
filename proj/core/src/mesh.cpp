#include "robin_plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace robin_plap {

namespace {

void check_quadrature_order(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw std::invalid_argument("mesh quadrature order out of range: " +
                                std::to_string(order));
  }
}

}  // namespace

Mesh Mesh::interval(double a, double b, int n, int quadrature_order) {
  if (!(a < b)) throw std::invalid_argument("interval mesh requires a < b");
  if (n < 2) throw std::invalid_argument("interval mesh requires n >= 2");
  check_quadrature_order(quadrature_order);

  Mesh mesh;
  mesh.dimension_ = 1;
  mesh.quadrature_order_ = quadrature_order;
  mesh.nodes_.resize(n + 1);
  const double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) {
    mesh.nodes_[i] = {i == n ? b : a + i * h, 0.0};
  }
  mesh.elements_.resize(n);
  for (int e = 0; e < n; ++e) mesh.elements_[e].nodes = {e, e + 1, 0};
  mesh.facets_.push_back({{0, 0}, {-1.0, 0.0}, 0});
  mesh.facets_.push_back({{n, 0}, {1.0, 0.0}, n - 1});
  mesh.finalize();
  return mesh;
}

Mesh Mesh::rectangle(double lx, double ly, int nx, int ny,
                     int quadrature_order) {
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw std::invalid_argument("rectangle mesh requires positive lengths");
  }
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("rectangle mesh requires nx, ny >= 2");
  }
  check_quadrature_order(quadrature_order);

  Mesh mesh;
  mesh.dimension_ = 2;
  mesh.quadrature_order_ = quadrature_order;
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.nodes_.resize(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? lx : lx * i / nx;
      const double y = j == ny ? ly : ly * j / ny;
      mesh.nodes_[id(i, j)] = {x, y};
    }
  }
  // Cell (i, j): lower triangle (ll, lr, ur), upper triangle (ll, ur, ul).
  const auto lower = [nx](int i, int j) { return 2 * (j * nx + i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j);
      const int ur = id(i + 1, j + 1), ul = id(i, j + 1);
      mesh.elements_.push_back({{ll, lr, ur}});
      mesh.elements_.push_back({{ll, ur, ul}});
    }
  }
  for (int i = 0; i < nx; ++i) {
    mesh.facets_.push_back({{id(i, 0), id(i + 1, 0)}, {0.0, -1.0}, lower(i, 0)});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.facets_.push_back(
        {{id(nx, j), id(nx, j + 1)}, {1.0, 0.0}, lower(nx - 1, j)});
  }
  for (int i = nx - 1; i >= 0; --i) {
    mesh.facets_.push_back(
        {{id(i + 1, ny), id(i, ny)}, {0.0, 1.0}, lower(i, ny - 1) + 1});
  }
  for (int j = ny - 1; j >= 0; --j) {
    mesh.facets_.push_back({{id(0, j + 1), id(0, j)}, {-1.0, 0.0}, lower(0, j) + 1});
  }
  mesh.finalize();
  return mesh;
}

void Mesh::finalize() {
  volumes_.resize(elements_.size());
  gradients_.resize(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& v = elements_[e].nodes;
    if (dimension_ == 1) {
      const double h = nodes_[v[1]].x - nodes_[v[0]].x;
      volumes_[e] = h;
      gradients_[e] = {Point{-1.0 / h, 0.0}, Point{1.0 / h, 0.0}, Point{}};
    } else {
      const Point a = nodes_[v[0]], b = nodes_[v[1]], c = nodes_[v[2]];
      const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
      if (!(det > 0.0)) throw std::logic_error("mesh: non-positive triangle");
      volumes_[e] = 0.5 * det;
      // grad lambda_k = rot(opposite edge) / det
      gradients_[e] = {Point{(b.y - c.y) / det, (c.x - b.x) / det},
                       Point{(c.y - a.y) / det, (a.x - c.x) / det},
                       Point{(a.y - b.y) / det, (b.x - a.x) / det}};
    }
  }
  facet_measures_.resize(facets_.size());
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (dimension_ == 1) {
      facet_measures_[f] = 1.0;
    } else {
      const Point a = nodes_[facets_[f].nodes[0]];
      const Point b = nodes_[facets_[f].nodes[1]];
      facet_measures_[f] = std::hypot(b.x - a.x, b.y - a.y);
    }
  }
}

double Mesh::domain_measure() const {
  double total = 0.0;
  for (double v : volumes_) total += v;
  return total;
}

double Mesh::boundary_measure() const {
  double total = 0.0;
  for (double m : facet_measures_) total += m;
  return total;
}

double Mesh::mesh_size() const {
  double h = 0.0;
  for (const auto& el : elements_) {
    for (int i = 0; i <= dimension_; ++i) {
      for (int j = i + 1; j <= dimension_; ++j) {
        const Point a = nodes_[el.nodes[i]], b = nodes_[el.nodes[j]];
        h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
      }
    }
  }
  return h;
}

QuadratureRule Mesh::element_quadrature(std::size_t e, int order) const {
  const auto& v = elements_.at(e).nodes;
  if (dimension_ == 1) return segment_quadrature(nodes_[v[0]], nodes_[v[1]], order);
  return triangle_quadrature(nodes_[v[0]], nodes_[v[1]], nodes_[v[2]], order);
}

QuadratureRule Mesh::facet_quadrature(std::size_t f, int order) const {
  const auto& facet = facets_.at(f);
  if (dimension_ == 1) {
    reference_rule(0, order);  // validates the order
    return {{nodes_[facet.nodes[0]], 1.0}};
  }
  return segment_quadrature(nodes_[facet.nodes[0]], nodes_[facet.nodes[1]], order);
}

void Mesh::write_vtk(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\nrobin-plap mesh\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nodes_.size() << " double\n";
  for (const auto& p : nodes_) out << p.x << ' ' << p.y << " 0\n";
  const int per = nodes_per_element();
  out << "CELLS " << elements_.size() << ' ' << elements_.size() * (per + 1) << '\n';
  for (const auto& el : elements_) {
    out << per;
    for (int i = 0; i < per; ++i) out << ' ' << el.nodes[i];
    out << '\n';
  }
  out << "CELL_TYPES " << elements_.size() << '\n';
  for (std::size_t e = 0; e < elements_.size(); ++e) out << (per == 2 ? 3 : 5) << '\n';
  out.precision(precision);
}

}  // namespace robin_plap
