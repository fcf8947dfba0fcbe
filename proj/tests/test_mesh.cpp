#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "robin_plap/mesh.hpp"
#include "robin_plap/quadrature.hpp"

using namespace robin_plap;

TEST(IntervalMesh, FourElementsOnUnitInterval) {
  const Mesh m = Mesh::interval(0, 1, 4);
  ASSERT_EQ(m.num_nodes(), 5u);
  EXPECT_EQ(m.num_elements(), 4u);
  const double expected[] = {0, 0.25, 0.5, 0.75, 1};
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(m.nodes()[k].x, expected[k]);
  ASSERT_EQ(m.num_boundary_facets(), 2u);
  EXPECT_DOUBLE_EQ(m.nodes()[m.boundary_facets()[0].nodes[0]].x, 0.0);
  EXPECT_DOUBLE_EQ(m.boundary_facets()[0].normal.x, -1.0);
  EXPECT_DOUBLE_EQ(m.nodes()[m.boundary_facets()[1].nodes[0]].x, 1.0);
  EXPECT_DOUBLE_EQ(m.boundary_facets()[1].normal.x, 1.0);
}

TEST(IntervalMesh, VolumesAndCountingMeasure) {
  const Mesh two = Mesh::interval(0, 1, 2);
  double vol = 0;
  for (std::size_t e = 0; e < two.num_elements(); ++e) vol += two.element_volume(e);
  EXPECT_NEAR(vol, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(Mesh::interval(-1, 1, 10).boundary_measure(), 2.0);
}

TEST(IntervalMesh, RejectsBadInput) {
  EXPECT_THROW(Mesh::interval(1, 1, 4), std::invalid_argument);
  EXPECT_THROW(Mesh::interval(2, 1, 4), std::invalid_argument);
  EXPECT_THROW(Mesh::interval(0, 1, 1), std::invalid_argument);
}

TEST(IntervalMesh, RefinementNests) {
  const Mesh coarse = Mesh::interval(-0.3, 2.1, 7);
  const Mesh fine = Mesh::interval(-0.3, 2.1, 14);
  for (std::size_t k = 0; k < coarse.num_nodes(); ++k) EXPECT_EQ(coarse.nodes()[k].x, fine.nodes()[2 * k].x);
}

TEST(RectMesh, UnitSquareCounts) {
  const Mesh m = Mesh::rectangle(1, 1, 2, 2);
  EXPECT_EQ(m.num_nodes(), 9u);
  EXPECT_EQ(m.num_elements(), 8u);
  EXPECT_EQ(m.num_boundary_facets(), 8u);
  EXPECT_NEAR(m.boundary_measure(), 4.0, 1e-12);
}

TEST(RectMesh, AreaAndPerimeter) {
  EXPECT_NEAR(Mesh::rectangle(2, 1, 4, 2).domain_measure(), 2.0, 1e-12);
  EXPECT_NEAR(Mesh::rectangle(1, 1, 8, 8).boundary_measure(), 4.0, 1e-12);
}

TEST(RectMesh, RejectsBadInput) {
  EXPECT_THROW(Mesh::rectangle(0, 1, 2, 2), std::invalid_argument);
  EXPECT_THROW(Mesh::rectangle(1, -1, 2, 2), std::invalid_argument);
  EXPECT_THROW(Mesh::rectangle(1, 1, 1, 2), std::invalid_argument);
}

TEST(RectMesh, StructuralInvariants) {
  const Mesh m = Mesh::rectangle(1.5, 0.7, 5, 3);
  double vol = 0;
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    EXPECT_GT(m.element_volume(e), 0.0);
    vol += m.element_volume(e);
  }
  EXPECT_NEAR(vol, 1.5 * 0.7, 1e-10 * 1.05);
  std::vector<int> owners(m.num_elements(), 0);
  for (const auto& f : m.boundary_facets()) {
    EXPECT_NEAR(std::hypot(f.normal.x, f.normal.y), 1.0, 1e-12);
    const auto& el = m.elements()[static_cast<std::size_t>(f.element)].nodes;
    for (int v : f.nodes) EXPECT_NE(std::find(el.begin(), el.end(), v), el.end());
    // Outward: normal points away from the element centroid.
    Point c{};
    for (int v : el) {
      c.x += m.nodes()[v].x / 3;
      c.y += m.nodes()[v].y / 3;
    }
    const Point a = m.nodes()[f.nodes[0]];
    EXPECT_GT((a.x - c.x) * f.normal.x + (a.y - c.y) * f.normal.y, 0.0);
  }
  EXPECT_NEAR(m.boundary_measure(), 2 * (1.5 + 0.7), 1e-12);
}

TEST(Quadrature, SegmentRules) {
  const auto mid = segment_quadrature({0, 0}, {1, 0}, 1);
  ASSERT_EQ(mid.size(), 1u);
  EXPECT_DOUBLE_EQ(mid[0].point.x, 0.5);
  EXPECT_DOUBLE_EQ(mid[0].weight, 1.0);
  const auto three = segment_quadrature({0, 0}, {1, 0}, 3);
  EXPECT_EQ(three.size(), 2u);
  double w = 0;
  for (const auto& q : three) w += q.weight;
  EXPECT_NEAR(w, 1.0, 1e-15);
}

TEST(Quadrature, ReferenceTriangleWeights) {
  const auto r = triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 2);
  double w = 0;
  for (const auto& q : r) w += q.weight;
  EXPECT_NEAR(w, 0.5, 1e-15);
}

TEST(Quadrature, RejectsUnsupportedOrder) {
  EXPECT_THROW(segment_quadrature({0, 0}, {1, 0}, 11), std::invalid_argument);
  EXPECT_THROW(segment_quadrature({0, 0}, {1, 0}, 0), std::invalid_argument);
  EXPECT_THROW(triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 11), std::invalid_argument);
}

TEST(Quadrature, ExactForPolynomialsUpToOrder) {
  auto fact = [](int n) { return std::tgamma(n + 1.0); };
  for (int order = 1; order <= kMaxQuadratureOrder; ++order) {
    for (int d = 0; d <= order; ++d) {
      double s = 0;
      for (const auto& q : segment_quadrature({0, 0}, {1, 0}, order)) s += q.weight * std::pow(q.point.x, d);
      EXPECT_NEAR(s, 1.0 / (d + 1), 1e-13) << "segment order " << order << " degree " << d;
      for (int a = 0; a <= d; ++a) {
        const int b = d - a;
        double t = 0;
        for (const auto& q : triangle_quadrature({0, 0}, {1, 0}, {0, 1}, order))
          t += q.weight * std::pow(q.point.x, a) * std::pow(q.point.y, b);
        EXPECT_NEAR(t, fact(a) * fact(b) / fact(a + b + 2), 1e-13) << "triangle order " << order;
      }
    }
  }
}

TEST(Quadrature, PartitionOfUnityAndVolume) {
  for (const Mesh& m : {Mesh::interval(0, 2, 9), Mesh::rectangle(1, 2, 3, 4)}) {
    const auto& ref = reference_rule(m.dimension(), 4);
    for (const auto& c : ref.coords) EXPECT_NEAR(c[0] + c[1] + c[2], 1.0, 1e-12);
    double total = 0;
    for (std::size_t e = 0; e < m.num_elements(); ++e)
      for (const auto& q : m.element_quadrature(e, 4)) total += q.weight;
    EXPECT_NEAR(total, m.domain_measure(), 1e-10 * m.domain_measure());
  }
}

TEST(Mesh, VtkDump) {
  std::ostringstream out;
  Mesh::rectangle(1, 1, 2, 2).write_vtk(out);
  const std::string s = out.str();
  EXPECT_NE(s.find("POINTS 9"), std::string::npos);
  EXPECT_NE(s.find("CELLS 8"), std::string::npos);
}
