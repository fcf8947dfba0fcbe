#include "robin_plap/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace robin_plap {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_coords(std::ostream& out, const Point& x, int dim) {
  out << format_double(x.x);
  if (dim == 2) out << ',' << format_double(x.y);
}

}  // namespace

void write_solution_csv(std::ostream& out, const FieldPair& u) {
  require_same_mesh(u[0], u[1]);
  const Mesh& mesh = *u[0].mesh;
  const int dim = mesh.dimension();
  out << (dim == 1 ? "x,u1,u2\n" : "x,y,u1,u2\n");
  const auto nodes = mesh.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    write_coords(out, nodes[k], dim);
    out << ',' << format_double(u[0].coeffs[i]) << ',' << format_double(u[1].coeffs[i]) << '\n';
  }
}

void write_branch_csv(std::ostream& out, const Branch& branch) {
  out << "t,norm\n";
  for (std::size_t k = 0; k < branch.t.size(); ++k)
    out << format_double(branch.t[k]) << ',' << format_double(branch.norms[k]) << '\n';
}

void write_candidates_csv(std::ostream& out, const std::vector<Candidate>& candidates) {
  int dim = 1;
  if (!candidates.empty()) dim = candidates.front().u[0].mesh->dimension();
  out << (dim == 1 ? "candidate,x,u1,u2,inside_hull,residual\n" : "candidate,x,y,u1,u2,inside_hull,residual\n");
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& cand = candidates[c];
    const auto nodes = cand.u[0].mesh->nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      out << c << ',';
      write_coords(out, nodes[k], dim);
      out << ',' << format_double(cand.u[0].coeffs[i]) << ',' << format_double(cand.u[1].coeffs[i]) << ','
          << (cand.inside_hull ? 1 : 0) << ',' << format_double(cand.residual_norm) << '\n';
    }
  }
}

void write_solution_vtk(std::ostream& out, const FieldPair& u) {
  require_same_mesh(u[0], u[1]);
  const Mesh& mesh = *u[0].mesh;
  mesh.write_vtk(out);
  out << "POINT_DATA " << mesh.num_nodes() << '\n';
  for (int i = 0; i < 2; ++i) {
    out << "SCALARS u" << i + 1 << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index k = 0; k < u[i].coeffs.size(); ++k) out << format_double(u[i].coeffs[k]) << '\n';
  }
}

}  // namespace robin_plap
