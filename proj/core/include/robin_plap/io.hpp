#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "robin_plap/homotopy.hpp"

namespace robin_plap {

/// Shortest round-trip representation ("%.17g").
std::string format_double(double v);

/// Header x,u1,u2 in 1D and x,y,u1,u2 in 2D; one row per node.
void write_solution_csv(std::ostream& out, const FieldPair& u);

/// Header t,norm.
void write_branch_csv(std::ostream& out, const Branch& branch);

/// Long format, one row per (candidate, node):
/// candidate,x[,y],u1,u2,inside_hull,residual
void write_candidates_csv(std::ostream& out, const std::vector<Candidate>& candidates);

/// Legacy VTK mesh with point data u1 and u2.
void write_solution_vtk(std::ostream& out, const FieldPair& u);

}  // namespace robin_plap
