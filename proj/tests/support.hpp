#pragma once

#include <random>

#include "robin_plap/fe_field.hpp"

namespace test_support {

inline robin_plap::FeField random_field(const robin_plap::MeshPtr& mesh, std::mt19937_64& rng, double lo = -1.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd c(static_cast<Eigen::Index>(mesh->num_nodes()));
  for (auto& v : c) v = d(rng);
  return robin_plap::FeField(mesh, c);
}

inline robin_plap::MeshPtr unit_interval(int n) { return robin_plap::share(robin_plap::Mesh::interval(0.0, 1.0, n)); }

}  // namespace test_support
