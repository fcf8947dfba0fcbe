#include "robin_plap/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robin_plap {

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw std::invalid_argument("quadrature order must lie in [1, " +
                                std::to_string(kMaxQuadratureOrder) +
                                "], got " + std::to_string(order));
  }
}

// Points needed for a 1D Gauss rule exact up to degree `degree`.
int gauss_points_for(int degree) { return degree / 2 + 1; }

BarycentricRule build_rule(int simplex_dim, int order) {
  BarycentricRule rule;
  if (simplex_dim == 0) {
    rule.coords.push_back({1.0, 0.0, 0.0});
    rule.weights.push_back(1.0);
    return rule;
  }
  std::vector<double> xs, ws;
  if (simplex_dim == 1) {
    gauss_legendre(gauss_points_for(order), xs, ws);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double t = 0.5 * (xs[i] + 1.0);
      rule.coords.push_back({1.0 - t, t, 0.0});
      rule.weights.push_back(0.5 * ws[i]);
    }
    return rule;
  }
  if (simplex_dim == 2) {
    // x = a, y = (1 - a) b on [0,1]^2; the Jacobian (1 - a) raises the
    // degree in a by one.
    const int n = gauss_points_for(order + 1);
    gauss_legendre(n, xs, ws);
    for (int i = 0; i < n; ++i) {
      const double a = 0.5 * (xs[i] + 1.0);
      const double wa = 0.5 * ws[i];
      for (int j = 0; j < n; ++j) {
        const double b = 0.5 * (xs[j] + 1.0);
        const double wb = 0.5 * ws[j];
        const double x = a;
        const double y = (1.0 - a) * b;
        rule.coords.push_back({1.0 - x - y, x, y});
        // Reference area is 1/2; relative weights sum to one.
        rule.weights.push_back(2.0 * wa * wb * (1.0 - a));
      }
    }
    return rule;
  }
  throw std::invalid_argument("unsupported simplex dimension " +
                              std::to_string(simplex_dim));
}

}  // namespace

void gauss_legendre(int points, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: points < 1");
  nodes.assign(points, 0.0);
  weights.assign(points, 0.0);
  if (points == 1) {
    weights[0] = 2.0;
    return;
  }
  // Legendre P_n(x) and its derivative by the three-term recurrence.
  auto legendre = [points](double x, double& derivative) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    derivative = points * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[points - 1 - i] = x;
    weights[i] = w;
    weights[points - 1 - i] = w;
  }
  if (points % 2 == 1) nodes[points / 2] = 0.0;
}

const BarycentricRule& reference_rule(int simplex_dim, int order) {
  check_order(order);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, BarycentricRule> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(simplex_dim, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, build_rule(simplex_dim, order)).first;
  }
  return it->second;
}

QuadratureRule segment_quadrature(Point a, Point b, int order) {
  const auto& ref = reference_rule(1, order);
  const double length = std::hypot(b.x - a.x, b.y - a.y);
  QuadratureRule rule;
  rule.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    const auto& l = ref.coords[q];
    rule.push_back({{l[0] * a.x + l[1] * b.x, l[0] * a.y + l[1] * b.y},
                    ref.weights[q] * length});
  }
  return rule;
}

QuadratureRule triangle_quadrature(Point a, Point b, Point c, int order) {
  const auto& ref = reference_rule(2, order);
  const double area =
      0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  QuadratureRule rule;
  rule.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    const auto& l = ref.coords[q];
    rule.push_back({{l[0] * a.x + l[1] * b.x + l[2] * c.x,
                     l[0] * a.y + l[1] * b.y + l[2] * c.y},
                    ref.weights[q] * area});
  }
  return rule;
}

}  // namespace robin_plap
