#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robin_plap/expression.hpp"
#include "robin_plap/reactions.hpp"

namespace robin_plap::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"eigen", "solve", "resonance", "antimax", "subsuper", "third", "verify-all"};
  return c;
}

struct MeshBlock {
  std::string kind = "interval";  // interval | rect
  double a = 0.0, b = 1.0;
  int n = 64;
  double lx = 1.0, ly = 1.0;
  int nx = 8, ny = 8;
  int quadrature_order = 4;
};

struct OperatorBlock {
  std::array<double, 2> p{2.0, 2.0};
  std::array<double, 2> beta{1.0, 1.0};
  std::optional<double> eps_reg;
};

struct ReactionBlock {
  std::string name = "bump";  // bump | bump-coupled | zero | expression
  std::string f1, f2;
  Expression::Constants constants;
  std::array<BumpParameters, 2> shape{};
  /// Hypothesis constants for expression reactions.
  std::array<double, 2> k_plus{1.0, 1.0}, k_minus{-1.0, -1.0}, eta{0.0, 0.0}, theta{0.0, 0.0};
};

struct SolveBlock {
  std::string forcing = "1";
  double tol = 1e-10;
  int max_iters = 200;
};

struct AntimaxBlock {
  std::vector<double> delta_grid{0.5, 0.1, 0.01, 0.001};
  double below_factor = 0.5;
  double assert_below = 0.01;  ///< every delta <= this must give negative solutions
};

struct SubsuperBlock {
  int probe_count = 64;
  double picard_tol = 1e-10;
  int max_outer = 500;
  int max_halvings = 50;
};

struct ThirdBlock {
  std::vector<double> scales{2.0, 5.0, 10.0};
  std::optional<std::array<double, 2>> xi;
  bool continuation = true;
  double tol = 1e-10;
};

struct ScenarioConfig {
  std::string command;
  std::optional<MeshBlock> mesh;
  std::optional<OperatorBlock> op;
  std::optional<ReactionBlock> reaction;
  SolveBlock solve;
  AntimaxBlock antimax;
  SubsuperBlock subsuper;
  ThirdBlock third;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the first missing or invalid block.
  void validate() const;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace robin_plap::cli
