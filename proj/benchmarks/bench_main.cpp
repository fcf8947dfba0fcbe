#include <benchmark/benchmark.h>

#include <cmath>

#include "robin_plap/eigen.hpp"
#include "robin_plap/subsuper.hpp"

using namespace robin_plap;

namespace {

MeshPtr mesh_for(int64_t n, bool two_d) {
  const int k = static_cast<int>(n);
  return two_d ? share(Mesh::rectangle(1, 1, k, k)) : share(Mesh::interval(0, 1, k));
}

FeField smooth_field(const MeshPtr& m) {
  return FeField::interpolate(m, [](Point x) { return 1 + std::sin(3 * x.x) * std::cos(2 * x.y) + x.x; });
}

void BM_ApplyAp(benchmark::State& state) {
  const auto m = mesh_for(state.range(0), state.range(1) != 0);
  const auto spec = RobinOperatorSpec::make(m, 3.0, 1.0);
  const auto u = smooth_field(m);
  for (auto _ : state) benchmark::DoNotOptimize(apply_Ap(spec, u));
  state.counters["nodes"] = static_cast<double>(m->num_nodes());
}
BENCHMARK(BM_ApplyAp)->Args({1024, 0})->Args({16384, 0})->Args({32, 1})->Args({128, 1});

void BM_Jacobian(benchmark::State& state) {
  const auto m = mesh_for(state.range(0), state.range(1) != 0);
  const auto spec = RobinOperatorSpec::make(m, 3.0, 1.0);
  const auto u = smooth_field(m);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(spec, u));
}
BENCHMARK(BM_Jacobian)->Args({1024, 0})->Args({16384, 0})->Args({32, 1})->Args({128, 1});

void BM_SolveAp(benchmark::State& state) {
  const auto m = mesh_for(state.range(0), state.range(2) != 0);
  const double p = static_cast<double>(state.range(1)) / 2.0;
  const auto spec = RobinOperatorSpec::make(m, p, 1.0);
  const auto f = load(spec, [](Point) { return 1.0; });
  for (auto _ : state) benchmark::DoNotOptimize(solve_Ap(spec, f));
}
// Second argument is 2p.
BENCHMARK(BM_SolveAp)->Args({256, 4, 0})->Args({256, 6, 0})->Args({4096, 6, 0})->Args({32, 6, 1})
    ->Unit(benchmark::kMillisecond);

void BM_FirstEigenpair(benchmark::State& state) {
  const auto m = mesh_for(state.range(0), state.range(2) != 0);
  const double p = static_cast<double>(state.range(1)) / 2.0;
  const auto spec = RobinOperatorSpec::make(m, p, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(first_eigenpair(spec));
}
BENCHMARK(BM_FirstEigenpair)->Args({256, 4, 0})->Args({256, 6, 0})->Args({32, 6, 1})->Unit(benchmark::kMillisecond);

void BM_VerifySubsuper(benchmark::State& state) {
  const auto m = mesh_for(state.range(0), false);
  SystemSpec sys;
  sys.ops = {RobinOperatorSpec::make(m, 2, 1), RobinOperatorSpec::make(m, 3, 1)};
  sys.reactions = make_bump_reaction({BumpParameters{}, BumpParameters{}}, sys.exponents());
  const std::array<EigenPair, 2> eig{first_eigenpair(sys.ops[0]), first_eigenpair(sys.ops[1])};
  const auto region = positive_region(sys, eig, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(verify_subsuper(sys, region));
}
BENCHMARK(BM_VerifySubsuper)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
