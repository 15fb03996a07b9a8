// Microbenchmarks for the hot paths: cone projections, boundary distance,
// monotone conjugation and a full variational solve.

#include <benchmark/benchmark.h>

#include "hjcone/cones.hpp"
#include "hjcone/registry.hpp"
#include "hjcone/sampling.hpp"
#include "hjcone/solvers.hpp"

using namespace hjcone;

namespace {

std::vector<Point> sample_points(const ConeDescriptor& cone, int n,
                                 std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    pts.push_back(random_gaussian(rng, cone.ambient_dim()));
  return pts;
}

void BM_ProjectOrthant8(benchmark::State& state) {
  const ConeDescriptor cone = ConeDescriptor::orthant(8);
  const auto pts = sample_points(cone, 64, 1);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(cone, pts[k++ % pts.size()]));
  }
}
BENCHMARK(BM_ProjectOrthant8);

void BM_ProjectPsd(benchmark::State& state) {
  const ConeDescriptor cone = ConeDescriptor::psd(static_cast<int>(state.range(0)));
  const auto pts = sample_points(cone, 64, 2);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(cone, pts[k++ % pts.size()]));
  }
}
BENCHMARK(BM_ProjectPsd)->Arg(2)->Arg(4);

void BM_BoundaryDistancePsd3(benchmark::State& state) {
  const ConeDescriptor cone = ConeDescriptor::psd(3);
  Rng rng(3);
  std::vector<Point> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(random_cone_point(cone, rng, 2.0));
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary_distance(cone, pts[k++ % pts.size()]));
  }
}
BENCHMARK(BM_BoundaryDistancePsd3);

void BM_MonotoneConjugate(benchmark::State& state) {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
  OptimizerConfig opt;
  opt.seed = 4;
  Rng rng(4);
  const auto ys = sample_points(cone, 16, 5);
  size_t k = 0;
  for (auto _ : state) {
    const Point& y = ys[k++ % ys.size()];
    benchmark::DoNotOptimize(
        monotone_conjugate(H.evaluator, cone, y, 8.0, opt));
  }
}
BENCHMARK(BM_MonotoneConjugate);

void BM_HopfLaxPoint(benchmark::State& state) {
  const ConeDescriptor cone = ConeDescriptor::orthant(1);
  const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
  EvaluatorParams ep;
  ep.vectors["p"] = {1.0};
  const InitialConditionSpec psi = make_initial("linear", ep, cone);
  OptimizerConfig opt;
  opt.seed = 6;
  const VariationalSolver solver(H, psi, cone, opt);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.hopf_lax(1.0, {0.5}));
  }
}
BENCHMARK(BM_HopfLaxPoint);

}  // namespace

BENCHMARK_MAIN();
