#include <benchmark/benchmark.h>

#include <vector>

#include "flatfloor/bodies.hpp"
#include "flatfloor/geometry.hpp"
#include "flatfloor/mc_engine.hpp"
#include "flatfloor/rng.hpp"
#include "flatfloor/samplers.hpp"

using namespace flatfloor;

namespace {

constexpr std::uint64_t kSamples = 200'000;

McOptions options(ExecPath path, int workers) {
  McOptions o;
  o.samples = kSamples;
  o.seed = 2024;
  o.path = path;
  o.workers = workers;
  return o;
}

void run_q(benchmark::State& state, const Body& body, int n, ExecPath path) {
  const McOptions o = options(path, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const EstimateResult r = estimate_Q(body, n, o);
    benchmark::DoNotOptimize(r.n_success);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSamples));
}

void BM_TriangleQ4_Serial(benchmark::State& state) {
  run_q(state, Body::subprism_2d(TopFunction::triangle()), 4, ExecPath::Serial);
}
void BM_TriangleQ4_Parallel(benchmark::State& state) {
  run_q(state, Body::subprism_2d(TopFunction::triangle()), 4, ExecPath::Parallel);
}
void BM_TetraQ3_Serial(benchmark::State& state) { run_q(state, Body::tetrahedron(), 3, ExecPath::Serial); }
void BM_TetraQ3_Parallel(benchmark::State& state) { run_q(state, Body::tetrahedron(), 3, ExecPath::Parallel); }
void BM_MountainQ3_Parallel(benchmark::State& state) {
  run_q(state, Body::mountain(Body::regular_polygon_floor(6), {0.0, 0.0, 1.0}), 3, ExecPath::Parallel);
}

void BM_Beta2_Parallel(benchmark::State& state) {
  const McOptions o = options(ExecPath::Parallel, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_beta2(3, o).n_success);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSamples));
}

void BM_FloorPredicate3D(benchmark::State& state) {
  const Body tetra = Body::tetrahedron();
  const std::vector<Point2> floor = tetra.floor();
  RngStream rng(7, 0);
  std::vector<Point3> pts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (auto& p : pts) p = sample_tetrahedron(tetra, rng);
    benchmark::DoNotOptimize(in_convex_position_with_floor_3d(pts, floor));
  }
}

}  // namespace

BENCHMARK(BM_TriangleQ4_Serial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TriangleQ4_Parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TetraQ3_Serial)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TetraQ3_Parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MountainQ3_Parallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Beta2_Parallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FloorPredicate3D)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
