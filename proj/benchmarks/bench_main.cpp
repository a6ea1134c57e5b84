// Micro-benchmarks for the hot paths: the quasi-static cycle (inner loop of
// every sweep/optimize row), the failure-envelope raster and the pull-in
// bisection. Run with --benchmark_min_time=... as usual.

#include <benchmark/benchmark.h>

#include "deg/cycle.hpp"
#include "deg/failure.hpp"
#include "deg/material.hpp"
#include "deg/membrane.hpp"
#include "deg/optimizer.hpp"

namespace {

deg::MaterialParams bench_material() {
  deg::MaterialParams mat;
  mat.yeoh0 = {1.8e4, -150.0, 2.0};
  mat.prony = {{0.5, 0.8}, {0.25, 8.0}};
  mat.rel_permittivity = 4.7;
  mat.density = 960.0;
  mat.bulk_resistivity = 3e14;
  mat.max_area_expansion = 36.0;
  return mat;
}

deg::MembraneGeometry bench_geometry() {
  deg::MembraneGeometry geom;
  geom.x10 = 2.5e-3;
  geom.x20 = 2.5e-3;
  geom.x30 = 1.0e-3;
  geom.mass = 960.0 * geom.x10 * geom.x20 * geom.x30;
  return geom;
}

void bm_quasistatic_cycle(benchmark::State& state) {
  const auto mat = bench_material();
  const auto geom = bench_geometry();
  const deg::BreakdownLaw law{8e3, {}};
  deg::CycleSpec spec;
  spec.design = {4.0, 1.5, 0.0};
  spec.mode = deg::CycleMode::constant_voltage;
  spec.drive = deg::StretchDrive::mechanical;
  spec.poling_voltage = 2000.0;
  spec.phase_durations = {1.0, 30.0, 1.0, 2.0, 1.0};
  spec.include_viscoelasticity = true;
  for (auto _ : state) {
    const auto r = deg::run_quasistatic_cycle(mat, geom, spec, law);
    benchmark::DoNotOptimize(r.net);
  }
}
BENCHMARK(bm_quasistatic_cycle);

void bm_envelope_grid(benchmark::State& state) {
  const auto mat = bench_material();
  const auto geom = bench_geometry();
  const deg::BreakdownLaw law{};
  const deg::EnvelopeRanges ranges{1.0, 6.0, 1.0, 6.0};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto env = deg::envelope_grid(mat, geom, ranges, n, n, law);
    benchmark::DoNotOptimize(env.cells.size());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_envelope_grid)->Arg(17)->Arg(33)->Arg(65)->Complexity();

void bm_pullin_field(benchmark::State& state) {
  auto mat = bench_material();
  mat.prony.clear();
  const auto geom = bench_geometry();
  for (auto _ : state) {
    const double e = deg::pullin_field(mat, geom, 1.0, 1e9);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(bm_pullin_field);

void bm_sweep_prestrain(benchmark::State& state) {
  const auto mat = bench_material();
  const auto geom = bench_geometry();
  const deg::BreakdownLaw law{};
  deg::SweepOptions opt;
  opt.lam_p_min = 2.0;
  opt.lam_p_max = 6.0;
  opt.resolution = 17;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto res = deg::sweep_prestrain(mat, geom, opt, law);
    benchmark::DoNotOptimize(res.rows.size());
  }
}
BENCHMARK(bm_sweep_prestrain)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
