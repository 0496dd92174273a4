#include <benchmark/benchmark.h>

#include <cmath>

#include "curveflow/harness.hpp"
#include "curveflow/metrics.hpp"
#include "curveflow/scheme.hpp"
#include "curveflow/shapes.hpp"
#include "curveflow/solver.hpp"

namespace {

using namespace curveflow;

PolygonalCurve ellipse(std::size_t n) {
  ShapeSpec spec;
  spec.kind = ShapeSpec::Ellipse{3.0, 1.0};
  spec.n_nodes = n;
  return generate(spec);
}

void BM_Assemble(benchmark::State& state) {
  const auto curve = ellipse(static_cast<std::size_t>(state.range(0)));
  const auto kappa = project_curvature(curve);
  FlowParams params;
  params.tau = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_newton(curve, kappa, curve, params));
  }
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(256)->Arg(1024);

void BM_NewtonStep(benchmark::State& state) {
  const auto curve = ellipse(static_cast<std::size_t>(state.range(0)));
  const auto kappa = project_curvature(curve);
  FlowParams params;
  params.tau = 1e-4;
  SolverConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton_advance(curve, kappa, params, config));
  }
}
BENCHMARK(BM_NewtonStep)->Arg(64)->Arg(256)->Arg(1024);

void BM_ManifoldDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = ellipse(n);
  ShapeSpec spec;
  spec.kind = ShapeSpec::Circle{1.7};
  spec.n_nodes = n;
  const auto b = generate(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(manifold_distance(a, b));
  }
}
BENCHMARK(BM_ManifoldDistance)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
