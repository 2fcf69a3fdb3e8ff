#include <benchmark/benchmark.h>

#include "haptofv/monitors.hpp"
#include "haptofv/operators.hpp"
#include "haptofv/stepper.hpp"

namespace {

using namespace haptofv;

State demo_state(const Grid& g) {
  State s(g, 0.0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.index(ix, iy);
      const double x = g.x_center(ix) / g.lx;
      s.c1[i] = 0.2 + 0.1 * x;
      s.c2[i] = 0.05;
      s.h[i] = 0.4 + 0.3 * x * x;
      s.tau[i] = 0.3 + 0.2 * x;
    }
  }
  return s;
}

void bm_laplacian_1d(benchmark::State& state) {
  const Grid g = Grid::line(static_cast<int>(state.range(0)), 1.0);
  const State s = demo_state(g);
  Field out(g);
  for (auto _ : state) {
    laplacian_apply_into(s.h, out);
    benchmark::DoNotOptimize(out.v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cells()));
}
BENCHMARK(bm_laplacian_1d)->Arg(256)->Arg(4096);

void bm_laplacian_2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::rect(n, n, 1.0, 1.0);
  const State s = demo_state(g);
  Field out(g);
  for (auto _ : state) {
    laplacian_apply_into(s.h, out);
    benchmark::DoNotOptimize(out.v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cells()));
}
BENCHMARK(bm_laplacian_2d)->Arg(64)->Arg(256);

void bm_upwind_divergence(benchmark::State& state) {
  const Grid g = Grid::line(static_cast<int>(state.range(0)), 1.0);
  const State s = demo_state(g);
  const FaceFluxes vel = face_gradient(s.h);
  Field out(g);
  for (auto _ : state) {
    upwind_divergence_into(s.c1, vel, out);
    benchmark::DoNotOptimize(out.v.data());
  }
}
BENCHMARK(bm_upwind_divergence)->Arg(4096);

void bm_step_2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::rect(n, n, 1.0, 1.0);
  const ModelParams p;
  const Regularization reg{0.05, 4};
  State s = demo_state(g);
  StepWorkspace ws(g);
  for (auto _ : state) {
    step_in_place(p, reg, s, 1e-4, ws);
    benchmark::DoNotOptimize(s.c1.v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cells()));
}
BENCHMARK(bm_step_2d)->Arg(64);

void bm_entropy(benchmark::State& state) {
  const Grid g = Grid::line(static_cast<int>(state.range(0)), 1.0);
  const ModelParams p;
  const State s = demo_state(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_functional(p, s, 2.0, 1e-12));
  }
}
BENCHMARK(bm_entropy)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
