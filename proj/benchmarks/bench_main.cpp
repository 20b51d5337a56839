#include <memory>

#include <benchmark/benchmark.h>

#include "inflow/diagnostics.hpp"
#include "inflow/inflow_solver.hpp"
#include "inflow/wave_profiles.hpp"

using namespace inflow;

namespace {

const GasParams kGas{2.0, 1.0};

std::shared_ptr<const ShockProfile> profile() {
  static const auto p = std::make_shared<const ShockProfile>(build_shock_profile(1.0, 0.5, 2.0, kGas));
  return p;
}

SimState shock_state(std::size_t N) {
  const auto p = profile();
  const Grid grid = make_grid(80.0, N);
  std::vector<double> v(grid.nodes()), u(grid.nodes());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = p->V(grid.xi(j) - 40.0);
    u[j] = p->U(grid.xi(j) - 40.0);
  }
  return make_state(grid, v, u, p, 0.0, 40.0);
}

void BM_BuildProfile(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(build_shock_profile(1.0, 0.5, 2.0, kGas));
}
BENCHMARK(BM_BuildProfile)->Unit(benchmark::kMillisecond);

void BM_ProfileEval(benchmark::State& st) {
  const auto p = profile();
  double xi = -20.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(p->V(xi));
    xi = xi > 20.0 ? -20.0 : xi + 1e-3;
  }
}
BENCHMARK(BM_ProfileEval);

void BM_Residual(benchmark::State& st) {
  const SimState s = shock_state(std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spatial_residual(s));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Residual)->Arg(2000)->Arg(8000);

void BM_Step(benchmark::State& st) {
  const SimState s = shock_state(std::size_t(st.range(0)));
  const double dt = stable_dt(s, 0.4);
  for (auto _ : st) benchmark::DoNotOptimize(step(s, dt));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step)->Arg(2000)->Arg(8000);

void BM_Diagnostics(benchmark::State& st) {
  const SimState s = shock_state(std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(compute_record(s));
}
BENCHMARK(BM_Diagnostics)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
