#include <numbers>

#include <benchmark/benchmark.h>

#include "sdwave/controllability.hpp"
#include "sdwave/dynamics.hpp"
#include "sdwave/semigroup.hpp"

namespace {

using namespace sdwave;
constexpr double pi = std::numbers::pi;

void BM_BlockExp(benchmark::State& state) {
  const double eta = state.range(0) == 0 ? 1.0 : (state.range(0) == 1 ? 2.0 : 3.0);
  double t = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(block_exp(256.0, t, eta, 1.0));
    t += 1e-9;
  }
}
BENCHMARK(BM_BlockExp)->Arg(0)->Arg(1)->Arg(2)->ArgName("regime");

void BM_GramianAssembly(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  SpectralBasis basis({pi, 0}, modes);
  LinearControlSystem system(basis, {1.0, 1.0, 0.3, 1.0}, ActuatorRegion{0.2 * pi, 0.8 * pi});
  const SteeringWindow window{1.0, 0.1, 64};
  for (auto _ : state) benchmark::DoNotOptimize(system.assemble_gramian(window));
}
BENCHMARK(BM_GramianAssembly)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

Simulator semilinear_simulator(int modes, MemoryQuadrature memory) {
  SpectralBasis basis({pi, 0}, modes);
  LinearControlSystem system(basis, {1.0, 1.0, 0.3, 1.0}, ActuatorRegion{0.2 * pi, 0.8 * pi});
  NonlinearitySpec nl{{ForcingTerm::Kind::saturated_linear, 0.5, 0.2},
                      {MemoryResponse::Kind::sin, 1.0}};
  MemoryKernel kernel{MemoryKernel::Kind::exponential, 1.0, 2.0};
  ImpulseSchedule impulses;
  impulses.times = {0.5};
  impulses.maps = {ImpulseMap{ImpulseMap::Kind::proportional, 0.0, 0.5, 1.0}};
  const double dt = 1e-3;
  auto history = HistorySegment::from_profile(0.3, dt, [modes](double s) {
    ModalState z = ModalState::zero(modes);
    z.w[0] = std::cos(s);
    return z;
  });
  return Simulator(system, nl, kernel, impulses, history, {dt, memory, 4});
}

void BM_FullRun(benchmark::State& state) {
  const auto memory = state.range(1) == 0 ? MemoryQuadrature::direct : MemoryQuadrature::recursive;
  const auto sim = semilinear_simulator(static_cast<int>(state.range(0)), memory);
  const ControlSignal control(ControlProfile{}, sim.system().modes());
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(control));
}
BENCHMARK(BM_FullRun)
    ->ArgsProduct({{16, 32}, {0, 1}})
    ->ArgNames({"modes", "recursive"})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
