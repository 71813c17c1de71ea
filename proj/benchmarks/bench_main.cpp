#include <benchmark/benchmark.h>

#include <vector>

#include "ichain/control.hpp"
#include "ichain/differentiator.hpp"
#include "ichain/ode.hpp"
#include "ichain/signal.hpp"

using namespace ichain;

namespace {

void BM_sig(benchmark::State& state) {
  double y = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sig(y, 0.6));
    y = -y;
  }
}
BENCHMARK(BM_sig);

void BM_chain_linear_rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gains = geometric_gains(1.0, 2.0, n);
  std::vector<double> x(static_cast<std::size_t>(n), 0.3);
  std::vector<double> dx(x.size());
  for (auto _ : state) {
    chain_linear_rhs(gains, 0.01, x, 0.7, dx);
    benchmark::DoNotOptimize(dx.data());
  }
}
BENCHMARK(BM_chain_linear_rhs)->Arg(2)->Arg(3)->Arg(6);

void BM_chain_nonlinear_rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gains = geometric_gains(1.0, 2.0, n);
  const auto alphas = alpha_schedule(0.5, n);
  std::vector<double> x(static_cast<std::size_t>(n), 0.3);
  std::vector<double> dx(x.size());
  for (auto _ : state) {
    chain_nonlinear_rhs(gains, alphas, 0.01, x, 0.7, dx);
    benchmark::DoNotOptimize(dx.data());
  }
}
BENCHMARK(BM_chain_nonlinear_rhs)->Arg(3)->Arg(6);

void BM_highgain_rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gains = geometric_gains(1.0, 2.0, n);
  std::vector<double> w(static_cast<std::size_t>(n), 0.3);
  std::vector<double> dw(w.size());
  for (auto _ : state) {
    highgain_rhs(gains, 0.01, w, 0.7, dw);
    benchmark::DoNotOptimize(dw.data());
  }
}
BENCHMARK(BM_highgain_rhs)->Arg(3)->Arg(6);

void BM_rk4_step_estimator(benchmark::State& state) {
  DifferentiatorSpec spec(DiffVariant::IntegralChainLinear, {10.0, 10.0, 10.0}, 0.01);
  std::vector<double> x{0.1, 0.0, 0.0};
  OdeStepper stepper(3);
  double t = 0.0;
  for (auto _ : state) {
    stepper.step(
        [&](double, std::span<const double> s, std::span<double> ds) {
          spec.rhs(s, 0.5, ds);
        },
        x, t, 1e-4, OdeMethod::Rk4);
    t += 1e-4;
  }
  benchmark::DoNotOptimize(x.data());
}
BENCHMARK(BM_rk4_step_estimator);

void BM_simulate_estimator_1s(benchmark::State& state) {
  DifferentiatorSpec spec(DiffVariant::IntegralChainLinear, {10.0, 10.0, 10.0}, 0.01);
  const auto signal = AnalyticSignal::sinusoid(1.0, 1.0, 0.0);
  const SimConfig cfg{1.0, 1e-4, OdeMethod::Rk4, 100};
  const std::vector<double> init{0.0, 0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_estimator(spec, signal, NoiseSpec::uniform_bounded(0.05, 42), init, cfg));
  }
}
BENCHMARK(BM_simulate_estimator_1s)->Unit(benchmark::kMillisecond);

void BM_closed_loop_1s(benchmark::State& state) {
  ClosedLoopConfig cfg;
  cfg.plant.b = 133.0;
  cfg.plant.uncertainty = PlantSpec::Uncertainty::LinearDamping;
  cfg.plant.damping = 25.0;
  cfg.controller.k_u = 10.0;
  cfg.controller.l = 0.15;
  cfg.controller.mode = ControlMode::Estimated;
  cfg.controller.reference = AnalyticSignal::sinusoid(1.0, 1.0, 0.0);
  cfg.estimator = DifferentiatorSpec(DiffVariant::IntegralChainLinear, {10.0, 10.0, 10.0}, 0.01);
  cfg.noise = NoiseSpec::uniform_bounded(0.05, 42);
  cfg.sim = SimConfig{1.0, 1e-4, OdeMethod::Rk4, 100};
  cfg.theta0 = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_loop_simulate(cfg));
  }
}
BENCHMARK(BM_closed_loop_1s)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
