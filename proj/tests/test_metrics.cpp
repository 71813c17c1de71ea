#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "ichain/metrics.hpp"
#include "ichain/signal.hpp"

using namespace ichain;

namespace {

TimeSeries two_column_series(double t_end, double dt, auto&& fa, auto&& fb) {
  TimeSeries series(std::vector<std::string>{"t", "a", "b"});
  for (long j = 0; static_cast<double>(j) * dt <= t_end + 1e-12; ++j) {
    const double t = static_cast<double>(j) * dt;
    series.add_row(std::vector<double>{t, fa(t), fb(t)});
  }
  return series;
}

}  // namespace

TEST_CASE("rmse basics") {
  const auto same = two_column_series(1.0, 0.01, [](double t) { return std::sin(t); },
                                      [](double t) { return std::sin(t); });
  CHECK(rmse_after(same, "a", "b", 0.0) == 0.0);

  const auto offset = two_column_series(1.0, 0.01, [](double t) { return t + 2.0; },
                                        [](double t) { return t; });
  CHECK(rmse_after(offset, "a", "b", 0.0) == doctest::Approx(2.0));

  // RMS of sin over whole periods is 1/sqrt(2).
  const double period = 2.0 * 3.14159265358979323846;
  const auto sine = two_column_series(3.0 * period, 3.0 * period / 3000.0,
                                      [](double t) { return std::sin(t); },
                                      [](double) { return 0.0; });
  CHECK(rmse_after(sine, "a", "b", 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));

  CHECK_THROWS_AS(rmse_after(sine, "a", "missing", 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rmse_after(sine, "a", "b", 1e9), std::invalid_argument);
}

TEST_CASE("max_abs_after") {
  const auto series = two_column_series(10.0, 0.1, [](double t) { return std::exp(-t); },
                                        [](double) { return 0.0; });
  CHECK(max_abs_after(series, "a", 0.0) == 1.0);
  CHECK(max_abs_after(series, "a", 5.0) == doctest::Approx(std::exp(-5.0)).epsilon(0.05));
}

TEST_CASE("convergence order on exact power laws") {
  const std::vector<std::pair<double, double>> linear{
      {0.1, 0.1}, {0.05, 0.05}, {0.025, 0.025}};
  CHECK(convergence_order(linear).slope == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> quadratic;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) quadratic.emplace_back(eps, eps * eps);
  const auto fit = convergence_order(quadratic);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("convergence order is scale invariant in the error magnitude") {
  std::vector<std::pair<double, double>> base, scaled;
  for (double eps : {0.08, 0.04, 0.02, 0.01}) {
    const double err = std::pow(eps, 1.3);
    base.emplace_back(eps, err);
    scaled.emplace_back(eps, 177.0 * err);
  }
  const auto f0 = convergence_order(base);
  const auto f1 = convergence_order(scaled);
  CHECK(f0.slope == doctest::Approx(f1.slope).epsilon(1e-12));
  CHECK(f1.intercept - f0.intercept == doctest::Approx(std::log(177.0)).epsilon(1e-12));
}

TEST_CASE("convergence order input validation") {
  std::vector<std::pair<double, double>> two{{0.1, 0.1}, {0.05, 0.05}};
  CHECK_THROWS_AS(convergence_order(two), std::invalid_argument);
  std::vector<std::pair<double, double>> unsorted{{0.05, 1.0}, {0.1, 1.0}, {0.025, 1.0}};
  CHECK_THROWS_AS(convergence_order(unsorted), std::invalid_argument);
  std::vector<std::pair<double, double>> negative{{0.1, 0.1}, {0.05, -0.05}, {0.025, 0.01}};
  CHECK_THROWS_AS(convergence_order(negative), std::invalid_argument);
}

TEST_CASE("measured epsilon-order of the linear chain derivative estimate") {
  // Steady errors of the n = 2 chain on sin t shrink like eps; the fitted
  // slope of the derivative-channel error stays comfortably above 0.8 and
  // errors decrease monotonically with eps.
  const auto signal = AnalyticSignal::sinusoid(1.0, 1.0, 0.0);
  const SimConfig cfg{20.0, 1e-4, OdeMethod::Rk4, 20};
  std::vector<std::pair<double, double>> sweep_e2;
  double previous = 0.0;
  bool monotone = true;
  for (double eps : {0.04, 0.02, 0.01, 0.005}) {
    DifferentiatorSpec spec(DiffVariant::IntegralChainLinear, {1.0, 2.0}, eps);
    const auto series = simulate_estimator(spec, signal, NoiseSpec::none(),
                                           std::vector<double>{0.0, 0.0}, cfg);
    const double steady = max_abs_after(series, "e2", 0.8 * cfg.t_end);
    if (!sweep_e2.empty() && !(steady < previous)) monotone = false;
    sweep_e2.emplace_back(eps, steady);
    previous = steady;
  }
  CHECK(monotone);
  CHECK(convergence_order(sweep_e2).slope >= 0.8);
}
