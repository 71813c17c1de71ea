#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ichain/homogeneity.hpp"

using namespace ichain;

TEST_CASE("dilation weights for n = 3, alpha1 = 0.5") {
  const auto weights = dilation_weights(3, 0.5);
  CHECK(weights.k == -0.5);
  REQUIRE(weights.r.size() == 3);
  CHECK(weights.r[0] == 3.0);
  CHECK(weights.r[1] == 2.5);
  CHECK(weights.r[2] == 2.0);

  // Cross-relation r_i * alpha_i = k + r_n: 3*0.5 = 2.5*0.6 = 2*0.75 = 1.5.
  const auto alphas = alpha_schedule(0.5, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(weights.r[static_cast<std::size_t>(i)] * alphas[static_cast<std::size_t>(i)] ==
          doctest::Approx(weights.k + weights.r[2]).epsilon(1e-14));
}

TEST_CASE("weight relations hold across the (n, alpha1) grid") {
  for (int n = 2; n <= 6; ++n) {
    for (double alpha1 = 0.1; alpha1 < 0.95; alpha1 += 0.05) {
      const auto weights = dilation_weights(n, alpha1);
      const auto alphas = alpha_schedule(alpha1, n);
      CHECK(weights.k < 0.0);
      CHECK(weights.r[0] == static_cast<double>(n));
      for (int i = 1; i < n; ++i) {
        CHECK(std::abs(weights.r[static_cast<std::size_t>(i)] -
                       (weights.k + weights.r[static_cast<std::size_t>(i - 1)])) <= 1e-12);
        CHECK(weights.r[static_cast<std::size_t>(i)] > 0.0);
      }
      const double target = weights.k + weights.r[static_cast<std::size_t>(n - 1)];
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(weights.r[static_cast<std::size_t>(i)] *
                           alphas[static_cast<std::size_t>(i)] -
                       target) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(dilation_weights(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dilation_weights(1, 0.5), std::invalid_argument);
}

TEST_CASE("weights approach the degree-zero linear case as alpha1 -> 1") {
  const auto weights = dilation_weights(4, 0.9999999);
  CHECK(weights.k == doctest::Approx(0.0).epsilon(1e-6));
  for (double r : weights.r) CHECK(r == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("the constructed error field is homogeneous to round-off") {
  const std::vector<double> gains{1.0, 3.0, 3.0};
  CHECK(homogeneity_residual(3, gains, 0.5, 2000, 1) < 1e-10);
  CHECK(homogeneity_residual(2, std::vector<double>{1.0, 2.0}, 0.3, 2000, 1) < 1e-10);
}

TEST_CASE("perturbed weights break homogeneity detectably") {
  const std::vector<double> gains{1.0, 3.0, 3.0};
  auto weights = dilation_weights(3, 0.5);
  weights.r[0] += 0.1;
  const auto alphas = alpha_schedule(0.5, 3);
  CHECK(homogeneity_residual(weights, alphas, gains, 2000, 1) > 1e-2);
}

TEST_CASE("a linear field is homogeneous of degree zero with constant weights") {
  DilationWeights weights;
  weights.k = 0.0;
  weights.r = {1.0, 1.0, 1.0};
  const std::vector<double> alphas{1.0, 1.0, 1.0};
  const std::vector<double> gains{1.0, 3.0, 3.0};
  CHECK(homogeneity_residual(weights, alphas, gains, 1000, 2) < 1e-10);
}

namespace {

TimeSeries exponential_series(double t_end, double dt) {
  TimeSeries series(std::vector<std::string>{"t", "e"});
  for (long j = 0; static_cast<double>(j) * dt <= t_end; ++j) {
    const double t = static_cast<double>(j) * dt;
    series.add_row(std::vector<double>{t, std::exp(-t)});
  }
  return series;
}

}  // namespace

TEST_CASE("settling time") {
  TimeSeries zero(std::vector<std::string>{"t", "e"});
  for (int j = 0; j < 10; ++j) zero.add_row(std::vector<double>{0.1 * j, 0.0});
  CHECK(settling_time(zero, "e", 0.5) == 0.0);

  const auto decay = exponential_series(10.0, 0.001);
  const auto settle = settling_time(decay, "e", 1e-3);
  REQUIRE(settle.has_value());
  CHECK(*settle == doctest::Approx(std::log(1000.0)).epsilon(1e-3));

  TimeSeries flat(std::vector<std::string>{"t", "e"});
  for (int j = 0; j < 10; ++j) flat.add_row(std::vector<double>{0.1 * j, 1.0});
  CHECK_FALSE(settling_time(flat, "e", 0.5).has_value());

  CHECK_THROWS_AS(settling_time(flat, "missing", 0.5), std::invalid_argument);
  CHECK_THROWS_AS(settling_time(flat, "e", 0.0), std::invalid_argument);
}

TEST_CASE("error-system simulation matches the chain structure") {
  const std::vector<double> gains{1.0, 3.0, 3.0};
  const auto alphas = alpha_schedule(0.5, 3);
  const SimConfig cfg{1.0, 1e-3, OdeMethod::Rk4, 100};
  const std::vector<double> init{1.0, 0.0, 0.0};
  const auto series =
      simulate_error_system(ErrorFieldKind::Nonlinear, gains, gains, alphas, init, cfg);
  CHECK(series.row_count() == 11);
  CHECK(series.value(0, "z1") == 1.0);
  // The correction only acts through z3; z1 moves last.
  CHECK(std::abs(series.value(1, "z1") - 1.0) < 0.1);
}

TEST_CASE("nonlinear settling beats linear settling deep below threshold") {
  const std::vector<double> gains{6.0, 11.0, 6.0};
  const auto alphas = alpha_schedule(0.5, 3);
  const SimConfig cfg{40.0, 1e-3, OdeMethod::Rk4, 1};

  int nonlinear_wins = 0;
  const int offsets = 20;
  for (int i = 0; i < offsets; ++i) {
    const double offset = 0.1 + (2.0 - 0.1) * static_cast<double>(i) / (offsets - 1);
    const std::vector<double> init{offset, 0.0, 0.0};
    const auto lin =
        simulate_error_system(ErrorFieldKind::Linear, gains, gains, alphas, init, cfg);
    const auto nl =
        simulate_error_system(ErrorFieldKind::Nonlinear, gains, gains, alphas, init, cfg);
    const auto t_lin = settling_time(lin, "z1", 1e-6);
    const auto t_nl = settling_time(nl, "z1", 1e-6);
    REQUIRE(t_nl.has_value());  // finite-time convergence
    if (!t_lin || *t_nl < *t_lin) ++nonlinear_wins;
  }
  CHECK(nonlinear_wins >= (offsets * 9) / 10);
}

TEST_CASE("nonlinear reaches a 1e-3 band no later than linear from a unit offset") {
  const std::vector<double> gains{6.0, 11.0, 6.0};
  const auto alphas = alpha_schedule(0.5, 3);
  const SimConfig cfg{30.0, 1e-3, OdeMethod::Rk4, 1};
  const std::vector<double> init{1.0, 0.0, 0.0};
  const auto lin =
      simulate_error_system(ErrorFieldKind::Linear, gains, gains, alphas, init, cfg);
  const auto nl =
      simulate_error_system(ErrorFieldKind::Nonlinear, gains, gains, alphas, init, cfg);
  const auto t_lin = settling_time(lin, "z1", 1e-3);
  const auto t_nl = settling_time(nl, "z1", 1e-3);
  REQUIRE(t_lin.has_value());
  REQUIRE(t_nl.has_value());
  CHECK(*t_nl <= *t_lin);
}
