#include "ichain/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ichain/differentiator.hpp"

namespace ichain {

DilationWeights dilation_weights(int n, double alpha1) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0))
    throw std::invalid_argument("dilation_weights: alpha1 must lie in (0, 1)");
  if (n < 2) throw std::invalid_argument("dilation_weights: order must be >= 2");

  DilationWeights weights;
  weights.k = alpha1 - 1.0;
  weights.r.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    weights.r[static_cast<std::size_t>(i - 1)] =
        static_cast<double>(i - 1) * (alpha1 - 1.0) + static_cast<double>(n);
  return weights;
}

double homogeneity_residual(const DilationWeights& weights, std::span<const double> alphas,
                            std::span<const double> gains, int sample_count,
                            std::uint64_t seed) {
  const std::size_t n = gains.size();
  if (weights.r.size() != n || alphas.size() != n)
    throw std::invalid_argument("homogeneity_residual: weights/alphas/gains sizes must match");
  if (sample_count < 1) throw std::invalid_argument("homogeneity_residual: need >= 1 sample");

  std::mt19937_64 engine(seed);
  auto uniform = [&engine](double lo, double hi) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  std::vector<double> z(n), z_scaled(n), f(n), f_scaled(n);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    for (auto& zi : z) zi = uniform(-2.0, 2.0);
    const double rho = uniform(0.1, 10.0);
    for (std::size_t i = 0; i < n; ++i) z_scaled[i] = std::pow(rho, weights.r[i]) * z[i];

    // The error field equals the nonlinear chain rhs at eps = 1, zero input.
    chain_nonlinear_rhs(gains, alphas, 1.0, z, 0.0, f);
    chain_nonlinear_rhs(gains, alphas, 1.0, z_scaled, 0.0, f_scaled);

    for (std::size_t i = 0; i < n; ++i) {
      const double expected = std::pow(rho, weights.k + weights.r[i]) * f[i];
      const double residual =
          std::abs(f_scaled[i] - expected) / (std::abs(expected) + 1e-12);
      worst = std::max(worst, residual);
    }
  }
  return worst;
}

double homogeneity_residual(int n, std::span<const double> gains, double alpha1,
                            int sample_count, std::uint64_t seed) {
  const DilationWeights weights = dilation_weights(n, alpha1);
  const std::vector<double> alphas = alpha_schedule(alpha1, n);
  return homogeneity_residual(weights, alphas, gains, sample_count, seed);
}

TimeSeries simulate_error_system(ErrorFieldKind kind, std::span<const double> lin_gains,
                                 std::span<const double> nl_gains,
                                 std::span<const double> alphas,
                                 std::span<const double> init, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = init.size();
  if (n < 2) throw std::invalid_argument("error system: order must be >= 2");
  if (kind != ErrorFieldKind::Nonlinear && lin_gains.size() != n)
    throw std::invalid_argument("error system: linear gain count must equal the order");
  if (kind != ErrorFieldKind::Linear && (nl_gains.size() != n || alphas.size() != n))
    throw std::invalid_argument("error system: nonlinear gains/alphas must equal the order");

  std::vector<std::string> columns{"t"};
  for (std::size_t i = 1; i <= n; ++i) columns.push_back("z" + std::to_string(i));
  TimeSeries series(columns);

  std::vector<double> state(init.begin(), init.end());
  std::vector<double> row(n + 1);
  OdeStepper stepper(n);
  const long steps = cfg.step_count();

  auto rhs = [&](double, std::span<const double> z, std::span<double> dz) {
    switch (kind) {
      case ErrorFieldKind::Linear:
        chain_linear_rhs(lin_gains, 1.0, z, 0.0, dz);
        break;
      case ErrorFieldKind::Nonlinear:
        chain_nonlinear_rhs(nl_gains, alphas, 1.0, z, 0.0, dz);
        break;
      case ErrorFieldKind::Hybrid:
        chain_hybrid_rhs(lin_gains, nl_gains, alphas, 1.0, z, 0.0, dz);
        break;
    }
  };

  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * cfg.h;
    if (j % cfg.record_stride == 0) {
      row[0] = t;
      for (std::size_t i = 0; i < n; ++i) row[i + 1] = state[i];
      series.add_row(row);
    }
    if (j == steps) break;
    stepper.step(rhs, state, t, cfg.h, cfg.method);
  }
  return series;
}

std::optional<double> settling_time(const TimeSeries& series, const std::string& error_column,
                                    double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("settling_time: threshold must be > 0");
  const std::size_t col = series.column_index(error_column);
  const std::size_t rows = series.row_count();
  if (rows == 0) return std::nullopt;

  // Scan backwards for the last excursion beyond the threshold.
  std::size_t i = rows;
  while (i > 0 && std::abs(series.row(i - 1)[col]) <= threshold) --i;
  if (i == rows) return std::nullopt;           // still outside at the end
  if (i == 0) return series.row(0)[0];          // never exceeded
  return series.row(i)[0];                      // first record after the last excursion
}

}  // namespace ichain
