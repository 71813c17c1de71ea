#include "ichain/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ichain/differentiator.hpp"

namespace ichain {

double gain_constraint_residual(std::span<const double> gains) {
  const std::size_t n = gains.size();
  double residual = 0.0;
  for (std::size_t i = 0; i + 2 < n; ++i)
    residual = std::max(residual,
                        std::abs(gains[i + 1] * gains[i + 1] - gains[i] * gains[i + 2]));
  return residual;
}

bool check_gain_constraint(std::span<const double> gains, double tol) {
  return gain_constraint_residual(gains) <= tol;
}

std::vector<double> map_highgain_to_chain(std::span<const double> w,
                                          std::span<const double> gains, double epsilon) {
  const std::size_t n = w.size();
  if (gains.size() != n)
    throw std::invalid_argument("transform: gain count must equal the state length");
  for (double a : gains)
    if (a == 0.0) throw std::invalid_argument("transform: gains must be nonzero");

  std::vector<double> x(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    x[i] = w[i] - epsilon * (gains[i + 1] / gains[i]) * w[i + 1];
  x[n - 1] = w[n - 1];
  return x;
}

EquivalenceReport verify_equivalence(std::span<const double> gains, double epsilon,
                                     const AnalyticSignal& signal, const SimConfig& cfg,
                                     std::span<const double> init_w, double tolerance,
                                     TimeSeries* record) {
  cfg.validate();
  const std::size_t n = gains.size();
  if (n < 2) throw std::invalid_argument("equivalence check needs order >= 2");
  if (init_w.size() != n)
    throw std::invalid_argument("init_w length must equal the gain count");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

  EquivalenceReport report;
  report.tolerance = tolerance;
  report.constraint_residual = gain_constraint_residual(gains);

  std::vector<double> w(init_w.begin(), init_w.end());
  std::vector<double> x = map_highgain_to_chain(w, gains, epsilon);

  if (record) {
    std::vector<std::string> columns{"t"};
    for (std::size_t i = 1; i <= n; ++i) columns.push_back("w" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) columns.push_back("x" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) columns.push_back("m" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) columns.push_back("d" + std::to_string(i));
    *record = TimeSeries(columns);
  }

  OdeStepper stepper_w(n);
  OdeStepper stepper_x(n);
  std::vector<double> row(record ? 1 + 4 * n : 0);
  const long steps = cfg.step_count();

  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * cfg.h;
    const std::vector<double> mapped = map_highgain_to_chain(w, gains, epsilon);
    for (std::size_t i = 0; i < n; ++i)
      report.max_discrepancy = std::max(report.max_discrepancy, std::abs(mapped[i] - x[i]));

    if (record && j % cfg.record_stride == 0) {
      row[0] = t;
      for (std::size_t i = 0; i < n; ++i) {
        row[1 + i] = w[i];
        row[1 + n + i] = x[i];
        row[1 + 2 * n + i] = mapped[i];
        row[1 + 3 * n + i] = std::abs(mapped[i] - x[i]);
      }
      record->add_row(row);
    }
    if (j == steps) break;

    // Both systems see the same measurement, sampled once per step.
    const double v = signal.eval(t, 0);
    stepper_w.step(
        [&](double, std::span<const double> s, std::span<double> ds) {
          highgain_rhs(gains, epsilon, s, v, ds);
        },
        w, t, cfg.h, cfg.method);
    stepper_x.step(
        [&](double, std::span<const double> s, std::span<double> ds) {
          chain_linear_rhs(gains, epsilon, s, v, ds);
        },
        x, t, cfg.h, cfg.method);
  }

  report.pass = report.max_discrepancy <= tolerance && report.constraint_residual <= tolerance;
  return report;
}

}  // namespace ichain
