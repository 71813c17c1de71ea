#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ichain/differentiator.hpp"
#include "ichain/signal.hpp"

namespace ichain {

enum class OdeMethod { Euler, Rk4 };

/// Fixed-step simulation settings. Time is always computed as step_index * h
/// (never by repeated addition), so recorded grids are reproducible.
struct SimConfig {
  double t_end = 1.0;
  double h = 1e-4;
  OdeMethod method = OdeMethod::Rk4;
  int record_stride = 1;

  void validate() const;
  /// Number of integration steps covering [0, t_end].
  long step_count() const;
};

/// Thrown when an integrated state stops being finite; carries the time at
/// which the blow-up was detected.
struct IntegrationError : std::runtime_error {
  explicit IntegrationError(double t);
  double blowup_time;
};

/**
 * @brief Column-named record of a simulation run.
 *
 * Rows share one strictly increasing time column ("t" by convention, column
 * 0). CSV output carries 17 significant digits so that re-runs are
 * byte-comparable.
 */
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> columns);

  void add_row(std::span<const double> values);

  std::size_t column_index(const std::string& name) const;  // throws on unknown name
  bool has_column(const std::string& name) const;
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  double value(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Format a double with 17 significant digits (round-trip exact).
std::string format_double(double x);

using OdeRhs = std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

/**
 * @brief One explicit Euler or classical RK4 step, in place.
 *
 * RK4 evaluates the field at t, t+h/2 (twice) and t+h with weights
 * (k1 + 2 k2 + 2 k3 + k4)/6. Throws IntegrationError if the updated state is
 * not finite. Reusable across steps; holds the stage scratch storage.
 */
class OdeStepper {
 public:
  explicit OdeStepper(std::size_t dim);

  template <typename Rhs>
  void step(Rhs&& rhs, std::span<double> state, double t, double h, OdeMethod method) {
    const std::size_t n = state.size();
    if (method == OdeMethod::Euler) {
      rhs(t, state, std::span<double>(k1_));
      for (std::size_t i = 0; i < n; ++i) state[i] += h * k1_[i];
    } else {
      rhs(t, state, std::span<double>(k1_));
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + 0.5 * h * k1_[i];
      rhs(t + 0.5 * h, tmp_, std::span<double>(k2_));
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + 0.5 * h * k2_[i];
      rhs(t + 0.5 * h, tmp_, std::span<double>(k3_));
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = state[i] + h * k3_[i];
      rhs(t + h, tmp_, std::span<double>(k4_));
      for (std::size_t i = 0; i < n; ++i)
        state[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    check_finite(state, t + h);
  }

 private:
  static void check_finite(std::span<const double> state, double t);

  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// Convenience single-step entry point used by tests and small studies.
void ode_step(const OdeRhs& rhs, std::span<double> state, double t, double h, OdeMethod method);

/**
 * @brief Run one differentiator against an analytic input.
 *
 * The measurement v(t_j) + noise_j is drawn once per step and held across the
 * RK4 stages (sampled-sensor model). Columns: t, v_d0..v_d(n-1) (true input
 * derivatives), x_1..x_n (estimates), e_1..e_n (estimate minus truth).
 */
TimeSeries simulate_estimator(const DifferentiatorSpec& spec, const AnalyticSignal& signal,
                              const NoiseSpec& noise, std::span<const double> init,
                              const SimConfig& cfg);

}  // namespace ichain
