#include "ichain/ode.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace ichain {

void SimConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("sim: step size h must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("sim: t_end must be >= 0");
  if (record_stride < 1) throw std::invalid_argument("sim: record_stride must be >= 1");
}

long SimConfig::step_count() const {
  const double q = t_end / h;
  const long rounded = std::lround(q);
  if (std::abs(q - static_cast<double>(rounded)) < 1e-6) return rounded;
  return static_cast<long>(std::floor(q));
}

IntegrationError::IntegrationError(double t)
    : std::runtime_error("integration failure: state became non-finite at t = " +
                         format_double(t)),
      blowup_time(t) {}

TimeSeries::TimeSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void TimeSeries::add_row(std::span<const double> values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("time series row width must equal column count");
  if (!rows_.empty() && !(values[0] > rows_.back()[0]))
    throw std::invalid_argument("time series rows must have strictly increasing t");
  rows_.emplace_back(values.begin(), values.end());
}

std::size_t TimeSeries::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw std::invalid_argument("unknown time series column: " + name);
}

bool TimeSeries::has_column(const std::string& name) const {
  for (const auto& c : columns_)
    if (c == name) return true;
  return false;
}

double TimeSeries::value(std::size_t row, const std::string& column) const {
  return rows_.at(row)[column_index(column)];
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void TimeSeries::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) os << ',';
    os << columns_[i];
  }
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

void TimeSeries::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(os);
}

OdeStepper::OdeStepper(std::size_t dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void OdeStepper::check_finite(std::span<const double> state, double t) {
  for (double x : state)
    if (!std::isfinite(x)) throw IntegrationError(t);
}

void ode_step(const OdeRhs& rhs, std::span<double> state, double t, double h, OdeMethod method) {
  if (!(h > 0.0)) throw std::invalid_argument("ode_step: h must be > 0");
  OdeStepper stepper(state.size());
  stepper.step(rhs, state, t, h, method);
}

TimeSeries simulate_estimator(const DifferentiatorSpec& spec, const AnalyticSignal& signal,
                              const NoiseSpec& noise, std::span<const double> init,
                              const SimConfig& cfg) {
  cfg.validate();
  const int n = spec.order;
  if (init.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("estimator initial state length must equal the order");

  std::vector<std::string> columns;
  columns.reserve(static_cast<std::size_t>(1 + 3 * n));
  columns.emplace_back("t");
  for (int k = 0; k < n; ++k) columns.push_back("v_d" + std::to_string(k));
  for (int i = 1; i <= n; ++i) columns.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) columns.push_back("e" + std::to_string(i));
  TimeSeries series(columns);

  std::vector<double> state(init.begin(), init.end());
  std::vector<double> row(columns.size());
  NoiseStream stream(noise);
  OdeStepper stepper(static_cast<std::size_t>(n));
  const long steps = cfg.step_count();

  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * cfg.h;
    if (j % cfg.record_stride == 0) {
      row[0] = t;
      for (int k = 0; k < n; ++k) {
        const double truth = signal.eval(t, k);
        row[static_cast<std::size_t>(1 + k)] = truth;
        row[static_cast<std::size_t>(1 + n + k)] = state[static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(1 + 2 * n + k)] =
            state[static_cast<std::size_t>(k)] - truth;
      }
      series.add_row(row);
    }
    if (j == steps) break;

    const double v_meas = signal.eval(t, 0) + stream.next();
    stepper.step(
        [&](double, std::span<const double> x, std::span<double> dx) {
          spec.rhs(x, v_meas, dx);
        },
        state, t, cfg.h, cfg.method);
  }
  return series;
}

}  // namespace ichain
