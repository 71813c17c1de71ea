#include "ichain/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ichain {

void PlantSpec::validate() const {
  if (b == 0.0) throw std::invalid_argument("plant: control gain b must be nonzero");
  if (uncertainty == Uncertainty::TimeSignal && !f_of_t)
    throw std::invalid_argument("plant: time-signal uncertainty needs a signal");
}

double PlantSpec::f(double t, double /*theta*/, double omega) const {
  switch (uncertainty) {
    case Uncertainty::None: return 0.0;
    case Uncertainty::LinearDamping: return -damping * omega;
    case Uncertainty::TimeSignal: return f_of_t->eval(t, 0);
  }
  return 0.0;
}

std::pair<double, double> plant_rhs(const PlantSpec& plant, double theta, double omega,
                                    double u, double t) {
  return {omega, plant.f(t, theta, omega) + plant.b * u};
}

void ControllerSpec::validate() const {
  if (!(k_u > 0.0)) throw std::invalid_argument("controller: k_u must be > 0");
  if (!(l > 0.0)) throw std::invalid_argument("controller: switching gain l must be > 0");
  if (boundary_layer < 0.0)
    throw std::invalid_argument("controller: boundary layer width must be >= 0");
}

double switching_function(double s, double width) {
  if (width > 0.0) return std::clamp(s / width, -1.0, 1.0);
  if (s > 0.0) return 1.0;
  if (s < 0.0) return -1.0;
  return 0.0;
}

double control_known_bound(double e1, double e2, double theta_dd_d,
                           const ControllerSpec& spec, double plant_b) {
  const double s = e2 + spec.k_u * e1;
  return (1.0 / plant_b) *
         (-spec.k_u * e2 + theta_dd_d - spec.l * switching_function(s, spec.boundary_layer));
}

double estimate_f(double omega_hat_dot, double b, double u) {
  return omega_hat_dot - b * u;
}

double control_estimated(std::span<const double, 3> estimator_state, double theta_meas,
                         double theta_d, double theta_d_dot, double theta_dd_d,
                         const ControllerSpec& spec, double plant_b, double f_hat) {
  const double theta_hat = spec.s_uses_measurement ? theta_meas : estimator_state[0];
  const double e2_hat = estimator_state[1] - theta_d_dot;
  const double s = e2_hat + spec.k_u * (theta_hat - theta_d);
  return (1.0 / plant_b) *
         (-spec.k_u * e2_hat + theta_dd_d -
          spec.l * switching_function(s, spec.boundary_layer) - f_hat);
}

void ClosedLoopConfig::validate() const {
  plant.validate();
  controller.validate();
  sim.validate();
  if (controller.mode == ControlMode::Estimated) {
    if (!estimator)
      throw std::invalid_argument("closed loop: estimated mode needs a differentiator");
    if (estimator->order != 3)
      throw std::invalid_argument("closed loop: estimated mode needs an order-3 differentiator");
    if (estimator_init && estimator_init->size() != 3)
      throw std::invalid_argument("closed loop: estimator init must have 3 components");
  }
}

TimeSeries closed_loop_simulate(const ClosedLoopConfig& cfg) {
  cfg.validate();
  const bool estimated = cfg.controller.mode == ControlMode::Estimated;

  TimeSeries series(std::vector<std::string>{"t", "theta_d", "theta", "omega", "theta_hat",
                                             "omega_hat", "omega_hat_dot", "f_true", "f_hat",
                                             "u", "e1", "s"});

  NoiseStream noise(cfg.noise);
  std::vector<double> plant_state{cfg.theta0, cfg.omega0};

  // Estimated mode runs two copies of the differentiator: one on the noisy
  // measurement and one on a nominal double-integrator model driven by the
  // applied control. Both acceleration estimates see b*u through identical
  // dynamics, so their difference realizes "estimated acceleration minus
  // b*u" without the algebraic loop between the uncertainty estimate and
  // the control.
  std::vector<double> est_state(3, 0.0);
  std::vector<double> shadow_state(3, 0.0);
  std::vector<double> nominal_state(2, 0.0);
  OdeStepper plant_stepper(2);
  OdeStepper est_stepper(3);
  OdeStepper shadow_stepper(3);
  OdeStepper nominal_stepper(2);

  std::vector<double> row(12);
  const long steps = cfg.sim.step_count();

  for (long j = 0;; ++j) {
    const double t = static_cast<double>(j) * cfg.sim.h;
    const double theta = plant_state[0];
    const double omega = plant_state[1];
    const double theta_d = cfg.controller.reference.eval(t, 0);
    const double theta_d_dot = cfg.controller.reference.eval(t, 1);
    const double theta_dd_d = cfg.controller.reference.eval(t, 2);
    const double theta_meas = theta + noise.next();
    const double f_true = cfg.plant.f(t, theta, omega);

    if (j == 0 && estimated) {
      if (cfg.estimator_init)
        est_state = *cfg.estimator_init;
      else
        est_state = {theta_meas, 0.0, 0.0};  // suppresses position-channel peaking
      nominal_state = {theta_meas, 0.0};
      shadow_state = {theta_meas, 0.0, 0.0};
    }

    double u, f_hat, s;
    double omega_hat_dot = 0.0;
    if (estimated) {
      omega_hat_dot = est_state[2];
      f_hat = est_state[2] - shadow_state[2];
      const double theta_hat =
          cfg.controller.s_uses_measurement ? theta_meas : est_state[0];
      s = (est_state[1] - theta_d_dot) + cfg.controller.k_u * (theta_hat - theta_d);
      u = control_estimated(std::span<const double, 3>(est_state.data(), 3), theta_meas,
                            theta_d, theta_d_dot, theta_dd_d, cfg.controller, cfg.plant.b,
                            f_hat);
    } else {
      const double e1 = theta - theta_d;
      const double e2 = omega - theta_d_dot;
      s = e2 + cfg.controller.k_u * e1;
      u = control_known_bound(e1, e2, theta_dd_d, cfg.controller, cfg.plant.b);
      f_hat = f_true;
    }

    if (j % cfg.sim.record_stride == 0) {
      row[0] = t;
      row[1] = theta_d;
      row[2] = theta;
      row[3] = omega;
      if (estimated) {
        row[4] = est_state[0];
        row[5] = est_state[1];
        row[6] = omega_hat_dot;
      } else {
        row[4] = theta;
        row[5] = omega;
        row[6] = f_true + cfg.plant.b * u;
      }
      row[7] = f_true;
      row[8] = f_hat;
      row[9] = u;
      row[10] = theta - theta_d;
      row[11] = s;
      series.add_row(row);
    }
    if (j == steps) break;

    // Control and measurements held over the step; plant states evolve
    // through the RK4 stages.
    plant_stepper.step(
        [&](double ts, std::span<const double> x, std::span<double> dx) {
          const auto [dtheta, domega] = plant_rhs(cfg.plant, x[0], x[1], u, ts);
          dx[0] = dtheta;
          dx[1] = domega;
        },
        plant_state, t, cfg.sim.h, cfg.sim.method);

    if (estimated) {
      const double theta_nominal = nominal_state[0];
      est_stepper.step(
          [&](double, std::span<const double> x, std::span<double> dx) {
            cfg.estimator->rhs(x, theta_meas, dx);
          },
          est_state, t, cfg.sim.h, cfg.sim.method);
      shadow_stepper.step(
          [&](double, std::span<const double> y, std::span<double> dy) {
            cfg.estimator->rhs(y, theta_nominal, dy);
          },
          shadow_state, t, cfg.sim.h, cfg.sim.method);
      nominal_stepper.step(
          [&](double, std::span<const double> x, std::span<double> dx) {
            dx[0] = x[1];
            dx[1] = cfg.plant.b * u;
          },
          nominal_state, t, cfg.sim.h, cfg.sim.method);
    }
  }
  return series;
}

}  // namespace ichain
