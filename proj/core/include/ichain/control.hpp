#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ichain/differentiator.hpp"
#include "ichain/ode.hpp"
#include "ichain/signal.hpp"

namespace ichain {

/**
 * @brief Second-order uncertain plant:
 *   theta_dot = omega,  omega_dot = f + b*u,  measurement = theta + noise.
 *
 * The uncertainty f is either viscous damping f = -c*omega or an analytic
 * function of time.
 */
struct PlantSpec {
  enum class Uncertainty { None, LinearDamping, TimeSignal };

  double b = 1.0;  // control gain, nonzero
  Uncertainty uncertainty = Uncertainty::None;
  double damping = 0.0;                       // c, for LinearDamping
  std::optional<AnalyticSignal> f_of_t;       // for TimeSignal

  void validate() const;
  double f(double t, double theta, double omega) const;
};

/// theta_dot = omega; omega_dot = f(t, theta, omega) + b*u.
std::pair<double, double> plant_rhs(const PlantSpec& plant, double theta, double omega,
                                    double u, double t);

enum class ControlMode { KnownBound, Estimated };

/**
 * @brief Sliding-mode tracking controller settings.
 *
 * KnownBound uses the true tracking errors and a switching gain l that is
 * assumed to dominate |f| (not enforced). Estimated replaces the unmeasured
 * velocity and uncertainty with a 3rd-order differentiator driven by the
 * noisy position measurement.
 */
struct ControllerSpec {
  double k_u = 1.0;  // sliding-surface gain, > 0
  double l = 0.0;    // switching gain, > 0
  AnalyticSignal reference = AnalyticSignal::constant(0.0);
  ControlMode mode = ControlMode::KnownBound;
  double boundary_layer = 0.0;     // sat() half-width; 0 = pure sgn with sgn(0) = 0
  bool s_uses_measurement = false; // use raw theta_meas instead of x1 inside s

  void validate() const;
};

/// sgn with sgn(0) = 0, or the saturated version when width > 0.
double switching_function(double s, double width);

/// u = (1/b) * (-k_u e2 + theta_dd_d - l * sgn(s)),  s = e2 + k_u e1.
double control_known_bound(double e1, double e2, double theta_dd_d,
                           const ControllerSpec& spec, double plant_b);

/// f_hat = omega_hat_dot - b*u (u is the previously applied control).
double estimate_f(double omega_hat_dot, double b, double u);

/**
 * @brief Acceleration-feedback control from a 3rd-order estimator state.
 *
 * s = (omega_hat - theta_d_dot) + k_u (theta_hat - theta_d), with theta_hat
 * replaced by the raw measurement when spec.s_uses_measurement is set;
 * u = (1/b) [-k_u (omega_hat - theta_d_dot) + theta_dd_d - l sgn(s) - f_hat].
 */
double control_estimated(std::span<const double, 3> estimator_state, double theta_meas,
                         double theta_d, double theta_d_dot, double theta_dd_d,
                         const ControllerSpec& spec, double plant_b, double f_hat);

/**
 * @brief Full closed-loop description: plant, controller, estimator, noise,
 * grid and initial conditions.
 *
 * In Estimated mode the estimator must have order 3 and is initialized, by
 * default, to (first measurement, 0, 0) which suppresses the initial peaking
 * of the position channel.
 */
struct ClosedLoopConfig {
  PlantSpec plant;
  ControllerSpec controller;
  std::optional<DifferentiatorSpec> estimator;  // required in Estimated mode
  NoiseSpec noise;
  SimConfig sim;
  double theta0 = 0.0;
  double omega0 = 0.0;
  std::optional<std::vector<double>> estimator_init;  // overrides the default

  void validate() const;
};

/**
 * @brief Simulate the loop with the control held over each step.
 *
 * Per step: draw one noise sample, form theta_meas, compute u from the
 * current estimates (Estimated) or true errors (KnownBound), then advance
 * plant and estimator with u and theta_meas held across the RK4 stages.
 *
 * The uncertainty estimate routes b*u through a second, identical
 * differentiator driven by a nominal double-integrator model, and takes
 * f_hat = x3 - y3. Both acceleration estimates share the same filter
 * dynamics, so f_hat tends to "estimated acceleration minus b*u" as the
 * estimator gets fast, without coupling the control back into its own
 * uncertainty estimate through an algebraic loop (a direct one-step
 * feedback of u into f_hat integrates the estimator lag and destabilizes
 * the loop at realistic step sizes).
 *
 * Columns: t, theta_d, theta, omega, theta_hat, omega_hat, omega_hat_dot,
 * f_true, f_hat, u, e1, s. In KnownBound mode the estimator columns carry
 * the plant truth (theta, omega, f + b*u) and f_hat equals f_true.
 */
TimeSeries closed_loop_simulate(const ClosedLoopConfig& cfg);

}  // namespace ichain
