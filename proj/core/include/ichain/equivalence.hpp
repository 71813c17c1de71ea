#pragma once

#include <span>
#include <vector>

#include "ichain/ode.hpp"
#include "ichain/signal.hpp"

namespace ichain {

/// Outcome of a trajectory-equivalence check between the high-gain form and
/// the integral-chain form under the bidiagonal coordinate transform.
struct EquivalenceReport {
  double max_discrepancy = 0.0;     // max over time and components of |map(w) - x|
  double constraint_residual = 0.0; // max |a_{i+1}^2 - a_i a_{i+2}|
  double tolerance = 0.0;
  bool pass = false;
};

/// Largest violation of a_{i+1}^2 = a_i * a_{i+2} over i = 1..n-2.
/// Zero (vacuously) for n <= 2.
double gain_constraint_residual(std::span<const double> gains);

/// True iff the residual is within tol. Vacuously true for n = 2.
bool check_gain_constraint(std::span<const double> gains, double tol);

/**
 * @brief Map a high-gain state to integral-chain coordinates:
 *   x_i = w_i - eps * (a_{i+1}/a_i) * w_{i+1}  (i < n),  x_n = w_n.
 * Rejects zero gains (the ratios would be undefined).
 */
std::vector<double> map_highgain_to_chain(std::span<const double> w,
                                          std::span<const double> gains, double epsilon);

/**
 * @brief Numerically verify that the two differentiator forms produce the
 * same trajectory once states are identified through the transform.
 *
 * Integrates the high-gain system from init_w and the integral-chain system
 * from map_highgain_to_chain(init_w) on the same noise-free input and step
 * grid, and reports the largest componentwise gap between the mapped
 * high-gain state and the chain state over all steps. The check passes when
 * both the gap and the gain-constraint residual are within the tolerance.
 *
 * Gains are not required to be Hurwitz here: the trajectory identity is
 * algebraic and holds (or fails) regardless of stability, and several
 * geometric gain families of interest are not Hurwitz for n >= 4.
 *
 * If record is non-null it receives columns t, w1..wn, x1..xn, m1..mn
 * (mapped high-gain state) and d1..dn (|m_i - x_i|) at the configured
 * record stride.
 */
EquivalenceReport verify_equivalence(std::span<const double> gains, double epsilon,
                                     const AnalyticSignal& signal, const SimConfig& cfg,
                                     std::span<const double> init_w, double tolerance = 1e-8,
                                     TimeSeries* record = nullptr);

}  // namespace ichain
