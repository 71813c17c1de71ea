#pragma once

#include <span>
#include <string>
#include <vector>

namespace ichain {

/// Odd fractional-power map: sig(y, a) = |y|^a * sgn(y), a > 0.
double sig(double y, double alpha);

/**
 * @brief Exponent schedule for the nonlinear corrections.
 *
 * alpha_1 is taken as given; for i = 2..n,
 *   alpha_i = n*alpha_1 / ((i-1)*alpha_1 + (n - i + 1)).
 * For 0 < alpha_1 < 1 the schedule is strictly increasing and stays in (0,1).
 */
std::vector<double> alpha_schedule(double alpha1, int n);

/**
 * @brief Routh test for s^n + a_n s^(n-1) + ... + a_2 s + a_1.
 *
 * @param coeffs  a_1..a_n in ascending order; the leading monic coefficient
 *                is implied.
 * @return true iff every root has strictly negative real part. Zero pivots
 *         (marginal polynomials) count as not Hurwitz.
 */
bool is_hurwitz(std::span<const double> coeffs);

/// Gains a_i = a1 * ratio^(i-1); satisfies a_{i+1}^2 = a_i * a_{i+2} exactly.
std::vector<double> geometric_gains(double a1, double ratio, int n);

enum class DiffVariant {
  HighGainLinear,        // corrections in every state equation
  IntegralChainLinear,   // pure integrator chain, corrections in the last equation
  IntegralChainNonlinear,
  Hybrid,                // linear + nonlinear corrections summed in the last equation
};

std::string to_string(DiffVariant v);

// Raw vector fields. These do no gain validation so that structural studies
// (equivalence, homogeneity) can evaluate them for arbitrary gain sets.
// All take gains a_1..a_n ascending and write the state derivative to dx.

/// dw_i = w_{i+1} - (a_{n-i+1}/eps^i)(w_1 - v),  dw_n = -(a_1/eps^n)(w_1 - v).
void highgain_rhs(std::span<const double> gains, double eps,
                  std::span<const double> w, double v, std::span<double> dw);

/// dx_i = x_{i+1},  dx_n = -(1/eps^n)[a_1 (x_1 - v) + sum_{i>=2} a_i eps^(i-1) x_i].
void chain_linear_rhs(std::span<const double> gains, double eps,
                      std::span<const double> x, double v, std::span<double> dx);

/// dx_n = -(1/eps^n)[a_1 sig(x_1 - v)^{alpha_1} + sum_{i>=2} a_i sig(eps^(i-1) x_i)^{alpha_i}].
void chain_nonlinear_rhs(std::span<const double> gains, std::span<const double> alphas,
                         double eps, std::span<const double> x, double v,
                         std::span<double> dx);

/// Last equation carries both the linear terms (gains a) and the nonlinear
/// terms (gains b with exponents alphas).
void chain_hybrid_rhs(std::span<const double> lin_gains, std::span<const double> nl_gains,
                      std::span<const double> alphas, double eps,
                      std::span<const double> x, double v, std::span<double> dx);

/**
 * @brief Validated description of one differentiator.
 *
 * Construction enforces: n >= 2, eps > 0, gains forming a Hurwitz
 * characteristic polynomial, alpha1 in (0,1) for the nonlinear/hybrid
 * variants, and a Hurwitz b-polynomial for the hybrid variant. State
 * component x_i estimates the (i-1)-th derivative of the input.
 */
struct DifferentiatorSpec {
  DiffVariant variant;
  int order;                        // n
  std::vector<double> gains;        // a_1..a_n
  double epsilon;
  double alpha1 = 0.0;              // nonlinear / hybrid only
  std::vector<double> hybrid_gains; // b_1..b_n, hybrid only
  std::vector<double> alphas;       // derived schedule (empty for linear variants)

  DifferentiatorSpec(DiffVariant variant, std::vector<double> gains, double epsilon,
                     double alpha1 = 0.0, std::vector<double> hybrid_gains = {});

  /// Estimator state derivative for measurement sample v_meas.
  /// Rejects state-size mismatches and non-finite measurements.
  void rhs(std::span<const double> state, double v_meas, std::span<double> dstate) const;

  std::vector<double> rhs(std::span<const double> state, double v_meas) const;
};

}  // namespace ichain
