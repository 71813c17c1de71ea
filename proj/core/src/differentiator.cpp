#include "ichain/differentiator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ichain {

double sig(double y, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sig: exponent must be > 0");
  if (y == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(y), alpha), y);
}

std::vector<double> alpha_schedule(double alpha1, int n) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0))
    throw std::invalid_argument("alpha_schedule: alpha1 must lie in (0, 1)");
  if (n < 2) throw std::invalid_argument("alpha_schedule: order must be >= 2");
  std::vector<double> alphas(static_cast<std::size_t>(n));
  alphas[0] = alpha1;
  const double nd = static_cast<double>(n);
  for (int i = 2; i <= n; ++i) {
    const double denom = static_cast<double>(i - 1) * alpha1 + static_cast<double>(n - i + 1);
    alphas[static_cast<std::size_t>(i - 1)] = nd * alpha1 / denom;
  }
  return alphas;
}

bool is_hurwitz(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  if (n == 0) throw std::invalid_argument("is_hurwitz: empty coefficient list");

  // Necessary: every coefficient of a Hurwitz monic polynomial is positive.
  for (double a : coeffs)
    if (!(a > 0.0)) return false;
  if (n == 1) return true;

  // Routh table on descending coefficients [1, a_n, ..., a_1].
  std::vector<double> desc(n + 1);
  desc[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) desc[i + 1] = coeffs[n - 1 - i];

  const std::size_t width = n / 2 + 1;
  std::vector<double> upper(width, 0.0), lower(width, 0.0), next(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    if (2 * j < desc.size()) upper[j] = desc[2 * j];
    if (2 * j + 1 < desc.size()) lower[j] = desc[2 * j + 1];
  }

  constexpr double kPivotTol = 1e-12;
  for (std::size_t row = 2; row <= n; ++row) {
    const double pivot = lower[0];
    const double scale = std::max({std::abs(upper[0]), std::abs(pivot), 1.0});
    if (!(pivot > kPivotTol * scale)) return false;  // zero, negative, or marginal pivot
    for (std::size_t j = 0; j + 1 < width; ++j)
      next[j] = (pivot * upper[j + 1] - upper[0] * lower[j + 1]) / pivot;
    next[width - 1] = 0.0;
    upper = lower;
    lower = next;
  }
  // Last table row: its leading entry must be strictly positive as well.
  return lower[0] > kPivotTol * std::max(std::abs(upper[0]), 1.0);
}

std::vector<double> geometric_gains(double a1, double ratio, int n) {
  if (!(a1 > 0.0)) throw std::invalid_argument("geometric_gains: a1 must be > 0");
  if (!(ratio > 0.0)) throw std::invalid_argument("geometric_gains: ratio must be > 0");
  if (n < 1) throw std::invalid_argument("geometric_gains: order must be >= 1");
  std::vector<double> gains(static_cast<std::size_t>(n));
  double g = a1;
  for (int i = 0; i < n; ++i) {
    gains[static_cast<std::size_t>(i)] = g;
    g *= ratio;
  }
  return gains;
}

std::string to_string(DiffVariant v) {
  switch (v) {
    case DiffVariant::HighGainLinear: return "high-gain-linear";
    case DiffVariant::IntegralChainLinear: return "integral-chain-linear";
    case DiffVariant::IntegralChainNonlinear: return "integral-chain-nonlinear";
    case DiffVariant::Hybrid: return "hybrid";
  }
  return "unknown";
}

void highgain_rhs(std::span<const double> gains, double eps,
                  std::span<const double> w, double v, std::span<double> dw) {
  const std::size_t n = gains.size();
  const double err = w[0] - v;
  double eps_pow = eps;  // eps^i for row i
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dw[i] = w[i + 1] - gains[n - 1 - i] / eps_pow * err;
    eps_pow *= eps;
  }
  dw[n - 1] = -gains[0] / eps_pow * err;
}

namespace {

// Shared last-equation accumulators. The linear and nonlinear variants use
// the same term ordering so that alphas == 1 reduces the nonlinear form to
// the linear one bit-for-bit.
double chain_linear_correction(std::span<const double> gains, double eps,
                               std::span<const double> x, double v) {
  const std::size_t n = gains.size();
  double acc = gains[0] * (x[0] - v);
  double eps_pow = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    eps_pow *= eps;
    acc += gains[i] * (eps_pow * x[i]);
  }
  return acc;
}

double chain_nonlinear_correction(std::span<const double> gains,
                                  std::span<const double> alphas, double eps,
                                  std::span<const double> x, double v) {
  const std::size_t n = gains.size();
  double acc = gains[0] * sig(x[0] - v, alphas[0]);
  double eps_pow = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    eps_pow *= eps;
    acc += gains[i] * sig(eps_pow * x[i], alphas[i]);
  }
  return acc;
}

double inv_eps_pow_n(double eps, std::size_t n) {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= eps;
  return 1.0 / p;
}

}  // namespace

void chain_linear_rhs(std::span<const double> gains, double eps,
                      std::span<const double> x, double v, std::span<double> dx) {
  const std::size_t n = gains.size();
  for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
  dx[n - 1] = -inv_eps_pow_n(eps, n) * chain_linear_correction(gains, eps, x, v);
}

void chain_nonlinear_rhs(std::span<const double> gains, std::span<const double> alphas,
                         double eps, std::span<const double> x, double v,
                         std::span<double> dx) {
  const std::size_t n = gains.size();
  for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
  dx[n - 1] = -inv_eps_pow_n(eps, n) * chain_nonlinear_correction(gains, alphas, eps, x, v);
}

void chain_hybrid_rhs(std::span<const double> lin_gains, std::span<const double> nl_gains,
                      std::span<const double> alphas, double eps,
                      std::span<const double> x, double v, std::span<double> dx) {
  const std::size_t n = lin_gains.size();
  for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
  dx[n - 1] = -inv_eps_pow_n(eps, n) *
              (chain_linear_correction(lin_gains, eps, x, v) +
               chain_nonlinear_correction(nl_gains, alphas, eps, x, v));
}

DifferentiatorSpec::DifferentiatorSpec(DiffVariant variant_in, std::vector<double> gains_in,
                                       double epsilon_in, double alpha1_in,
                                       std::vector<double> hybrid_gains_in)
    : variant(variant_in),
      order(static_cast<int>(gains_in.size())),
      gains(std::move(gains_in)),
      epsilon(epsilon_in),
      alpha1(alpha1_in),
      hybrid_gains(std::move(hybrid_gains_in)) {
  if (order < 2) throw std::invalid_argument("differentiator order must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!is_hurwitz(gains))
    throw std::invalid_argument(
        "gains must form a Hurwitz characteristic polynomial s^n + a_n s^(n-1) + ... + a_1");

  const bool nonlinear =
      variant == DiffVariant::IntegralChainNonlinear || variant == DiffVariant::Hybrid;
  if (nonlinear) {
    alphas = alpha_schedule(alpha1, order);  // rejects alpha1 outside (0,1)
  } else if (alpha1 != 0.0) {
    throw std::invalid_argument("alpha1 is only meaningful for nonlinear/hybrid variants");
  }

  if (variant == DiffVariant::Hybrid) {
    if (static_cast<int>(hybrid_gains.size()) != order)
      throw std::invalid_argument("hybrid variant needs n nonlinear gains b_1..b_n");
    if (!is_hurwitz(hybrid_gains))
      throw std::invalid_argument("hybrid gains b_1..b_n must form a Hurwitz polynomial");
  } else if (!hybrid_gains.empty()) {
    throw std::invalid_argument("hybrid gains are only meaningful for the hybrid variant");
  }
}

void DifferentiatorSpec::rhs(std::span<const double> state, double v_meas,
                             std::span<double> dstate) const {
  if (state.size() != static_cast<std::size_t>(order) || dstate.size() != state.size())
    throw std::invalid_argument("estimator state length must equal the differentiator order");
  if (!std::isfinite(v_meas))
    throw std::invalid_argument("measurement sample must be finite");

  switch (variant) {
    case DiffVariant::HighGainLinear:
      highgain_rhs(gains, epsilon, state, v_meas, dstate);
      return;
    case DiffVariant::IntegralChainLinear:
      chain_linear_rhs(gains, epsilon, state, v_meas, dstate);
      return;
    case DiffVariant::IntegralChainNonlinear:
      chain_nonlinear_rhs(gains, alphas, epsilon, state, v_meas, dstate);
      return;
    case DiffVariant::Hybrid:
      chain_hybrid_rhs(gains, hybrid_gains, alphas, epsilon, state, v_meas, dstate);
      return;
  }
}

std::vector<double> DifferentiatorSpec::rhs(std::span<const double> state, double v_meas) const {
  std::vector<double> dstate(state.size());
  rhs(state, v_meas, dstate);
  return dstate;
}

}  // namespace ichain
