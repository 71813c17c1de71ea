#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ichain/ode.hpp"

namespace ichain {

/**
 * @brief Dilation data (r_1..r_n, k) for the error field of the nonlinear
 * chain differentiator.
 *
 * Satisfies the chain relation r_i = k + r_{i-1} and the exponent relation
 * r_i * alpha_i = k + r_n for the schedule derived from alpha_1. k < 0, which
 * is the finite-time condition for an asymptotically stable field.
 */
struct DilationWeights {
  std::vector<double> r;
  double k = 0.0;
};

/// Weights normalized with k = alpha_1 - 1, which gives r_1 = n and
/// r_i = (i-1)(alpha_1 - 1) + n. Any positive rescaling is equivalent.
DilationWeights dilation_weights(int n, double alpha1);

/**
 * @brief Max relative homogeneity residual of the zero-input error field
 *   f_i(z) = z_{i+1} (i < n),   f_n(z) = -sum_i a_i sig(z_i)^{alpha_i}
 * over random states z in [-2,2]^n and dilation factors rho in [0.1, 10]:
 *   |f_i(delta_rho z) - rho^(k+r_i) f_i(z)| / (|rho^(k+r_i) f_i(z)| + 1e-12).
 *
 * The overload taking explicit weights/alphas is for perturbation studies.
 */
double homogeneity_residual(int n, std::span<const double> gains, double alpha1,
                            int sample_count, std::uint64_t seed);
double homogeneity_residual(const DilationWeights& weights, std::span<const double> alphas,
                            std::span<const double> gains, int sample_count,
                            std::uint64_t seed);

/**
 * @brief Earliest recorded time after which |column| stays within threshold
 * through the end of the series. Empty when the final value still exceeds
 * the threshold. A series that never exceeds it settles at its first record.
 */
std::optional<double> settling_time(const TimeSeries& series, const std::string& error_column,
                                    double threshold);

/// Correction style of the zero-input error system
///   dz_i = z_{i+1},  dz_n = -(linear and/or sig-power terms in z).
enum class ErrorFieldKind { Linear, Nonlinear, Hybrid };

/**
 * @brief Integrate the zero-input error system from a given offset.
 *
 * Linear uses gains lin_gains; Nonlinear uses nl_gains with the exponent
 * schedule alphas; Hybrid sums both corrections. Columns: t, z1..zn.
 * This is the testbed for comparing convergence speed of the three
 * differentiator forms.
 */
TimeSeries simulate_error_system(ErrorFieldKind kind, std::span<const double> lin_gains,
                                 std::span<const double> nl_gains,
                                 std::span<const double> alphas,
                                 std::span<const double> init, const SimConfig& cfg);

}  // namespace ichain
