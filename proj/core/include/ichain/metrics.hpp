#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ichain/ode.hpp"

namespace ichain {

/// Root-mean-square of (col_a - col_b) over records with t >= t_start.
/// Throws on unknown columns or an empty window.
double rmse_after(const TimeSeries& series, const std::string& col_a,
                  const std::string& col_b, double t_start);

/// Least-squares fit of log(error) against log(epsilon).
struct OrderFit {
  std::vector<double> epsilons;  // strictly decreasing, all > 0
  std::vector<double> errors;    // all > 0
  double slope = 0.0;            // fitted convergence exponent
  double intercept = 0.0;
  double residual = 0.0;         // RMS residual of the fit in log space
};

/// Fit the empirical convergence order from (epsilon, steady_error) samples.
/// Needs >= 3 points, epsilons strictly decreasing, all values positive.
OrderFit convergence_order(std::span<const std::pair<double, double>> sweep);

/// Largest |column| over records with t >= t_start.
double max_abs_after(const TimeSeries& series, const std::string& column, double t_start);

}  // namespace ichain
