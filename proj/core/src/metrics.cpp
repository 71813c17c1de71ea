#include "ichain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ichain {

double rmse_after(const TimeSeries& series, const std::string& col_a,
                  const std::string& col_b, double t_start) {
  const std::size_t a = series.column_index(col_a);
  const std::size_t b = series.column_index(col_b);
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < series.row_count(); ++i) {
    const auto& row = series.row(i);
    if (row[0] < t_start) continue;
    const double d = row[a] - row[b];
    sum_sq += d * d;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("rmse_after: no records at or after t_start");
  return std::sqrt(sum_sq / static_cast<double>(count));
}

double max_abs_after(const TimeSeries& series, const std::string& column, double t_start) {
  const std::size_t c = series.column_index(column);
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < series.row_count(); ++i) {
    const auto& row = series.row(i);
    if (row[0] < t_start) continue;
    worst = std::max(worst, std::abs(row[c]));
    ++count;
  }
  if (count == 0) throw std::invalid_argument("max_abs_after: no records at or after t_start");
  return worst;
}

OrderFit convergence_order(std::span<const std::pair<double, double>> sweep) {
  if (sweep.size() < 3)
    throw std::invalid_argument("convergence_order: need at least 3 sweep points");

  OrderFit fit;
  fit.epsilons.reserve(sweep.size());
  fit.errors.reserve(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& [eps, err] = sweep[i];
    if (!(eps > 0.0) || !(err > 0.0))
      throw std::invalid_argument("convergence_order: epsilons and errors must be positive");
    if (i > 0 && !(eps < sweep[i - 1].first))
      throw std::invalid_argument("convergence_order: epsilons must be strictly decreasing");
    fit.epsilons.push_back(eps);
    fit.errors.push_back(err);
  }

  const std::size_t m = sweep.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += std::log(fit.epsilons[i]);
    mean_y += std::log(fit.errors[i]);
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(fit.epsilons[i]) - mean_x;
    const double dy = std::log(fit.errors[i]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double predicted = fit.intercept + fit.slope * std::log(fit.epsilons[i]);
    const double r = std::log(fit.errors[i]) - predicted;
    ss_res += r * r;
  }
  fit.residual = std::sqrt(ss_res / static_cast<double>(m));
  return fit;
}

}  // namespace ichain
