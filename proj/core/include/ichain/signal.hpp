#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ichain {

/**
 * @brief Test signal with a closed-form derivative of every order.
 *
 * Supported shapes: sinusoid A*sin(w*t + phi), polynomial (coefficients in
 * ascending degree), constant, and sums of the above. eval(t, k) returns the
 * exact k-th derivative at t, so a signal doubles as the ground truth for
 * derivative-estimation experiments.
 */
class AnalyticSignal {
 public:
  static AnalyticSignal sinusoid(double amplitude, double omega, double phase = 0.0);
  static AnalyticSignal polynomial(std::vector<double> coeffs);
  static AnalyticSignal constant(double level);
  static AnalyticSignal sum(std::vector<AnalyticSignal> terms);

  /// Exact k-th derivative at time t. Total: any finite t, any k >= 0.
  double eval(double t, int k = 0) const;

  std::string describe() const;

 private:
  enum class Kind { Sinusoid, Polynomial, Constant, Sum };

  AnalyticSignal() = default;

  Kind kind_ = Kind::Constant;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
  double phase_ = 0.0;
  double level_ = 0.0;
  std::vector<double> coeffs_;
  std::vector<AnalyticSignal> terms_;
};

/// Measurement-noise description. Uniform noise is hard-bounded: every sample
/// satisfies |sample| <= bound. Identical seeds give identical streams.
struct NoiseSpec {
  enum class Kind { None, UniformBounded, Gaussian };

  Kind kind = Kind::None;
  double bound = 0.0;    // half-width for UniformBounded
  double stddev = 0.0;   // for Gaussian
  std::uint64_t seed = 0;

  static NoiseSpec none();
  static NoiseSpec uniform_bounded(double bound, std::uint64_t seed);
  static NoiseSpec gaussian(double stddev, std::uint64_t seed);
};

/**
 * @brief Deterministic sample stream for a NoiseSpec.
 *
 * Samples are produced from a seeded mt19937_64 with an explicit
 * bits-to-double mapping, so the stream is reproducible independent of the
 * standard library's distribution implementations. Single-owner: concurrent
 * simulations each construct their own stream.
 */
class NoiseStream {
 public:
  explicit NoiseStream(const NoiseSpec& spec);

  double next();

 private:
  double uniform01();  // [0, 1)

  NoiseSpec spec_;
  std::mt19937_64 engine_;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

}  // namespace ichain
