#include "ichain/signal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ichain {

AnalyticSignal AnalyticSignal::sinusoid(double amplitude, double omega, double phase) {
  AnalyticSignal s;
  s.kind_ = Kind::Sinusoid;
  s.amplitude_ = amplitude;
  s.omega_ = omega;
  s.phase_ = phase;
  return s;
}

AnalyticSignal AnalyticSignal::polynomial(std::vector<double> coeffs) {
  AnalyticSignal s;
  s.kind_ = Kind::Polynomial;
  s.coeffs_ = std::move(coeffs);
  return s;
}

AnalyticSignal AnalyticSignal::constant(double level) {
  AnalyticSignal s;
  s.kind_ = Kind::Constant;
  s.level_ = level;
  return s;
}

AnalyticSignal AnalyticSignal::sum(std::vector<AnalyticSignal> terms) {
  AnalyticSignal s;
  s.kind_ = Kind::Sum;
  s.terms_ = std::move(terms);
  return s;
}

double AnalyticSignal::eval(double t, int k) const {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  switch (kind_) {
    case Kind::Sinusoid: {
      // d^k/dt^k [A sin(wt+p)] = A w^k * {sin, cos, -sin, -cos}[k mod 4](wt+p).
      // Branching on k mod 4 keeps exact zeros exact (no k*pi/2 phase rounding).
      const double arg = omega_ * t + phase_;
      const double scale = amplitude_ * std::pow(omega_, k);
      switch (k & 3) {
        case 0: return scale * std::sin(arg);
        case 1: return scale * std::cos(arg);
        case 2: return -scale * std::sin(arg);
        default: return -scale * std::cos(arg);
      }
    }
    case Kind::Polynomial: {
      // p^(k)(t) = sum_{j>=k} c_j * j!/(j-k)! * t^(j-k), evaluated by Horner.
      const int deg = static_cast<int>(coeffs_.size()) - 1;
      if (k > deg) return 0.0;
      double acc = 0.0;
      for (int j = deg; j >= k; --j) {
        double fall = 1.0;
        for (int m = 0; m < k; ++m) fall *= static_cast<double>(j - m);
        acc = acc * t + coeffs_[static_cast<std::size_t>(j)] * fall;
      }
      return acc;
    }
    case Kind::Constant:
      return k == 0 ? level_ : 0.0;
    case Kind::Sum: {
      double acc = 0.0;
      for (const auto& term : terms_) acc += term.eval(t, k);
      return acc;
    }
  }
  return 0.0;
}

std::string AnalyticSignal::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Sinusoid:
      os << "sinusoid(A=" << amplitude_ << ", w=" << omega_ << ", phi=" << phase_ << ")";
      break;
    case Kind::Polynomial: {
      os << "polynomial(";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << " ";
        os << coeffs_[i];
      }
      os << ")";
      break;
    }
    case Kind::Constant:
      os << "constant(" << level_ << ")";
      break;
    case Kind::Sum: {
      os << "sum(";
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        os << terms_[i].describe();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

NoiseSpec NoiseSpec::none() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::uniform_bounded(double bound, std::uint64_t seed) {
  if (!(bound >= 0.0)) throw std::invalid_argument("uniform noise bound must be >= 0");
  NoiseSpec spec;
  spec.kind = Kind::UniformBounded;
  spec.bound = bound;
  spec.seed = seed;
  return spec;
}

NoiseSpec NoiseSpec::gaussian(double stddev, std::uint64_t seed) {
  if (!(stddev >= 0.0)) throw std::invalid_argument("gaussian noise stddev must be >= 0");
  NoiseSpec spec;
  spec.kind = Kind::Gaussian;
  spec.stddev = stddev;
  spec.seed = seed;
  return spec;
}

NoiseStream::NoiseStream(const NoiseSpec& spec) : spec_(spec), engine_(spec.seed) {}

double NoiseStream::uniform01() {
  // 53 random bits -> double in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NoiseStream::next() {
  switch (spec_.kind) {
    case NoiseSpec::Kind::None:
      return 0.0;
    case NoiseSpec::Kind::UniformBounded:
      // (2u - 1) in (-1, 1]; |sample| <= bound holds for every draw.
      return spec_.bound * (2.0 * uniform01() - 1.0);
    case NoiseSpec::Kind::Gaussian: {
      if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
      }
      // Box-Muller on the hand-rolled uniforms keeps the stream portable.
      double u1 = uniform01();
      while (u1 <= 0.0) u1 = uniform01();
      const double u2 = uniform01();
      const double mag = std::sqrt(-2.0 * std::log(u1));
      const double two_pi = 6.283185307179586476925286766559;
      cached_gaussian_ = spec_.stddev * mag * std::sin(two_pi * u2);
      has_cached_gaussian_ = true;
      return spec_.stddev * mag * std::cos(two_pi * u2);
    }
  }
  return 0.0;
}

}  // namespace ichain
