#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace qclab::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fractional part of omega * x in [-1/2, 1/2], with the rounding error of the
// product recovered by fma.
inline double product_cycles(double omega, double x) {
  const double p = omega * x;
  const double err = std::fma(omega, x, -p);
  return (p - std::nearbyint(p)) + err;
}

// exp(2 pi i t), reducing t modulo 1 first.
inline std::complex<double> cis_cycles(double t) {
  t -= std::nearbyint(t);
  const double angle = kTwoPi * t;
  return {std::cos(angle), std::sin(angle)};
}

// exp(w) - 1 without cancellation for small |w|.
inline std::complex<double> expm1(std::complex<double> w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qclab::detail
