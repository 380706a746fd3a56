#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace svc {

/// Real number stored as mantissa * 2^exponent with a 64-bit exponent, so
/// products of many large Chebyshev arguments never overflow. Only the
/// operations the Omega recursion needs are provided.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double value) { assign(value, 0); }  // NOLINT(google-explicit-constructor)

  /// e^{log_magnitude} * sign, without forming e^{log_magnitude}.
  static ExtendedReal from_log(double log_magnitude, double sign = 1.0) {
    if (log_magnitude == -std::numeric_limits<double>::infinity()) return ExtendedReal();
    const double log2_value = log_magnitude / std::log(2.0);
    const double whole = std::floor(log2_value);
    ExtendedReal out;
    out.assign(std::copysign(std::exp2(log2_value - whole), sign),
               static_cast<std::int64_t>(whole));
    return out;
  }

  bool is_zero() const { return mantissa_ == 0.0; }
  double mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }

  double log10_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log10(std::abs(mantissa_)) + static_cast<double>(exponent_) * std::log10(2.0);
  }

  /// Nearest double; overflows to +-inf and underflows to 0 as usual.
  double to_double() const {
    if (exponent_ > 4096) return std::copysign(std::numeric_limits<double>::infinity(), mantissa_);
    if (exponent_ < -4096) return std::copysign(0.0, mantissa_);
    return std::ldexp(mantissa_, static_cast<int>(exponent_));
  }

  friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
    ExtendedReal out;
    out.assign(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
    return out;
  }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ExtendedReal& big = a.exponent_ >= b.exponent_ ? a : b;
    const ExtendedReal& small = a.exponent_ >= b.exponent_ ? b : a;
    const std::int64_t shift = big.exponent_ - small.exponent_;
    if (shift > 80) return big;
    ExtendedReal out;
    out.assign(big.mantissa_ + std::ldexp(small.mantissa_, -static_cast<int>(shift)),
               big.exponent_);
    return out;
  }

  friend ExtendedReal operator-(const ExtendedReal& a) {
    ExtendedReal out = a;
    out.mantissa_ = -out.mantissa_;
    return out;
  }

  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }

  ExtendedReal& operator*=(const ExtendedReal& o) { return *this = *this * o; }
  ExtendedReal& operator+=(const ExtendedReal& o) { return *this = *this + o; }
  ExtendedReal& operator-=(const ExtendedReal& o) { return *this = *this - o; }

 private:
  void assign(double value, std::int64_t exponent) {
    if (value == 0.0 || !std::isfinite(value)) {
      mantissa_ = value;
      exponent_ = 0;
      return;
    }
    int e = 0;
    mantissa_ = std::frexp(value, &e);
    exponent_ = exponent + e;
  }

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

}  // namespace svc
