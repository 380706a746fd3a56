#pragma once

#include "svc/extended_real.hpp"

namespace svc {

/// Transmission and reflection probabilities at one wave number.
///
/// `log10_T` is always meaningful. When T is below the smallest normal
/// double, `T` is reported as 0.0 with `underflow` set; it is never an
/// exact physical zero.
struct ScatteringPoint {
  double k = 0.0;
  double T = 1.0;
  double R = 0.0;
  double log10_T = 0.0;
  bool underflow = false;
};

/// Builds the point from x = |m12_total|^2 (T = 1/(1+x), R = x/(1+x)).
ScatteringPoint point_from_reflection_ratio(double k, double x);
ScatteringPoint point_from_reflection_ratio(double k, const ExtendedReal& x);

}  // namespace svc
