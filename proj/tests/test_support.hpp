#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "svc/geometry.hpp"

namespace svc::testing {

// Random SVC(rho, n) draws over the ranges the closed form is validated on.
struct SpecSampler {
  explicit SpecSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  PotentialSpec spec(int max_stage) {
    PotentialSpec s;
    s.rho = uniform(1.2, 5.0);
    s.n = uniform(-0.75, 2.0);
    s.stage = integer(0, max_stage);
    s.V = uniform(1.0, 50.0);
    s.L = uniform(1.0, 20.0);
    return s;
  }

  std::mt19937_64 rng;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace svc::testing
