#pragma once

#include <span>
#include <vector>

#include "svc/geometry.hpp"

namespace svc {

/// Height V_G = L V_0 / (2^G l_G) that keeps the total barrier area
/// 2^G l_G V_G equal to L V_0. `spec.V` is read as V_0.
double renormalized_height(const PotentialSpec& spec);

/// Copy of `spec` with V replaced by renormalized_height(spec).
PotentialSpec renormalized_spec(const PotentialSpec& spec);

/// R_G(k)/V_0^2 from the exact closed form at the renormalized height,
/// E = k^2. Returns 0 when V_0 = 0.
double reflection_scaled(const PotentialSpec& spec, double E);

/// Least-squares line through (log10 k, log10 R/V_0^2) at the local maxima of
/// R on a log-uniform grid.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t maxima = 0;
};

/// Requires points >= 50 and sqrt(V_G) < k_min < k_max. Throws DegenerateFit
/// when fewer than two usable maxima exist (e.g. R underflowed everywhere).
ScalingFit fit_scaling(const PotentialSpec& spec, double k_min, double k_max, int points);

struct Resonance {
  double k_center = 0.0;
  double width = 0.0;   // distance between the two T = threshold crossings
  double T_peak = 0.0;
};

struct ResonanceList {
  std::vector<Resonance> resonances;  // sorted by k_center
  double threshold = 0.0;
  bool trivially_transparent = false;  // V = 0: one entry spanning the range
};

/// Scans T on `grid` uniform points of [k_min, k_max], refines every local
/// maximum by golden-section search and keeps peaks with T >= threshold.
ResonanceList find_resonances(const PotentialSpec& spec, double k_min, double k_max,
                              double threshold, int grid);

/// sup over k_grid of |T(n = n_a) - T(n = n_b)| with everything else from `base`.
double saturation_metric(const PotentialSpec& base, double n_a, double n_b,
                         std::span<const double> k_grid);

/// Golden-section maximization of f on [a, b]; returns the abscissa.
template <typename Fn>
double golden_section_maximize(Fn&& f, double a, double b, double tolerance);

/// Points k_min + i (k_max - k_min)/(count - 1).
std::vector<double> linear_grid(double min, double max, int count);

/// Points k_min (k_max/k_min)^{i/(count-1)}.
std::vector<double> log_grid(double min, double max, int count);

}  // namespace svc

#include "svc/detail/golden_section.hpp"
