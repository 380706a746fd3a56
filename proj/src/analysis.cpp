#include "svc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svc/error.hpp"
#include "svc/parallel.hpp"
#include "svc/spp.hpp"

namespace svc {
namespace {

constexpr int kMaxBracketRetries = 8;
constexpr int kBisectionSteps = 200;

struct Peak {
  double k = 0.0;
  double T = 0.0;
};

// Refines a grid maximum inside [lo, hi]. If golden-section search lands
// below the best value already seen, the bracket is halved around that
// point and the search repeated.
Peak refine_peak(const SvcEngine& engine, double lo, double hi, Peak seed) {
  auto T = [&](double k) { return engine.at_wave_number(k).T; };
  Peak best = seed;
  for (int attempt = 0; attempt < kMaxBracketRetries; ++attempt) {
    const double tolerance = 1e-11 * std::max(1.0, std::abs(best.k));
    const double k = golden_section_maximize(T, lo, hi, tolerance);
    const double value = T(k);
    if (value >= best.T) return {k, value};
    const double half = 0.25 * (hi - lo);
    lo = std::max(lo, best.k - half);
    hi = std::min(hi, best.k + half);
  }
  return best;
}

// Crossing of T = threshold between `outside` (T below) and `inside` (T above).
double bisect_crossing(const SvcEngine& engine, double outside, double inside, double threshold) {
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (outside + inside);
    if (mid == outside || mid == inside) break;
    if (engine.at_wave_number(mid).T >= threshold) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (outside + inside);
}

void require_k_range(double k_min, double k_max, const char* what) {
  if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max)) {
    throw InvalidArgument(std::string(what) + ": need 0 < k_min < k_max, got [" +
                          std::to_string(k_min) + ", " + std::to_string(k_max) + "]");
  }
}

}  // namespace

std::vector<double> linear_grid(double min, double max, int count) {
  if (count < 2) throw InvalidArgument("grid needs at least 2 points");
  std::vector<double> out(count);
  const double step = (max - min) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = min + step * i;
  out.back() = max;
  return out;
}

std::vector<double> log_grid(double min, double max, int count) {
  if (count < 2) throw InvalidArgument("grid needs at least 2 points");
  if (!(min > 0.0) || !(max > 0.0)) throw InvalidArgument("log grid needs positive bounds");
  std::vector<double> out(count);
  const double ratio = std::log(max / min);
  for (int i = 0; i < count; ++i) out[i] = min * std::exp(ratio * i / (count - 1));
  out.front() = min;
  out.back() = max;
  return out;
}

double renormalized_height(const PotentialSpec& spec) {
  const double unit = segment_length(spec, spec.stage);
  return spec.L * spec.V / (std::ldexp(1.0, spec.stage) * unit);
}

PotentialSpec renormalized_spec(const PotentialSpec& spec) {
  PotentialSpec out = spec;
  out.V = renormalized_height(spec);
  return out;
}

double reflection_scaled(const PotentialSpec& spec, double E) {
  if (spec.V == 0.0) {
    if (!(E > 0.0)) throw InvalidArgument("energy must be > 0");
    return 0.0;
  }
  return transmission(renormalized_spec(spec), E).R / (spec.V * spec.V);
}

ScalingFit fit_scaling(const PotentialSpec& spec, double k_min, double k_max, int points) {
  if (points < 50) throw InvalidArgument("fit_scaling: need at least 50 grid points");
  require_k_range(k_min, k_max, "fit_scaling");
  if (spec.V == 0.0) throw DegenerateFit("fit_scaling: V_0 = 0 gives R = 0 everywhere");

  const PotentialSpec heightened = renormalized_spec(spec);
  if (heightened.V > 0.0 && !(k_min * k_min > heightened.V)) {
    throw InvalidArgument("fit_scaling: k_min must lie above sqrt(V_G) = " +
                          std::to_string(std::sqrt(heightened.V)));
  }
  const SvcEngine engine(heightened);
  const double v0_sq = spec.V * spec.V;
  const auto k = log_grid(k_min, k_max, points);
  const auto r = parallel_map(k.size(), [&](std::size_t i) {
    return engine.at_wave_number(k[i]).R / v0_sq;
  });

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] > 0.0 && r[i] > r[i - 1] && r[i] >= r[i + 1]) {
      xs.push_back(std::log10(k[i]));
      ys.push_back(std::log10(r[i]));
    }
  }
  if (xs.size() < 2) {
    throw DegenerateFit("fit_scaling: only " + std::to_string(xs.size()) +
                        " local maxima of R on the grid");
  }

  const double count = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    syy += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  if (sxx == 0.0) throw DegenerateFit("fit_scaling: maxima share one abscissa");

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.maxima = xs.size();
  return fit;
}

ResonanceList find_resonances(const PotentialSpec& spec, double k_min, double k_max,
                              double threshold, int grid) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("find_resonances: threshold must lie in (0, 1)");
  }
  if (grid < 2) throw InvalidArgument("find_resonances: grid needs at least 2 points");
  require_k_range(k_min, k_max, "find_resonances");

  ResonanceList list;
  list.threshold = threshold;
  if (spec.V == 0.0) {
    spec.validate();
    list.trivially_transparent = true;
    list.resonances.push_back({0.5 * (k_min + k_max), k_max - k_min, 1.0});
    return list;
  }

  const SvcEngine engine(spec);
  const auto k = linear_grid(k_min, k_max, grid);
  const auto t = parallel_map(k.size(), [&](std::size_t i) { return engine.at_wave_number(k[i]).T; });
  const double step = k[1] - k[0];
  const std::size_t last = k.size() - 1;

  std::vector<Peak> peaks;
  for (std::size_t i = 0; i <= last; ++i) {
    const bool rises = i == 0 || t[i] >= t[i - 1];
    const bool falls = i == last || t[i] >= t[i + 1];
    const bool strict = (i > 0 && t[i] > t[i - 1]) || (i < last && t[i] > t[i + 1]);
    if (!(rises && falls && strict)) continue;
    const double lo = k[i == 0 ? 0 : i - 1];
    const double hi = k[i == last ? last : i + 1];
    const Peak peak = refine_peak(engine, lo, hi, {k[i], t[i]});
    if (peak.T >= threshold) peaks.push_back(peak);
  }

  for (const auto& peak : peaks) {
    auto grid_index_below = [&](double x) {
      const auto j = static_cast<std::ptrdiff_t>(std::floor((x - k_min) / step));
      return std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(last));
    };
    // Walk outward over the grid to the nearest point below threshold, then bisect.
    std::ptrdiff_t j = grid_index_below(peak.k);
    if (k[j] >= peak.k) --j;
    while (j >= 0 && t[j] >= threshold) --j;
    const double left = j < 0 ? k_min : bisect_crossing(engine, k[j], peak.k, threshold);

    std::ptrdiff_t m = grid_index_below(peak.k) + 1;
    while (m <= static_cast<std::ptrdiff_t>(last) && t[m] >= threshold) ++m;
    const double right =
        m > static_cast<std::ptrdiff_t>(last) ? k_max : bisect_crossing(engine, k[m], peak.k, threshold);

    list.resonances.push_back({peak.k, right - left, peak.T});
  }

  std::sort(list.resonances.begin(), list.resonances.end(),
            [](const Resonance& a, const Resonance& b) { return a.k_center < b.k_center; });
  // Several grid maxima can refine onto the same peak.
  std::vector<Resonance> unique;
  for (const auto& r : list.resonances) {
    if (!unique.empty() && std::abs(r.k_center - unique.back().k_center) <=
                               1e-9 * std::max(1.0, r.k_center)) {
      if (r.T_peak > unique.back().T_peak) unique.back() = r;
      continue;
    }
    unique.push_back(r);
  }
  list.resonances = std::move(unique);
  return list;
}

double saturation_metric(const PotentialSpec& base, double n_a, double n_b,
                         std::span<const double> k_grid) {
  if (!(n_a > 0.0) || !(n_b > 0.0)) throw InvalidArgument("saturation_metric: n_a, n_b must be > 0");
  if (!base.exponent_poly.empty()) {
    throw InvalidArgument("saturation_metric: n is ignored when an exponent polynomial is set");
  }
  PotentialSpec spec_a = base;
  PotentialSpec spec_b = base;
  spec_a.n = n_a;
  spec_b.n = n_b;
  const SvcEngine engine_a(spec_a);
  const SvcEngine engine_b(spec_b);
  const auto diff = parallel_map(k_grid.size(), [&](std::size_t i) {
    return std::abs(engine_a.at_wave_number(k_grid[i]).T - engine_b.at_wave_number(k_grid[i]).T);
  });
  double sup = 0.0;
  for (double d : diff) sup = std::max(sup, d);
  return sup;
}

}  // namespace svc
