#include "svc/geometry.hpp"

#include <cmath>
#include <string>

#include "svc/error.hpp"

namespace svc {
namespace {

// Fraction removed at stage g and the fraction kept, (1 - rho^-e).
// The kept part switches to expm1 when most of the segment is removed.
struct StageFactors {
  double removed;
  double kept;
};

StageFactors stage_factors(const PotentialSpec& spec, int g) {
  const double e = spec.exponent(g);
  const double removed = std::pow(spec.rho, -e);
  const double kept = removed < 0.5 ? 1.0 - removed : -std::expm1(-e * std::log(spec.rho));
  return {removed, kept};
}

void require_stage_index(const PotentialSpec& spec, int g, const char* what) {
  if (g < 0 || g > spec.stage) {
    throw InvalidArgument(std::string(what) + ": stage index " + std::to_string(g) +
                          " outside [0, " + std::to_string(spec.stage) + "]");
  }
}

void require_spacing_index(const PotentialSpec& spec, int p) {
  if (p < 1 || p > spec.stage) {
    throw InvalidArgument("spacing index p=" + std::to_string(p) + " outside [1, " +
                          std::to_string(spec.stage) + "]");
  }
}

}  // namespace

void PotentialSpec::validate() const {
  if (!(rho > 1.0) || !std::isfinite(rho)) {
    throw InvalidArgument("rho must be a finite real > 1, got " + std::to_string(rho));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw InvalidArgument("L must be a finite real > 0, got " + std::to_string(L));
  }
  if (stage < 0) {
    throw InvalidArgument("stage G must be >= 0, got " + std::to_string(stage));
  }
  if (!std::isfinite(V)) {
    throw InvalidArgument("V must be finite");
  }
  if (exponent_poly.empty() && !std::isfinite(n)) {
    throw InvalidArgument("n must be finite");
  }
  for (double a : exponent_poly) {
    if (!std::isfinite(a)) throw InvalidArgument("exponent polynomial coefficients must be finite");
  }
}

double PotentialSpec::exponent(int g) const {
  if (exponent_poly.empty()) return std::pow(static_cast<double>(g), n);
  // Horner from the highest coefficient.
  double acc = 0.0;
  for (auto it = exponent_poly.rbegin(); it != exponent_poly.rend(); ++it) {
    acc = acc * g + *it;
  }
  return acc;
}

double segment_length(const PotentialSpec& spec, int g) {
  spec.validate();
  require_stage_index(spec, g, "segment_length");
  double length = spec.L;
  for (int j = 1; j <= g; ++j) {
    length = 0.5 * length * stage_factors(spec, j).kept;
  }
  return length;
}

double q_pochhammer(double x, double y, int p) {
  if (p < 0) throw InvalidArgument("q_pochhammer: p must be >= 0");
  double product = 1.0;
  double power = 1.0;
  for (int j = 0; j < p; ++j) {
    product *= 1.0 - x * power;
    power *= y;
  }
  return product;
}

SegmentLayout build_layout(const PotentialSpec& spec, LayoutDetail detail) {
  spec.validate();
  const int G = spec.stage;

  SegmentLayout layout;
  layout.stage = G;
  layout.L = spec.L;
  layout.l.assign(G + 1, 0.0);
  layout.d.assign(G + 1, 0.0);
  layout.s.assign(G + 1, 0.0);
  layout.l[0] = spec.L;

  for (int g = 1; g <= G; ++g) {
    const double e = spec.exponent(g);
    const auto [removed, kept] = stage_factors(spec, g);
    if (!(e > 0.0) || !(kept > 0.0)) {
      throw InvalidArgument("stage " + std::to_string(g) + " removes the whole segment (exponent " +
                            std::to_string(e) + ")");
    }
    layout.d[g] = layout.l[g - 1] * removed;
    layout.l[g] = 0.5 * layout.l[g - 1] * kept;
    if (!(layout.l[g] > 0.0)) {
      throw InvalidArgument("segment length underflows to zero at stage " + std::to_string(g));
    }
  }
  // s_p pairs with stage G+1-p: the copies of block V_{p-1} start l_g + d_g apart.
  for (int p = 1; p <= G; ++p) {
    const int g = G + 1 - p;
    layout.s[p] = layout.l[g] + layout.d[g];
  }

  if (detail == LayoutDetail::kWithIntervals) {
    if (G > SegmentLayout::kMaxEnumeratedStage) {
      throw InvalidArgument("explicit intervals are limited to G <= " +
                            std::to_string(SegmentLayout::kMaxEnumeratedStage));
    }
    const std::size_t count = std::size_t{1} << G;
    layout.intervals.resize(count);
    const double width = layout.l[G];
    for (std::size_t i = 0; i < count; ++i) {
      // Bit (G-g) of i selects the right child at stage g.
      double start = 0.0;
      for (int g = 1; g <= G; ++g) {
        if ((i >> (G - g)) & 1U) start += layout.l[g] + layout.d[g];
      }
      layout.intervals[i] = {start, start + width};
    }
  }
  return layout;
}

double spacing(const PotentialSpec& spec, int p) {
  spec.validate();
  require_spacing_index(spec, p);
  const int g = spec.stage + 1 - p;
  const double upper = segment_length(spec, g - 1);
  return segment_length(spec, g) + upper * stage_factors(spec, g).removed;
}

double spacing_product_form(const PotentialSpec& spec, int p) {
  spec.validate();
  require_spacing_index(spec, p);
  const int g = spec.stage + 1 - p;
  double product = 1.0;
  for (int j = 1; j <= spec.stage - p; ++j) product *= stage_factors(spec, j).kept;
  return std::ldexp(spec.L, -g) * (1.0 + stage_factors(spec, g).removed) * product;
}

double spacing_half_form(const PotentialSpec& spec, int p) {
  spec.validate();
  require_spacing_index(spec, p);
  const int g = spec.stage + 1 - p;
  return 0.5 * segment_length(spec, g - 1) * (1.0 + stage_factors(spec, g).removed);
}

double measured_spacing(const SegmentLayout& layout, int p) {
  if (p < 1 || p > layout.stage) throw InvalidArgument("measured_spacing: p out of range");
  if (!layout.has_intervals()) throw InvalidArgument("measured_spacing: layout has no intervals");
  const std::size_t block = std::size_t{1} << (p - 1);
  return layout.intervals[block].start - layout.intervals[0].start;
}

}  // namespace svc
