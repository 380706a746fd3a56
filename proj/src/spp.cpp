#include "svc/spp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "svc/error.hpp"
#include "svc/extended_real.hpp"

namespace svc {
namespace {

constexpr double kGammaTolerance = 1e-12;

using Wide = long double;

void require_phase_index(const SegmentLayout& layout, int q, const char* what) {
  if (q < 1 || q > layout.stage) {
    throw InvalidArgument(std::string(what) + ": index " + std::to_string(q) + " outside [1, " +
                          std::to_string(layout.stage) + "]");
  }
}

// Omega recursion over any field-like Real (long double or ExtendedReal).
// cos1[q] = cos(theta - k gamma1(q)), cos2[q * stride + r] = cos(k gamma2(q, r)).
template <typename Real>
std::vector<Real> omega_recursion(const Real& abs_m22, const std::vector<Wide>& cos1,
                                  const std::vector<Wide>& cos2, int G) {
  const std::size_t stride = static_cast<std::size_t>(G) + 1;
  std::vector<Real> omega(stride, Real(0.0));
  Real running(1.0);  // prod_{p<q} Omega_p
  for (int q = 1; q <= G; ++q) {
    Real value = Real(std::ldexp(cos1[q], q - 1)) * abs_m22 * running;
    Real tail(1.0);  // prod_{r<p<q} Omega_p, grown as r decreases
    for (int r = q - 1; r >= 1; --r) {
      value -= Real(std::ldexp(cos2[q * stride + r], q - r - 1)) * tail;
      tail *= omega[r];
    }
    omega[q] = value;
    running *= value;
  }
  return omega;
}

struct UnitCellPolar {
  Wide theta;
  Wide abs_m22;
  Wide norm_m12;
};

// Unit barrier in polar form, unscaled. Overflows to inf below a thick barrier.
UnitCellPolar unit_cell_polar(double E, double V, double width) {
  const Wide k = std::sqrt(Wide(E));
  const Wide kappa_sq = Wide(E) - Wide(V);
  const Wide w = width;
  const Wide x = kappa_sq * w * w;
  Wide c, sinc;
  if (std::abs(x) < 1e-8L) {
    c = 1.0L - x / 2.0L + x * x / 24.0L - x * x * x / 720.0L;
    sinc = w * (1.0L - x / 6.0L + x * x / 120.0L - x * x * x / 5040.0L);
  } else if (kappa_sq > 0.0L) {
    const Wide kappa = std::sqrt(kappa_sq);
    c = std::cos(kappa * w);
    sinc = std::sin(kappa * w) / kappa;
  } else {
    const Wide q = std::sqrt(-kappa_sq);
    c = std::cosh(q * w);
    sinc = std::sinh(q * w) / q;
  }
  const Wide eps_plus_sin = sinc * (Wide(E) + kappa_sq) / (2.0L * k);
  const Wide eps_minus_sin = sinc * Wide(V) / (2.0L * k);
  const Wide norm_m12 = eps_minus_sin * eps_minus_sin;
  const Wide theta = std::remainder(std::atan2(eps_plus_sin, c) - k * w, 2.0L * std::numbers::pi_v<Wide>);
  return {theta, std::sqrt(1.0L + norm_m12), norm_m12};
}

}  // namespace

ScatteringPoint point_from_reflection_ratio(double k, double x) {
  ScatteringPoint p;
  p.k = k;
  p.T = 1.0 / (1.0 + x);
  p.R = x / (1.0 + x);
  p.log10_T = -std::log1p(x) / std::log(10.0);
  return p;
}

ScatteringPoint point_from_reflection_ratio(double k, const ExtendedReal& x) {
  const double direct = x.to_double();
  if (std::isfinite(direct)) return point_from_reflection_ratio(k, direct);
  // 1 + x == x at this magnitude.
  ScatteringPoint p;
  p.k = k;
  p.log10_T = -x.log10_abs();
  p.T = std::pow(10.0, p.log10_T);
  p.R = 1.0;
  p.underflow = p.T < std::numeric_limits<double>::min();
  if (p.underflow) p.T = 0.0;
  return p;
}

double chebyshev_U(int N, double x) {
  if (N < -1) throw InvalidArgument("chebyshev_U: N must be >= -1");
  if (N == -1) return 0.0;
  double previous = 0.0;  // U_{-1}
  double current = 1.0;   // U_0
  for (int j = 0; j < N; ++j) {
    const double next = 2.0 * x * current - previous;
    previous = current;
    current = next;
  }
  return current;
}

double gamma1(const SegmentLayout& layout, int q) {
  require_phase_index(layout, q, "gamma1");
  const int G = layout.stage;
  double sum_form = -layout.s[q];
  for (int p = 1; p < q; ++p) sum_form += layout.s[p];
  const double closed_form = -(layout.l[G] + layout.d[G - q + 1]);
  if (std::abs(sum_form - closed_form) > kGammaTolerance * layout.L) {
    throw ConsistencyError("gamma1(" + std::to_string(q) + "): sum form " +
                           std::to_string(sum_form) + " disagrees with closed form " +
                           std::to_string(closed_form));
  }
  return closed_form;
}

double gamma2(const SegmentLayout& layout, int q, int r) {
  require_phase_index(layout, q, "gamma2");
  require_phase_index(layout, r, "gamma2");
  if (r >= q) throw InvalidArgument("gamma2 requires r < q");
  const int G = layout.stage;
  return layout.d[G - r + 1] - layout.d[G - q + 1];
}

struct SvcEngine::Evaluation {
  double k = 0.0;
  double theta = 0.0;
  double abs_m22 = 1.0;
  bool extended = false;
  std::vector<double> omega;
  std::vector<double> log10_abs_omega;
  ScatteringPoint point;
};

SvcEngine::SvcEngine(const PotentialSpec& spec)
    : SvcEngine(spec, build_layout(spec, LayoutDetail::kClosedFormOnly)) {}

SvcEngine::SvcEngine(const PotentialSpec& spec, SegmentLayout layout)
    : spec_(spec), layout_(std::move(layout)) {
  spec_.validate();
  if (layout_.stage != spec_.stage) {
    throw InvalidArgument("layout stage does not match the potential stage");
  }
  const int G = spec_.stage;
  const std::size_t stride = static_cast<std::size_t>(G) + 1;
  gamma1_.assign(stride, 0.0);
  gamma2_.assign(stride * stride, 0.0);
  for (int q = 1; q <= G; ++q) {
    gamma1_[q] = gamma1(layout_, q);
    for (int r = 1; r < q; ++r) gamma2_[q * stride + r] = gamma2(layout_, q, r);
  }
}

SvcEngine::Evaluation SvcEngine::evaluate(double E) const {
  if (!(E > 0.0) || !std::isfinite(E)) {
    throw InvalidArgument("energy must be > 0 for a propagating incident wave, got " + std::to_string(E));
  }
  const int G = spec_.stage;
  const std::size_t stride = static_cast<std::size_t>(G) + 1;
  const auto unit = unit_cell_polar(E, spec_.V, layout_.unit_width());
  const Wide k = std::sqrt(Wide(E));

  Evaluation ev;
  ev.k = std::sqrt(E);
  ev.theta = static_cast<double>(unit.theta);

  std::vector<Wide> cos1(stride, 0.0L);
  std::vector<Wide> cos2(stride * stride, 0.0L);
  for (int q = 1; q <= G; ++q) {
    cos1[q] = std::cos(unit.theta - k * gamma1_[q]);
    for (int r = 1; r < q; ++r) cos2[q * stride + r] = std::cos(k * gamma2_[q * stride + r]);
  }

  ev.omega.assign(G, 0.0);
  ev.log10_abs_omega.assign(G, 0.0);

  const auto omega = omega_recursion<Wide>(unit.abs_m22, cos1, cos2, G);
  Wide x = std::ldexp(unit.norm_m12, 2 * G);
  for (int q = 1; q <= G; ++q) x *= omega[q] * omega[q];
  constexpr Wide kDoubleMax = std::numeric_limits<double>::max();
  bool finite = std::abs(unit.abs_m22) <= kDoubleMax && x <= kDoubleMax;
  for (int q = 1; q <= G; ++q) finite = finite && std::abs(omega[q]) <= kDoubleMax;

  if (finite) {
    ev.abs_m22 = static_cast<double>(unit.abs_m22);
    for (int q = 1; q <= G; ++q) {
      ev.omega[q - 1] = static_cast<double>(omega[q]);
      ev.log10_abs_omega[q - 1] = static_cast<double>(std::log10(std::abs(omega[q])));
    }
    ev.point = point_from_reflection_ratio(ev.k, static_cast<double>(x));
    return ev;
  }

  // Exponent range exhausted: redo the unit cell with an explicit scale.
  ev.extended = true;
  const auto [scaled, log_scale] = barrier_matrix_scaled(E, spec_.V, layout_.unit_width());
  if (!std::isfinite(unit.theta)) {
    ev.theta = std::arg(scaled.m22);
    for (int q = 1; q <= G; ++q) cos1[q] = std::cos(Wide(ev.theta) - k * gamma1_[q]);
  }
  const ExtendedReal big_m22 = ExtendedReal(std::abs(scaled.m22)) * ExtendedReal::from_log(log_scale);
  const auto big_omega = omega_recursion<ExtendedReal>(big_m22, cos1, cos2, G);
  ExtendedReal big_x = ExtendedReal(std::ldexp(std::norm(scaled.m12), 2 * G)) *
                       ExtendedReal::from_log(2.0 * log_scale);
  for (int q = 1; q <= G; ++q) {
    big_x *= big_omega[q] * big_omega[q];
    ev.omega[q - 1] = big_omega[q].to_double();
    ev.log10_abs_omega[q - 1] = big_omega[q].log10_abs();
  }
  ev.abs_m22 = big_m22.to_double();
  ev.point = point_from_reflection_ratio(ev.k, big_x);
  return ev;
}

ScatteringPoint SvcEngine::at_energy(double E) const { return evaluate(E).point; }

BlochSequence SvcEngine::bloch(double E) const {
  auto ev = evaluate(E);
  BlochSequence seq;
  seq.omega = std::move(ev.omega);
  seq.log10_abs_omega = std::move(ev.log10_abs_omega);
  seq.gamma1.assign(gamma1_.begin() + 1, gamma1_.end());
  seq.theta = ev.theta;
  seq.abs_m22 = ev.abs_m22;
  seq.extended = ev.extended;
  return seq;
}

BlochSequence bloch_sequence(const PotentialSpec& spec, const SegmentLayout& layout, double E) {
  return SvcEngine(spec, layout).bloch(E);
}

ScatteringPoint transmission(const PotentialSpec& spec, double E) {
  return SvcEngine(spec).at_energy(E);
}

double transmission_general_spp(const TransferMatrix& unit, std::span<const int> repetitions,
                                std::span<const double> omega) {
  if (repetitions.size() != omega.size()) {
    throw InvalidArgument("transmission_general_spp: " + std::to_string(repetitions.size()) +
                          " repetition counts but " + std::to_string(omega.size()) +
                          " Chebyshev arguments");
  }
  double amplitude = std::abs(unit.m12);
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (repetitions[j] < 0) throw InvalidArgument("repetition counts must be >= 0");
    amplitude *= chebyshev_U(repetitions[j] - 1, omega[j]);
  }
  return 1.0 / (1.0 + amplitude * amplitude);
}

}  // namespace svc
