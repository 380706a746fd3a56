#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace svc {

/// Parameters of a Smith-Volterra-Cantor potential of power n at stage G.
///
/// At stage g the central fraction rho^-exponent(g) of every remaining
/// segment is removed, with exponent(g) = g^n unless a polynomial
/// a0 + a1 g + ... + am g^m is supplied in `exponent_poly`, in which case
/// `n` is ignored. Units follow hbar = 2m = 1, so E = k^2.
struct PotentialSpec {
  double rho = 2.0;
  double n = 1.0;
  int stage = 0;
  double V = 10.0;
  double L = 10.0;
  std::vector<double> exponent_poly;

  /// Throws InvalidArgument unless rho > 1, L > 0, stage >= 0 and V finite.
  void validate() const;

  /// Removal exponent at stage g >= 1.
  double exponent(int g) const;

  bool operator==(const PotentialSpec&) const = default;
};

/// Half-open interval [start, end) occupied by one barrier.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double width() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

/// Explicit geometry of a stage-G potential.
///
/// Indexing follows the construction: `l[g]` for g = 0..G (l[0] = L),
/// `d[g]` and `s[p]` for g, p = 1..G with a placeholder 0 at index 0.
/// `intervals` lists the 2^G barriers left to right and is only filled
/// when G <= kMaxEnumeratedStage and enumeration was requested.
struct SegmentLayout {
  static constexpr int kMaxEnumeratedStage = 20;

  int stage = 0;
  double L = 0.0;
  std::vector<double> l;
  std::vector<double> d;
  std::vector<double> s;
  std::vector<Interval> intervals;

  double unit_width() const { return l.back(); }
  bool has_intervals() const { return !intervals.empty(); }
};

enum class LayoutDetail { kClosedFormOnly, kWithIntervals };

/// l_g = L/2^g * prod_{j=1..g} (1 - rho^-exponent(j)); requires 0 <= g <= stage.
double segment_length(const PotentialSpec& spec, int g);

/// Finite q-Pochhammer symbol prod_{j=0}^{p-1} (1 - x y^j). Empty product is 1.
double q_pochhammer(double x, double y, int p);

/// Builds l, d, s and (optionally) the explicit barrier intervals.
/// Throws InvalidArgument when any l_g <= 0, or when intervals are requested
/// for a stage above kMaxEnumeratedStage.
SegmentLayout build_layout(const PotentialSpec& spec,
                           LayoutDetail detail = LayoutDetail::kWithIntervals);

/// Super-period spacing s_p = l_{G+1-p} + l_{G-p} rho^-exponent(G+1-p), 1 <= p <= G.
double spacing(const PotentialSpec& spec, int p);

/// s_p as L/2^{G+1-p} (1 + rho^-exponent(G+1-p)) prod_{j=1}^{G-p} (1 - rho^-exponent(j)).
double spacing_product_form(const PotentialSpec& spec, int p);

/// s_p as l_{G-p}/2 (1 + rho^-exponent(G+1-p)).
double spacing_half_form(const PotentialSpec& spec, int p);

/// Distance between the left edges of the first two copies of the
/// level-(p-1) block, read off the enumerated intervals.
double measured_spacing(const SegmentLayout& layout, int p);

}  // namespace svc
