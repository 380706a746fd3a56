#pragma once

#include <span>
#include <vector>

#include "svc/geometry.hpp"
#include "svc/scattering_point.hpp"
#include "svc/transfer.hpp"

namespace svc {

/// Chebyshev polynomial of the second kind by the three-term recursion.
/// N = -1 gives 0.
double chebyshev_U(int N, double x);

/// Phase length gamma1(q) = -(l_G + d_{G-q+1}), 1 <= q <= G. The value is
/// cross-checked against sum_{p<q} s_p - s_q and a ConsistencyError is
/// thrown if the two disagree by more than 1e-12 L.
double gamma1(const SegmentLayout& layout, int q);

/// Phase length gamma2(q, r) = d_{G-r+1} - d_{G-q+1}, 1 <= r < q <= G.
double gamma2(const SegmentLayout& layout, int q, int r);

/// Chebyshev arguments Omega_1..Omega_G of the nested two-fold repetition.
struct BlochSequence {
  std::vector<double> omega;            // Omega_q at omega[q-1]; may hold +-inf if `extended`
  std::vector<double> log10_abs_omega;  // always finite unless Omega_q == 0
  std::vector<double> gamma1;           // gamma1(q) at gamma1[q-1]
  double theta = 0.0;                   // arg m22 of the unit barrier
  double abs_m22 = 1.0;                 // may be +inf if `extended`
  bool extended = false;                // recursion needed the extended exponent range
};

/// Closed-form scattering through SVC(rho, n) at stage G.
///
/// The unit cell is one barrier of width l_G and height V. Omega_q follows
///
///   Omega_q = 2^{q-1} |m22| cos(theta - k gamma1(q)) prod_{p<q} Omega_p
///             - sum_{r<q} 2^{q-r-1} cos(k gamma2(q,r)) prod_{r<p<q} Omega_p
///
/// and T = 1/(1 + 4^G |m12|^2 prod Omega_q^2). Construction precomputes the
/// geometry; evaluation is O(G^2) per energy and thread-safe.
class SvcEngine {
 public:
  explicit SvcEngine(const PotentialSpec& spec);

  /// Uses an externally built layout (must describe the same stage).
  SvcEngine(const PotentialSpec& spec, SegmentLayout layout);

  ScatteringPoint at_energy(double E) const;
  ScatteringPoint at_wave_number(double k) const { return at_energy(k * k); }
  BlochSequence bloch(double E) const;

  const PotentialSpec& spec() const { return spec_; }
  const SegmentLayout& layout() const { return layout_; }

 private:
  struct Evaluation;
  Evaluation evaluate(double E) const;

  PotentialSpec spec_;
  SegmentLayout layout_;
  std::vector<double> gamma1_;  // [q], q = 1..G
  std::vector<double> gamma2_;  // [q * (G + 1) + r]
};

BlochSequence bloch_sequence(const PotentialSpec& spec, const SegmentLayout& layout, double E);

/// T_G(k) at energy E = k^2. Throws InvalidArgument for E <= 0.
ScatteringPoint transmission(const PotentialSpec& spec, double E);

/// T(N_1..N_G) = 1/(1 + [|m12| prod_j U_{N_j - 1}(Omega_j)]^2).
double transmission_general_spp(const TransferMatrix& unit, std::span<const int> repetitions,
                                std::span<const double> omega);

}  // namespace svc
