#pragma once

#include <complex>

namespace svc {

using Complex = std::complex<double>;

/// 2x2 complex transfer matrix in plane-wave amplitudes (A, B) of
/// psi = A e^{ikx} + B e^{-ikx}, global coordinates.
///
/// Orientation: M maps the amplitudes on the right of a region to those on
/// its left, (A_left, B_left) = M (A_right, B_right). Composition therefore
/// multiplies in spatial order: the region on the left comes first,
/// compose(left, right) = left * right.
struct TransferMatrix {
  Complex m11{1.0, 0.0};
  Complex m12{0.0, 0.0};
  Complex m21{0.0, 0.0};
  Complex m22{1.0, 0.0};

  static TransferMatrix identity() { return {}; }

  Complex det() const { return m11 * m22 - m12 * m21; }

  /// Transmission probability 1/(1 + |m12|^2) of a unimodular matrix.
  double transmission() const;

  /// Reflection probability |m12|^2/(1 + |m12|^2).
  double reflection() const;

  bool operator==(const TransferMatrix&) const = default;
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

/// Spatial composition: `left` occupies the region before `right`.
TransferMatrix compose(const TransferMatrix& left, const TransferMatrix& right);

/// Free wave number k = sqrt(E), inside wave number kappa = sqrt(E - V) on
/// the principal branch (Im kappa >= 0), tau = k/kappa and
/// eps_pm = (tau +- 1/tau)/2. At kappa = 0, tau and eps_pm are infinite.
struct WaveNumbers {
  double k = 0.0;
  Complex kappa{};
  Complex tau{};
  Complex eps_plus{};
  Complex eps_minus{};
};

/// Throws InvalidArgument when E <= 0.
WaveNumbers wave_numbers(double E, double V);

/// Rectangular barrier of height V on [-width/2, width/2] (centred at x = 0).
///
///   m11 = (cos kw - i eps+ sin kw) e^{ikw}     m12 =  i eps- sin kw
///   m21 = -i eps- sin kw                       m22 = (cos kw + i eps+ sin kw) e^{-ikw}
///
/// with kw short for kappa*width. When |kappa width| < 1e-4 the products
/// eps+- sin(kappa w) are evaluated from a Taylor series of sin(kappa w)/kappa
/// in kappa^2, so E = V is regular.
TransferMatrix barrier_matrix(double E, double V, double width);

/// Barrier matrix divided by e^{log_scale}, with log_scale = Im(kappa) width
/// (zero above the barrier). Stays finite for arbitrarily opaque barriers.
struct ScaledTransferMatrix {
  TransferMatrix scaled;
  double log_scale = 0.0;
};

ScaledTransferMatrix barrier_matrix_scaled(double E, double V, double width);

/// Free propagation diag(e^{ikw}, e^{-ikw}). gap_matrix(k, -a) M gap_matrix(k, a)
/// shifts a region described by M by a.
TransferMatrix gap_matrix(double k, double width);

/// Returns the region described by `m` shifted right by `offset`.
TransferMatrix translate(const TransferMatrix& m, double k, double offset);

}  // namespace svc
