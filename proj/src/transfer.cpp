#include "svc/transfer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "svc/error.hpp"

namespace svc {
namespace {

constexpr double kSeriesThreshold = 1e-4;

// cos(kappa w) and sin(kappa w)/kappa are entire in kappa^2, hence real for
// real E - V. Both are returned multiplied by e^{-scale}.
struct BarrierKernel {
  double cos_part;
  double sinc_part;
  double scale;
};

BarrierKernel barrier_kernel(double kappa_sq, double width) {
  const double x = kappa_sq * width * width;
  if (std::abs(x) < kSeriesThreshold * kSeriesThreshold) {
    const double c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
    const double s = width * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
    return {c, s, 0.0};
  }
  if (kappa_sq > 0.0) {
    const double kappa = std::sqrt(kappa_sq);
    return {std::cos(kappa * width), std::sin(kappa * width) / kappa, 0.0};
  }
  // Below the barrier: cosh and sinh, scaled by e^{-q w}.
  const double q = std::sqrt(-kappa_sq);
  const double s = q * width;
  const double decay = std::exp(-2.0 * s);
  return {0.5 * (1.0 + decay), -0.5 * std::expm1(-2.0 * s) / q, s};
}

}  // namespace

double TransferMatrix::transmission() const { return 1.0 / (1.0 + std::norm(m12)); }

double TransferMatrix::reflection() const {
  const double r = std::norm(m12);
  return r / (1.0 + r);
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

TransferMatrix compose(const TransferMatrix& left, const TransferMatrix& right) {
  return left * right;
}

WaveNumbers wave_numbers(double E, double V) {
  if (!(E > 0.0) || !std::isfinite(E)) {
    throw InvalidArgument("energy must be > 0 for a propagating incident wave, got " +
                          std::to_string(E));
  }
  WaveNumbers w;
  w.k = std::sqrt(E);
  w.kappa = std::sqrt(Complex(E - V, 0.0));
  if (w.kappa == Complex(0.0, 0.0)) {
    const double inf = std::numeric_limits<double>::infinity();
    w.tau = w.eps_plus = w.eps_minus = Complex(inf, 0.0);
    return w;
  }
  w.tau = w.k / w.kappa;
  w.eps_plus = 0.5 * (w.tau + 1.0 / w.tau);
  w.eps_minus = 0.5 * (w.tau - 1.0 / w.tau);
  return w;
}

ScaledTransferMatrix barrier_matrix_scaled(double E, double V, double width) {
  if (!(width >= 0.0)) throw InvalidArgument("barrier width must be >= 0");
  const double k = wave_numbers(E, V).k;
  const double kappa_sq = E - V;
  const auto kernel = barrier_kernel(kappa_sq, width);

  // eps+- sin(kappa w) = (k^2 +- kappa^2)/(2k) * sin(kappa w)/kappa
  const double eps_plus_sin = kernel.sinc_part * (E + kappa_sq) / (2.0 * k);
  const double eps_minus_sin = kernel.sinc_part * V / (2.0 * k);

  const Complex phase = std::polar(1.0, k * width);
  ScaledTransferMatrix out;
  out.log_scale = kernel.scale;
  out.scaled.m11 = Complex(kernel.cos_part, -eps_plus_sin) * phase;
  out.scaled.m12 = Complex(0.0, eps_minus_sin);
  out.scaled.m21 = Complex(0.0, -eps_minus_sin);
  out.scaled.m22 = Complex(kernel.cos_part, eps_plus_sin) * std::conj(phase);
  return out;
}

TransferMatrix barrier_matrix(double E, double V, double width) {
  auto [m, scale] = barrier_matrix_scaled(E, V, width);
  if (scale == 0.0) return m;
  const double factor = std::exp(scale);
  return {m.m11 * factor, m.m12 * factor, m.m21 * factor, m.m22 * factor};
}

TransferMatrix gap_matrix(double k, double width) {
  if (!(width >= 0.0)) throw InvalidArgument("gap width must be >= 0");
  const Complex phase = std::polar(1.0, k * width);
  return {phase, Complex(0.0, 0.0), Complex(0.0, 0.0), std::conj(phase)};
}

TransferMatrix translate(const TransferMatrix& m, double k, double offset) {
  // diag(e^{-ika}, e^{ika}) M diag(e^{ika}, e^{-ika})
  const Complex phase = std::polar(1.0, k * offset);
  const Complex twice = phase * phase;
  return {m.m11, m.m12 * std::conj(twice), m.m21 * twice, m.m22};
}

}  // namespace svc
