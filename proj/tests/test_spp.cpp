#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "svc/error.hpp"
#include "svc/oracle.hpp"
#include "svc/spp.hpp"
#include "test_support.hpp"

using namespace svc;
using svc::testing::SpecSampler;

namespace {

PotentialSpec make(double rho, double n, int G, double V, double L) {
  PotentialSpec s;
  s.rho = rho;
  s.n = n;
  s.stage = G;
  s.V = V;
  s.L = L;
  return s;
}

}  // namespace

TEST_CASE("Chebyshev polynomials of the second kind") {
  CHECK(chebyshev_U(-1, 0.3) == 0.0);
  CHECK(chebyshev_U(0, 0.3) == 1.0);
  CHECK(chebyshev_U(1, 0.3) == doctest::Approx(0.6));
  for (double x : {-1.3, -0.4, 0.0, 0.7, 2.5}) {
    CHECK(chebyshev_U(2, x) == doctest::Approx(4 * x * x - 1));
    CHECK(chebyshev_U(3, x) == doctest::Approx(8 * x * x * x - 4 * x));
  }
  // U_N(cos t) = sin((N+1)t)/sin t
  const double t = 0.37;
  CHECK(chebyshev_U(9, std::cos(t)) == doctest::Approx(std::sin(10 * t) / std::sin(t)).epsilon(1e-13));
  CHECK_THROWS_AS(chebyshev_U(-2, 0.1), InvalidArgument);
}

TEST_CASE("phase lengths") {
  const auto cantor = build_layout(make(3.0, 0.0, 2, 1.0, 1.0));
  CHECK(gamma1(cantor, 1) == doctest::Approx(-(1.0 / 9.0 + 1.0 / 9.0)));
  CHECK(gamma1(cantor, 2) == doctest::Approx(-(1.0 / 9.0 + 1.0 / 3.0)));
  CHECK(gamma2(cantor, 2, 1) == doctest::Approx(1.0 / 9.0 - 1.0 / 3.0));
  CHECK(gamma2(cantor, 2, 1) == doctest::Approx(-2.0 / 9.0));

  CHECK_THROWS_AS(gamma1(cantor, 0), InvalidArgument);
  CHECK_THROWS_AS(gamma1(cantor, 3), InvalidArgument);
  CHECK_THROWS_AS(gamma2(cantor, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(gamma2(cantor, 1, 2), InvalidArgument);

  auto broken = cantor;
  broken.s[1] += 0.01;
  CHECK_THROWS_AS(gamma1(broken, 2), ConsistencyError);
}

TEST_CASE("property: both gamma1 forms agree") {
  SpecSampler sampler(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto spec = sampler.spec(30);
    const auto layout = build_layout(spec, LayoutDetail::kClosedFormOnly);
    for (int q = 1; q <= spec.stage; ++q) {
      double sum_form = -layout.s[q];
      for (int p = 1; p < q; ++p) sum_form += layout.s[p];
      CHECK(std::abs(gamma1(layout, q) - sum_form) <= 1e-12 * spec.L);
    }
  }
}

TEST_CASE("Bloch sequence for G = 1 and G = 2") {
  const auto spec = make(2.5, 1.0, 2, 10.0, 4.0);
  const auto layout = build_layout(spec);
  const double E = 6.0;
  const double k = std::sqrt(E);
  const auto unit = barrier_matrix(E, spec.V, layout.unit_width());
  const double theta = std::arg(unit.m22);
  const double a = std::abs(unit.m22);

  const auto seq = bloch_sequence(spec, layout, E);
  REQUIRE(seq.omega.size() == 2);
  CHECK(seq.theta == doctest::Approx(theta));
  CHECK(seq.abs_m22 == doctest::Approx(a));
  const double w1 = a * std::cos(theta - k * gamma1(layout, 1));
  const double w2 = 2 * a * std::cos(theta - k * gamma1(layout, 2)) * w1 - std::cos(k * gamma2(layout, 2, 1));
  CHECK(seq.omega[0] == doctest::Approx(w1).epsilon(1e-13));
  CHECK(seq.omega[1] == doctest::Approx(w2).epsilon(1e-13));
  CHECK_FALSE(seq.extended);

  const double T = 1.0 / (1.0 + 16.0 * std::norm(unit.m12) * w1 * w1 * w2 * w2);
  CHECK(SvcEngine(spec).at_energy(E).T == doctest::Approx(T).epsilon(1e-13));

  auto single = make(2.5, 1.0, 1, 10.0, 4.0);
  const auto one = build_layout(single);
  const auto unit1 = barrier_matrix(E, single.V, one.unit_width());
  const double x = std::abs(unit1.m22) * std::cos(std::arg(unit1.m22) + k * one.s[1]);
  CHECK(bloch_sequence(single, one, E).omega[0] == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("frozen high-precision transmissions") {
  // 50-digit products of exact barrier matrices.
  const double e = std::numbers::e;
  CHECK(transmission(make(e, 1.0, 5, 10.0, 10.0), 25.0).T ==
        doctest::Approx(0.90299040450839583858).epsilon(1e-12));
  CHECK(transmission(make(e, 1.0, 2, 10.0, 10.0), 25.0).T ==
        doctest::Approx(0.88731913711816207676).epsilon(1e-12));
  CHECK(transmission(make(e, 1.0, 3, 10.0, 10.0), 3.3 * 3.3).T ==
        doctest::Approx(0.018391318975085925726).epsilon(1e-10));
  CHECK(transmission(make(2.5, -0.5, 3, 20.0, 7.0), 4.0).T ==
        doctest::Approx(0.12474063090992415095).epsilon(1e-11));
  // Thirteen nested stages with nearly cancelling Omega_q.
  const auto deep = make(2.5847699823589849, 1.0, 13, 44.631822699238739, 15.941945773863655);
  const double k = 18.338535923958908;
  CHECK(std::abs(transmission(deep, k * k).T - 0.91856677747462434854) < 2e-13);
}

TEST_CASE("stage 0 is a single barrier") {
  const auto spec = make(2.0, 1.0, 0, 10.0, 3.0);
  for (double E : {0.5, 9.0, 10.0, 11.0, 70.0}) {
    CHECK(transmission(spec, E).T == doctest::Approx(barrier_matrix(E, 10.0, 3.0).transmission()).epsilon(1e-14));
  }
}

TEST_CASE("general SPP formula") {
  const auto unit = barrier_matrix(5.0, 8.0, 0.3);
  const std::array<int, 2> twofold{2, 2};
  const std::array<double, 2> omega{0.4, -1.7};
  const double u = 2 * 0.4 * 2 * -1.7;
  CHECK(transmission_general_spp(unit, twofold, omega) ==
        doctest::Approx(1.0 / (1.0 + std::norm(unit.m12) * u * u)));

  const std::array<int, 2> counts{1, 3};
  const double u3 = chebyshev_U(2, -1.7);
  CHECK(transmission_general_spp(unit, counts, omega) ==
        doctest::Approx(1.0 / (1.0 + std::norm(unit.m12) * u3 * u3)));

  // N copies equally spaced by s reduce to U_{N-1}(|m22| cos(theta + ks)).
  const double k = std::sqrt(5.0), s = 0.9;
  TransferMatrix chain = TransferMatrix::identity();
  for (int i = 0; i < 5; ++i) chain = compose(chain, translate(unit, k, i * s));
  const std::array<int, 1> five{5};
  const std::array<double, 1> x{std::abs(unit.m22) * std::cos(std::arg(unit.m22) + k * s)};
  CHECK(transmission_general_spp(unit, five, x) == doctest::Approx(chain.transmission()).epsilon(1e-12));

  const std::array<int, 1> one{1};
  CHECK_THROWS_AS(transmission_general_spp(unit, one, omega), InvalidArgument);
}

TEST_CASE("property: closed form equals the brute-force product") {
  SpecSampler sampler(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = sampler.spec(7);
    const SvcEngine engine(spec);
    const auto chain = chain_from_layout(build_layout(spec));
    for (int i = 0; i < 40; ++i) {
      const double k = sampler.uniform(0.05, 3.0 * std::sqrt(spec.V));
      const auto closed = engine.at_wave_number(k);
      const auto brute = brute_force_T(chain, spec.V, k * k);
      CAPTURE(spec.rho);
      CAPTURE(spec.n);
      CAPTURE(spec.stage);
      CAPTURE(k);
      CHECK(std::abs(closed.T - brute.T) <= 1e-9);
      CHECK(std::abs(closed.T + closed.R - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("property: n = 1 layout built from q-Pochhammer symbols") {
  SpecSampler sampler(33);
  for (int trial = 0; trial < 50; ++trial) {
    auto spec = sampler.spec(12);
    spec.n = 1.0;
    const int G = spec.stage;
    const double q = 1.0 / spec.rho;
    SegmentLayout layout;
    layout.stage = G;
    layout.L = spec.L;
    layout.l.assign(G + 1, 0.0);
    layout.d.assign(G + 1, 0.0);
    layout.s.assign(G + 1, 0.0);
    for (int g = 0; g <= G; ++g) layout.l[g] = std::ldexp(spec.L, -g) * q_pochhammer(q, q, g);
    for (int g = 1; g <= G; ++g) layout.d[g] = std::ldexp(spec.L, -(g - 1)) * q_pochhammer(q, q, g - 1) * std::pow(q, g);
    for (int p = 1; p <= G; ++p) layout.s[p] = layout.l[G + 1 - p] + layout.d[G + 1 - p];

    const SvcEngine reference(spec, layout);
    const SvcEngine engine(spec);
    for (int i = 0; i < 50; ++i) {
      const double k = sampler.uniform(0.1, 20.0);
      CHECK(std::abs(engine.at_wave_number(k).T - reference.at_wave_number(k).T) <= 1e-12);
    }
  }
}

TEST_CASE("high-energy transparency") {
  SpecSampler sampler(34);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = sampler.spec(10);
    const double k = std::sqrt(1e3 * spec.V) * sampler.uniform(1.0, 3.0);
    CHECK(1.0 - transmission(spec, k * k).T < 1e-3);
  }
}

TEST_CASE("zero height is transparent") {
  auto spec = make(2.0, 1.0, 6, 0.0, 5.0);
  for (double k : {0.1, 1.0, 7.0}) {
    const auto p = transmission(spec, k * k);
    CHECK(p.T == 1.0);
    CHECK(p.R == 0.0);
  }
}

TEST_CASE("opaque stacks use the extended exponent range") {
  const auto spec = make(2.0, 1.0, 10, 1e5, 20.0);
  const double k = 1.0;
  const SvcEngine engine(spec);
  const auto seq = engine.bloch(k * k);
  const auto closed = engine.at_wave_number(k);
  CHECK(seq.extended);
  CHECK(closed.underflow);
  CHECK(closed.T == 0.0);
  CHECK(std::isfinite(closed.log10_T));
  CHECK(closed.log10_T < -308.0);

  const auto brute = brute_force_T(chain_from_layout(build_layout(spec)), spec.V, k * k);
  CHECK(brute.underflow);
  CHECK(std::abs(closed.log10_T - brute.log10_T) <= 1e-9 * std::abs(brute.log10_T));
}

TEST_CASE("engine rejects mismatched input") {
  const auto spec = make(2.0, 1.0, 3, 10.0, 5.0);
  CHECK_THROWS_AS(SvcEngine(spec, build_layout(make(2.0, 1.0, 2, 10.0, 5.0))), InvalidArgument);
  CHECK_THROWS_AS(transmission(spec, 0.0), InvalidArgument);
  CHECK_THROWS_AS(transmission(spec, -3.0), InvalidArgument);
  CHECK_THROWS_AS(transmission(make(1.0, 1.0, 3, 10.0, 5.0), 1.0), InvalidArgument);
}
