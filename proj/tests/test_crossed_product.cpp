#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "skewprod/cocycle.hpp"
#include "skewprod/crossed.hpp"
#include "skewprod/rotation.hpp"
#include "skewprod/unitary.hpp"

using namespace skewprod;

namespace {

constexpr double kAlpha = 0.41421356237309504880168872420970;  // sqrt(2) - 1

FourierPoly random_poly(std::mt19937_64& rng, int band, double scale) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  FourierPoly p;
  for (int m = -band; m <= band; ++m) {
    p.set_coeff(m, Complex{unit(rng), unit(rng)} / (1.0 + std::abs(m)));
  }
  return p;
}

CPElement random_element(std::mt19937_64& rng, int radius, int band,
                         double scale = 0.5, double alpha = kAlpha) {
  CPElement x(alpha);
  for (int n = -radius; n <= radius; ++n) {
    x.set_term(n, random_poly(rng, band, scale));
  }
  return x;
}

double el_dist(const CPElement& x, const CPElement& y) { return gns_norm(x - y); }

FourierPoly real_phase(std::mt19937_64& rng, int band, double scale) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  FourierPoly p;
  for (int m = 1; m <= band; ++m) {
    const Complex c{unit(rng), unit(rng)};
    p.set_coeff(m, c);
    p.set_coeff(-m, std::conj(c));
  }
  return p;
}

CocycleSpec winding_spec(std::mt19937_64& rng, std::int32_t winding, int band,
                         double scale) {
  return CocycleSpec::single(UnitaryFn(winding, real_phase(rng, band, scale)),
                             RotationNumber::sqrt2_minus_1(),
                             RotationNumber::sqrt2_minus_1());
}

}  // namespace

TEST_CASE("multiplication twists the right factor by the rotation") {
  std::mt19937_64 rng(101);
  const FourierPoly a = random_poly(rng, 3, 0.7);
  const FourierPoly b = random_poly(rng, 3, 0.7);
  for (const int m : {-2, 0, 1, 3}) {
    for (const int n : {-1, 0, 2}) {
      const CPElement prod = multiply(CPElement::monomial(a, m, kAlpha),
                                      CPElement::monomial(b, n, kAlpha));
      CHECK(prod.power_radius() == std::abs(m + n));
      const FourierPoly expect =
          a.multiply(b.rotate(frac_mul(static_cast<double>(m), kAlpha)));
      CHECK(coeff_distance(prod.term(m + n), expect) < 1e-14);
    }
  }
  // V a V^* = a(. + alpha), the defining covariance relation.
  const CPElement va_vs = multiply(multiply(CPElement::v_power(1, kAlpha),
                                            CPElement::from_function(a, kAlpha)),
                                   adjoint(CPElement::v_power(1, kAlpha)));
  CHECK(va_vs.power_radius() == 0);
  CHECK(coeff_distance(va_vs.term(0), a.rotate(kAlpha)) < 1e-14);
}

TEST_CASE("adjoint is an involution and an antihomomorphism") {
  std::mt19937_64 rng(102);
  const CPElement x = random_element(rng, 2, 3);
  const CPElement y = random_element(rng, 2, 3);
  CHECK(el_dist(adjoint(adjoint(x)), x) < 1e-13);
  CHECK(el_dist(adjoint(multiply(x, y)), multiply(adjoint(y), adjoint(x))) < 1e-12);
  // (a V^n)^* = alpha^{-n}(conj a) V^{-n} on a single monomial.
  const FourierPoly a = random_poly(rng, 3, 0.5);
  const CPElement star = adjoint(CPElement::monomial(a, 3, kAlpha));
  CHECK(coeff_distance(star.term(-3),
                       a.conjugate().rotate(frac_mul(-3.0, kAlpha))) < 1e-14);
}

TEST_CASE("expectation onto the function algebra") {
  std::mt19937_64 rng(103);
  const FourierPoly a = random_poly(rng, 4, 0.6);
  CHECK(coeff_distance(expectation(CPElement::monomial(a, 0, kAlpha)), a) == 0.0);
  CHECK(expectation(CPElement::monomial(a, 2, kAlpha)).coeffs().empty());

  const CPElement x = random_element(rng, 3, 3);
  for (const int k : {-3, -1, 0, 2}) {
    // E(V^{-k} x) = alpha^{-k}(a_k).
    const FourierPoly direct = fourier_coefficient(x, k);
    const FourierPoly expect = x.term(k).rotate(frac_mul(static_cast<double>(-k), kAlpha));
    CHECK(coeff_distance(direct, expect) < 1e-14);
  }

  // omega(x^* x) is the squared GNS norm; positivity comes with it.
  const Complex q = canonical_state(multiply(adjoint(x), x));
  CHECK(std::abs(q.imag()) < 1e-13);
  CHECK(q.real() > 0.0);
  const double n = gns_norm(x);
  CHECK(q.real() == doctest::Approx(n * n).epsilon(1e-12));
}

TEST_CASE("reconstruction from Fourier modes") {
  std::mt19937_64 rng(104);
  const CPElement x = random_element(rng, 5, 3);
  CHECK(el_dist(reconstruct(x, 5), x) < 1e-13);   // exact at the power radius
  CHECK(el_dist(reconstruct(x, 12), x) < 1e-13);  // and beyond
  CHECK(el_dist(reconstruct(x, 4), x) > 1e-3);    // misses the |n| = 5 modes

  // Fejer weights deviate by (|k|/K) |a_k| per mode: check the exact error
  // and that it decays as the window grows.
  double prev = 1e9;
  for (const std::int32_t K : {8, 32, 128}) {
    double expect_sq = 0.0;
    for (const auto& [n, a] : x.terms()) {
      const double wgt = std::min(1.0, std::abs(n) / static_cast<double>(K));
      expect_sq += wgt * wgt * a.l2_norm() * a.l2_norm();
    }
    const double err = el_dist(fejer_reconstruct(x, K), x);
    CHECK(err == doctest::Approx(std::sqrt(expect_sq)).epsilon(1e-10));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("canonical state is the gauge-invariant trace-like state") {
  std::mt19937_64 rng(105);
  const CPElement x = random_element(rng, 3, 3);
  CHECK(canonical_state(CPElement::identity(kAlpha)) == Complex{1.0, 0.0});
  CHECK(canonical_state(CPElement::v_power(2, kAlpha)) == Complex{0.0, 0.0});
  for (const double t : {0.1, 0.37, 0.925}) {
    CHECK(std::abs(canonical_state(gauge(x, t)) - canonical_state(x)) < 1e-15);
  }
}

TEST_CASE("gauge automorphisms form a group and scale V-powers") {
  std::mt19937_64 rng(106);
  const CPElement x = random_element(rng, 3, 2);
  const CPElement y = random_element(rng, 2, 2);
  CHECK(el_dist(gauge(x, 0.0), x) == 0.0);
  CHECK(el_dist(gauge(gauge(x, 0.3), 0.45), gauge(x, 0.75)) < 1e-13);
  CHECK(el_dist(gauge(multiply(x, y), 0.2), multiply(gauge(x, 0.2), gauge(y, 0.2))) <
        1e-12);
  const CPElement gv = gauge(CPElement::v_power(1, kAlpha), 0.25);
  CHECK(std::abs(gv.term(1).coeff(0) - Complex{0.0, 1.0}) < 1e-15);
}

TEST_CASE("gauge root average keeps exactly the multiples of the order") {
  std::mt19937_64 rng(107);
  const CPElement x = random_element(rng, 4, 2);
  const CPElement avg = gauge_root_average(x, 3);
  for (const auto& [n, a] : avg.terms()) {
    CHECK(n % 3 == 0);
    CHECK(coeff_distance(a, x.term(n)) == 0.0);
  }
  CHECK(avg.term(3).coeffs().size() == x.term(3).coeffs().size());
  CHECK(el_dist(gauge_root_average(x, 1), x) == 0.0);
}

TEST_CASE("skew automorphism: generator image, group law, state invariance") {
  std::mt19937_64 rng(108);
  const CocycleSpec spec = winding_spec(rng, 1, 2, 0.2);
  const GroupElement g = GroupElement::unit(1, 0, 2);   // g = 2
  const GroupElement h = GroupElement::unit(1, 0, -1);  // h = -1

  // Phi_g(V) = u_g V, compared pointwise against the closed-form cocycle.
  const CPElement phi_v = apply_skew(spec, g, CPElement::v_power(1, kAlpha));
  REQUIRE(phi_v.power_radius() == 1);
  const UnitaryFn u_g = cocycle_at(spec, g);
  double worst = 0.0;
  for (int j = 0; j < 256; ++j) {
    const double t = j / 256.0;
    worst = std::max(worst, std::abs(phi_v.term(1).evaluate(t) - u_g.evaluate(t)));
  }
  CHECK(worst < 1e-9);

  const CPElement x = random_element(rng, 2, 2, 0.4);
  const CPElement y = random_element(rng, 2, 2, 0.4);
  CHECK(el_dist(apply_skew(spec, g, multiply(x, y)),
                multiply(apply_skew(spec, g, x), apply_skew(spec, g, y))) < 1e-9);
  CHECK(el_dist(apply_skew(spec, g + h, x),
                apply_skew(spec, g, apply_skew(spec, h, x))) < 1e-9);
  CHECK(el_dist(apply_skew(spec, g, adjoint(x)), adjoint(apply_skew(spec, g, x))) <
        1e-9);
  CHECK(std::abs(canonical_state(apply_skew(spec, g, x)) - canonical_state(x)) <
        1e-12);
  // g = 0 acts as the identity.
  CHECK(el_dist(apply_skew(spec, GroupElement::zero(1), x), x) < 1e-14);
}

TEST_CASE("Cesaro averages: the trivial cocycle fixes V, winding one decays") {
  const CocycleSpec trivial = CocycleSpec::trivial(RotationNumber::sqrt2_minus_1(),
                                                   RotationNumber::sqrt2_minus_1());
  const CPElement v = CPElement::v_power(1, kAlpha);
  CHECK(el_dist(cesaro_average(trivial, v, 64), v) < 1e-13);

  std::mt19937_64 rng(109);
  const CocycleSpec winding = CocycleSpec::single(UnitaryFn::character(1),
                                                  RotationNumber::sqrt2_minus_1(),
                                                  RotationNumber::sqrt2_minus_1());
  Limits lim;
  lim.max_band = 128;
  for (const std::int64_t w : {4, 16, 64}) {
    // (1/w) sum_j u^{(j)} V has j-th term a unimodular multiple of chi_j, so
    // the norm is exactly sqrt(w)/w.
    const double norm = gns_norm(cesaro_average(winding, v, w, lim));
    CHECK(norm == doctest::Approx(1.0 / std::sqrt(static_cast<double>(w)))
                      .epsilon(1e-12));
  }
}

TEST_CASE("GNS vectors mirror elements and the skew action") {
  std::mt19937_64 rng(110);
  const CPElement x = random_element(rng, 2, 2, 0.4);
  const GNSVector v = GNSVector::from_element(x);
  CHECK(v.norm() == doctest::Approx(gns_norm(x)).epsilon(1e-14));

  const CocycleSpec spec = winding_spec(rng, -1, 2, 0.15);
  const GroupElement g = GroupElement::unit(1, 0, 3);
  const GNSVector via_vector = gns_apply_skew(spec, g, v);
  const GNSVector via_element = GNSVector::from_element(apply_skew(spec, g, x));
  double dist_sq = 0.0;
  for (const auto& [n, comp] : via_vector.comps) {
    const double d = coeff_distance(comp, via_element.comps.count(n)
                                              ? via_element.comps.at(n)
                                              : FourierPoly{});
    dist_sq += d * d;
  }
  CHECK(via_vector.comps.size() == via_element.comps.size());
  CHECK(std::sqrt(dist_sq) < 1e-10);
}

TEST_CASE("invariant projection: identity for trivial, decay for winding one") {
  const CocycleSpec trivial = CocycleSpec::trivial(RotationNumber::sqrt2_minus_1(),
                                                   RotationNumber::sqrt2_minus_1());
  const GNSVector v = GNSVector::from_element(CPElement::v_power(1, kAlpha));
  CHECK(gns_project_invariant(trivial, v, 128).norm() == doctest::Approx(1.0));

  const CocycleSpec winding = CocycleSpec::single(UnitaryFn::character(1),
                                                  RotationNumber::sqrt2_minus_1(),
                                                  RotationNumber::sqrt2_minus_1());
  Limits lim;
  lim.max_band = 2048;
  for (const std::int64_t w : {256, 1024}) {
    CHECK(gns_project_invariant(winding, v, w, lim).norm() ==
          doctest::Approx(1.0 / std::sqrt(static_cast<double>(w))).epsilon(1e-12));
  }
}

TEST_CASE("masa check reproduces the closed-form smallest singular value") {
  const std::int32_t radius = 3;
  const MasaReport rep = masa_commutant_check(kAlpha, 16, radius, 1e-12);
  double expect = 1e300;
  std::int32_t expect_n = 0;
  for (std::int32_t n = -radius; n <= radius; ++n) {
    if (n == 0) continue;
    const double s1 = std::sin(M_PI * frac_mul(static_cast<double>(n), kAlpha));
    const double s2 = std::sin(M_PI * frac_mul(2.0 * n, kAlpha));
    const double sigma = 2.0 * std::sqrt(s1 * s1 + s2 * s2);
    if (sigma < expect) {
      expect = sigma;
      expect_n = n;
    }
  }
  CHECK(rep.min_singular_value == doctest::Approx(expect).epsilon(1e-10));
  CHECK(std::abs(rep.argmin_power) == std::abs(expect_n));
  CHECK(rep.residual_bound == 1e-12);
  CHECK(rep.off_zero_bound ==
        doctest::Approx(1e-12 / expect).epsilon(1e-10));
}

TEST_CASE("limits guard both truncation directions") {
  Limits lim;
  lim.max_power = 64;
  CHECK_THROWS_AS(multiply(CPElement::v_power(40, kAlpha),
                           CPElement::v_power(30, kAlpha), lim),
                  band_overflow_error);

  std::mt19937_64 rng(111);
  Limits narrow;
  narrow.max_band = 30;
  const CPElement wide = CPElement::from_function(random_poly(rng, 20, 0.3), kAlpha);
  CHECK_THROWS_AS(multiply(wide, wide, narrow), band_overflow_error);

  // A wild multiplier cannot be expanded under a small band budget.
  const CocycleSpec spec = winding_spec(rng, 0, 4, 0.5);
  Limits tight;
  tight.max_band = 8;
  CHECK_THROWS_AS(apply_skew(spec, GroupElement::unit(1, 0),
                             CPElement::v_power(1, kAlpha), tight),
                  numeric_budget_error);
}

TEST_CASE("structure reporting and pruning") {
  CPElement x(kAlpha);
  FourierPoly a;
  a.set_coeff(2, Complex{0.5, 0.0});
  x.set_term(-3, a);
  FourierPoly b;
  b.set_coeff(-5, Complex{1e-20, 0.0});  // below the storage floor: dropped
  CHECK(b.coeffs().empty());
  b.set_coeff(-5, Complex{0.3, 0.0});
  x.set_term(7, b);
  CHECK(x.power_radius() == 7);
  CHECK(x.band() == 5);
  x.prune(0.4);
  CHECK(x.power_radius() == 3);  // the 0.3 term evaporates under the floor
  CHECK(x.band() == 2);
  CHECK(CPElement::zero(kAlpha).is_zero());
  CHECK(CPElement::zero(kAlpha).power_radius() == 0);
}
