#include "skewprod/crossed.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skewprod {

namespace {

void require_same_alpha(double a, double b) {
  if (a != b) {
    throw std::invalid_argument("mixing crossed-product elements over different rotation angles");
  }
}

}  // namespace

CPElement CPElement::identity(double alpha) {
  CPElement x(alpha);
  x.set_term(0, FourierPoly::constant(1.0));
  return x;
}

CPElement CPElement::from_function(FourierPoly a, double alpha) {
  CPElement x(alpha);
  x.set_term(0, std::move(a));
  return x;
}

CPElement CPElement::monomial(FourierPoly a, std::int32_t n, double alpha) {
  CPElement x(alpha);
  x.set_term(n, std::move(a));
  return x;
}

CPElement CPElement::v_power(std::int32_t n, double alpha) {
  return monomial(FourierPoly::constant(1.0), n, alpha);
}

FourierPoly CPElement::term(std::int32_t n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? FourierPoly::zero() : it->second;
}

void CPElement::set_term(std::int32_t n, FourierPoly a) {
  if (a.empty()) {
    terms_.erase(n);
  } else {
    terms_[n] = std::move(a);
  }
}

void CPElement::add_term(std::int32_t n, const FourierPoly& a) {
  auto it = terms_.find(n);
  if (it == terms_.end()) {
    if (!a.empty()) terms_[n] = a;
    return;
  }
  it->second += a;
  if (it->second.empty()) terms_.erase(it);
}

std::int32_t CPElement::power_radius() const {
  std::int32_t r = 0;
  for (const auto& [n, a] : terms_) r = std::max(r, std::abs(n));
  return r;
}

std::int32_t CPElement::band() const {
  std::int32_t b = 0;
  for (const auto& [n, a] : terms_) b = std::max(b, a.band());
  return b;
}

CPElement& CPElement::operator+=(const CPElement& o) {
  if (terms_.empty()) {
    alpha_ = o.alpha_;
  } else if (!o.terms_.empty()) {
    require_same_alpha(alpha_, o.alpha_);
  }
  for (const auto& [n, a] : o.terms_) add_term(n, a);
  return *this;
}

CPElement& CPElement::operator-=(const CPElement& o) {
  if (terms_.empty()) {
    alpha_ = o.alpha_;
  } else if (!o.terms_.empty()) {
    require_same_alpha(alpha_, o.alpha_);
  }
  for (const auto& [n, a] : o.terms_) {
    FourierPoly neg = a;
    neg *= Complex{-1.0, 0.0};
    add_term(n, neg);
  }
  return *this;
}

CPElement& CPElement::operator*=(Complex z) {
  if (z == Complex{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [n, a] : terms_) a *= z;
  prune();
  return *this;
}

void CPElement::prune(double floor) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second.prune(floor);
    it = it->second.empty() ? terms_.erase(it) : std::next(it);
  }
}

CPElement multiply(const CPElement& x, const CPElement& y, const Limits& lim) {
  if (!x.is_zero() && !y.is_zero()) require_same_alpha(x.alpha(), y.alpha());
  CPElement r(x.is_zero() ? y.alpha() : x.alpha());
  for (const auto& [m, a] : x.terms()) {
    for (const auto& [n, b] : y.terms()) {
      const std::int64_t k = static_cast<std::int64_t>(m) + n;
      if (std::llabs(k) > lim.max_power) {
        throw band_overflow_error("product power " + std::to_string(k) +
                                  " exceeds cap " + std::to_string(lim.max_power));
      }
      const FourierPoly shifted = b.rotate(frac_mul(static_cast<double>(m), x.alpha()));
      r.add_term(static_cast<std::int32_t>(k), a.multiply(shifted, lim.max_band));
    }
  }
  r.prune();
  return r;
}

CPElement adjoint(const CPElement& x, const Limits&) {
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    r.set_term(-n, a.conjugate().rotate(frac_mul(static_cast<double>(-n), x.alpha())));
  }
  return r;
}

FourierPoly expectation(const CPElement& x) { return x.term(0); }

FourierPoly fourier_coefficient(const CPElement& x, std::int32_t k) {
  return x.term(k).rotate(frac_mul(static_cast<double>(-k), x.alpha()));
}

Complex canonical_state(const CPElement& x) { return x.term(0).coeff(0); }

CPElement gauge(const CPElement& x, double t) {
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    r.set_term(n, a * cis(frac_mul(static_cast<double>(n), t)));
  }
  return r;
}

CPElement gauge_root_average(const CPElement& x, int order) {
  if (order < 1) throw std::invalid_argument("gauge average order must be >= 1");
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    if (n % order == 0) r.set_term(n, a);
  }
  return r;
}

CPElement reconstruct(const CPElement& x, std::int32_t K) {
  if (K < 0) throw std::invalid_argument("reconstruction order must be >= 0");
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    if (std::abs(n) <= K) r.set_term(n, a);
  }
  return r;
}

CPElement fejer_reconstruct(const CPElement& x, std::int32_t K) {
  if (K < 1) throw std::invalid_argument("smoothing order must be >= 1");
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    if (std::abs(n) < K) {
      const double w = 1.0 - static_cast<double>(std::abs(n)) / static_cast<double>(K);
      r.set_term(n, a * Complex{w, 0.0});
    }
  }
  return r;
}

double gns_norm(const CPElement& x) {
  double s = 0.0;
  for (const auto& [n, a] : x.terms()) {
    for (const auto& [m, c] : a.coeffs()) s += std::norm(c);
  }
  return std::sqrt(s);
}

namespace {

// Expand a twisted multiplier at the smallest band that brings the
// truncation tail under the aliasing budget, leaving `room` for the
// coefficient band already used by the term it multiplies.
FourierPoly expand_multiplier(const UnitaryFn& mult, std::int32_t room,
                              const Limits& lim) {
  if (room < 0) {
    throw band_overflow_error("no coefficient band left for a twisted multiplier");
  }
  std::int32_t want =
      std::min(room, std::max(std::abs(mult.winding()) + mult.phase().band() + 8, 8));
  for (;;) {
    const UnitaryExpansion e = expand_unitary(mult, want);
    if (e.aliasing_estimate <= lim.aliasing_budget) return e.poly;
    if (want >= room) {
      throw numeric_budget_error(
          "twisted multiplier tail " + std::to_string(e.aliasing_estimate) +
          " stays above budget at band " + std::to_string(want));
    }
    want = std::min(room, 2 * want);
  }
}

CPElement apply_skew_with(const CocycleSpec& spec, const UnitaryFn& u_g,
                          double angle_g, const CPElement& x, const Limits& lim) {
  const double alpha = spec.alpha_value();
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    const FourierPoly moved = a.rotate(angle_g);
    const UnitaryFn mult = twisted_power(u_g, alpha, n);
    if (mult.is_one(1e-15)) {
      r.add_term(n, moved);
      continue;
    }
    const FourierPoly mp = expand_multiplier(mult, lim.max_band - moved.band(), lim);
    r.add_term(n, moved.multiply(mp, lim.max_band));
  }
  r.prune();
  return r;
}

}  // namespace

CPElement apply_skew(const CocycleSpec& spec, const GroupElement& g,
                     const CPElement& x, const Limits& lim) {
  require_same_alpha(x.alpha(), spec.alpha_value());
  return apply_skew_with(spec, cocycle_at(spec, g), spec.group_angle(g), x, lim);
}

CPElement cesaro_average(const CocycleSpec& spec, const CPElement& x,
                         std::int64_t window, const Limits& lim) {
  if (window < 1) throw std::invalid_argument("averaging window must be >= 1");
  require_same_alpha(x.alpha(), spec.alpha_value());
  const int d = spec.dimension;
  CPElement acc(x.alpha());
  if (d == 1) {
    // Incremental walk: one unitary product per step instead of rebuilding
    // u_g from scratch, which matters at large windows.
    CocycleWalker walk(spec, 0);
    for (std::int64_t j = 0; j < window; ++j) {
      acc += apply_skew_with(spec, walk.value(), spec.group_angle(walk.position()),
                             x, lim);
      walk.step();
    }
    acc *= Complex{1.0 / static_cast<double>(window), 0.0};
    return acc;
  }
  GroupElement g = GroupElement::zero(d);
  double count = 1.0;
  for (int i = 0; i < d; ++i) count *= static_cast<double>(window);
  // Ascending lexicographic odometer over {0..window-1}^d.
  for (;;) {
    acc += apply_skew(spec, g, x, lim);
    int axis = d - 1;
    while (axis >= 0) {
      if (++g.v[axis] < window) break;
      g.v[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  acc *= Complex{1.0 / count, 0.0};
  return acc;
}

GNSVector GNSVector::from_element(const CPElement& x) {
  GNSVector v;
  for (const auto& [n, a] : x.terms()) {
    if (!a.empty()) v.comps[n] = a;
  }
  return v;
}

double GNSVector::norm() const {
  double s = 0.0;
  for (const auto& [n, a] : comps) {
    for (const auto& [m, c] : a.coeffs()) s += std::norm(c);
  }
  return std::sqrt(s);
}

GNSVector gns_apply_skew(const CocycleSpec& spec, const GroupElement& g,
                         const GNSVector& v, const Limits& lim) {
  CPElement x(spec.alpha_value());
  for (const auto& [n, a] : v.comps) x.set_term(n, a);
  return GNSVector::from_element(apply_skew(spec, g, x, lim));
}

GNSVector gns_project_invariant(const CocycleSpec& spec, const GNSVector& v,
                                std::int64_t window, const Limits& lim) {
  CPElement x(spec.alpha_value());
  for (const auto& [n, a] : v.comps) x.set_term(n, a);
  return GNSVector::from_element(cesaro_average(spec, x, window, lim));
}

MasaReport masa_commutant_check(double alpha, std::int32_t band,
                                std::int32_t power_radius, double residual_bound) {
  if (band < 1 || power_radius < 1) {
    throw std::invalid_argument("commutant check needs band >= 1 and power radius >= 1");
  }
  MasaReport rep;
  rep.residual_bound = residual_bound;
  rep.min_singular_value = -1.0;
  const std::int32_t cols = 2 * band + 1;
  for (std::int32_t n = -power_radius; n <= power_radius; ++n) {
    if (n == 0) continue;
    // Commuting x = sum a_n V^n with chi_j multiplies a_n by chi_j and by
    // (1 - e^{2 pi i j n alpha}): per coefficient this is a scalar times an
    // index shift by j.  Stack j = 1, 2 without truncating the output rows
    // so every input coefficient is fully measured.
    const Complex lam1 = Complex{1.0, 0.0} - cis(frac_mul(static_cast<double>(n), alpha));
    const Complex lam2 =
        Complex{1.0, 0.0} - cis(frac_mul(2.0 * static_cast<double>(n), alpha));
    const std::int32_t rows1 = 2 * (band + 1) + 1;
    const std::int32_t rows2 = 2 * (band + 2) + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows1 + rows2, cols);
    for (std::int32_t c = 0; c < cols; ++c) {
      const std::int32_t freq = c - band;
      m(freq + 1 + band + 1, c) = lam1;                    // row index of freq+1 in block 1
      m(rows1 + (freq + 2 + band + 2), c) = lam2;          // row index of freq+2 in block 2
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const double sv = svd.singularValues().minCoeff();
    if (rep.min_singular_value < 0.0 || sv < rep.min_singular_value) {
      rep.min_singular_value = sv;
      rep.argmin_power = n;
    }
  }
  rep.off_zero_bound = rep.min_singular_value > 0.0
                           ? residual_bound / rep.min_singular_value
                           : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace skewprod
