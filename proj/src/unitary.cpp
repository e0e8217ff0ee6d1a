#include "skewprod/unitary.hpp"

#include <cmath>

#include "dft.hpp"

namespace skewprod {

UnitaryFn::UnitaryFn(std::int32_t winding, FourierPoly phase)
    : winding_(winding), phase_(std::move(phase)) {
  if (!phase_.is_real_valued(1e-12)) {
    throw std::invalid_argument("unitary phase must be real-valued");
  }
  phase_.symmetrize_real();
}

UnitaryFn UnitaryFn::one() { return {}; }

UnitaryFn UnitaryFn::character(std::int32_t m) { return UnitaryFn(m, {}); }

UnitaryFn UnitaryFn::constant(double angle) {
  return UnitaryFn(0, FourierPoly::constant(frac(angle)));
}

UnitaryFn UnitaryFn::multiply(const UnitaryFn& o) const {
  const std::int64_t w =
      static_cast<std::int64_t>(winding_) + static_cast<std::int64_t>(o.winding_);
  if (w > INT32_MAX || w < INT32_MIN) {
    throw band_overflow_error("winding overflow in unitary product");
  }
  UnitaryFn r;
  r.winding_ = static_cast<std::int32_t>(w);
  r.phase_ = phase_;
  r.phase_ += o.phase_;
  r.normalize_phase_constant();
  return r;
}

UnitaryFn UnitaryFn::adjoint() const {
  UnitaryFn r;
  r.winding_ = -winding_;
  r.phase_ = FourierPoly::zero() - phase_;
  return r;
}

UnitaryFn UnitaryFn::rotate(double t) const {
  UnitaryFn r;
  r.winding_ = winding_;
  r.phase_ = phase_.rotate(t);
  // u(x + t) picks up the constant k*t from the winding part.
  r.phase_.add_to_coeff(0, Complex{frac_mul(static_cast<double>(winding_), t), 0.0});
  r.phase_.symmetrize_real();
  r.normalize_phase_constant();
  return r;
}

UnitaryFn UnitaryFn::power(std::int64_t n) const {
  const std::int64_t w = static_cast<std::int64_t>(winding_) * n;
  if (w > INT32_MAX || w < INT32_MIN) {
    throw band_overflow_error("winding overflow in unitary power");
  }
  UnitaryFn r;
  r.winding_ = static_cast<std::int32_t>(w);
  r.phase_ = phase_ * Complex{static_cast<double>(n), 0.0};
  r.phase_.symmetrize_real();
  r.normalize_phase_constant();
  return r;
}

Complex UnitaryFn::evaluate(double x) const {
  const double lin = frac_mul(static_cast<double>(winding_), x);
  const double ph = phase_.evaluate(x).real();
  return cis(lin + ph);
}

void UnitaryFn::normalize_phase_constant() {
  const double c = phase_.coeff(0).real();
  const double reduced = c - std::floor(c + 0.5);  // into [-1/2, 1/2)
  if (reduced != c) {
    phase_.set_coeff(0, Complex{reduced, 0.0});
  }
}

bool UnitaryFn::is_one(double tol) const {
  if (winding_ != 0) return false;
  double offdc = 0.0;
  for (const auto& [m, z] : phase_.coeffs()) {
    if (m != 0) offdc += std::abs(z);
  }
  const double dc = phase_.coeff(0).real();
  const double dist = std::abs(dc - std::round(dc));
  return offdc <= tol && dist <= tol;
}

UnitaryExpansion expand_unitary(const UnitaryFn& u, std::int32_t band) {
  if (band < 0) throw std::invalid_argument("expansion band must be >= 0");
  UnitaryExpansion out;

  if (u.is_character_multiple()) {
    // Exactly one coefficient: u = e^{2 pi i c} chi_k.
    const double c = u.phase().coeff(0).real();
    if (std::abs(u.winding()) <= band) {
      out.poly = FourierPoly::character(u.winding(), cis(c));
      out.aliasing_estimate = 0.0;
    } else {
      out.aliasing_estimate = 1.0;  // the whole function lies outside the band
    }
    return out;
  }

  const std::int32_t pb = u.phase().band();
  const std::size_t need = std::max<std::size_t>(
      {static_cast<std::size_t>(8) * static_cast<std::size_t>(band),
       static_cast<std::size_t>(8) *
           static_cast<std::size_t>(std::abs(u.winding()) + pb),
       32});
  const std::size_t grid = detail::next_pow2(need);
  if (grid > (std::size_t{1} << 22)) {
    throw numeric_budget_error("expansion grid exceeds budget (band " +
                               std::to_string(band) + ", phase band " +
                               std::to_string(pb) + ")");
  }

  std::vector<Complex> samples(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    samples[j] = u.evaluate(static_cast<double>(j) / static_cast<double>(grid));
  }
  const auto spectrum = detail::dft_forward(samples);
  const double inv_n = 1.0 / static_cast<double>(grid);
  const std::int32_t half = static_cast<std::int32_t>(grid / 2);
  double tail = 0.0;
  for (std::int32_t m = -half; m < half; ++m) {
    const std::size_t idx = static_cast<std::size_t>(
        (m + static_cast<std::int32_t>(grid)) % static_cast<std::int32_t>(grid));
    const Complex c = spectrum[idx] * inv_n;
    if (std::abs(m) <= band) {
      out.poly.set_coeff(m, c);
    } else {
      tail += std::abs(c);
    }
  }
  out.aliasing_estimate = tail;
  out.grid_size = grid;
  return out;
}

double grid_distance(const UnitaryFn& u, const UnitaryFn& v, std::size_t grid) {
  double d = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    d = std::max(d, std::abs(u.evaluate(x) - v.evaluate(x)));
  }
  return d;
}

}  // namespace skewprod
