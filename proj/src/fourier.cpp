#include "skewprod/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "dft.hpp"

namespace skewprod {

double frac(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  if (r < 0.0) r += 1.0;
  return r;
}

double frac_mul(double a, double b) {
  // a*b is exactly hi + lo; reducing hi mod 1 first keeps the fractional
  // part even when the product is large.
  const double hi = a * b;
  const double lo = std::fma(a, b, -hi);
  return frac(frac(hi) + lo);
}

Complex cis(double turns) {
  const double r = frac(turns);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

namespace detail {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {
std::mutex fftw_plan_mutex;
}  // namespace

std::vector<Complex> dft_forward(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::vector<Complex> out(n);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(x.data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(n), in_ptr, out_ptr,
                            FFTW_FORWARD, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (plan == nullptr) throw numeric_budget_error("FFT planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace detail

FourierPoly FourierPoly::constant(Complex z) {
  FourierPoly f;
  f.set_coeff(0, z);
  return f;
}

FourierPoly FourierPoly::character(std::int32_t m, Complex amplitude) {
  FourierPoly f;
  f.set_coeff(m, amplitude);
  return f;
}

Complex FourierPoly::coeff(std::int32_t m) const {
  auto it = c_.find(m);
  return it == c_.end() ? Complex{0.0, 0.0} : it->second;
}

void FourierPoly::set_coeff(std::int32_t m, Complex z, double floor) {
  if (std::abs(z) <= floor) {
    c_.erase(m);
  } else {
    c_[m] = z;
  }
}

void FourierPoly::add_to_coeff(std::int32_t m, Complex z, double floor) {
  set_coeff(m, coeff(m) + z, floor);
}

std::int32_t FourierPoly::band() const {
  std::int32_t b = 0;
  if (!c_.empty()) {
    b = std::max(std::abs(c_.begin()->first), std::abs(c_.rbegin()->first));
  }
  return b;
}

FourierPoly& FourierPoly::operator+=(const FourierPoly& o) {
  for (const auto& [m, z] : o.c_) add_to_coeff(m, z);
  return *this;
}

FourierPoly& FourierPoly::operator-=(const FourierPoly& o) {
  for (const auto& [m, z] : o.c_) add_to_coeff(m, -z);
  return *this;
}

FourierPoly& FourierPoly::operator*=(Complex z) {
  if (std::abs(z) == 0.0) {
    c_.clear();
    return *this;
  }
  for (auto& [m, c] : c_) c *= z;
  prune();
  return *this;
}

FourierPoly FourierPoly::multiply(const FourierPoly& o, std::int32_t max_band) const {
  if (max_band > 0 && !c_.empty() && !o.c_.empty()) {
    // The extreme frequencies are attained at the corners of the supports.
    const std::int64_t lo = std::int64_t{c_.begin()->first} + o.c_.begin()->first;
    const std::int64_t hi = std::int64_t{c_.rbegin()->first} + o.c_.rbegin()->first;
    const std::int64_t b = std::max(std::abs(lo), std::abs(hi));
    if (b > max_band) {
      throw band_overflow_error("product band " + std::to_string(b) +
                                " exceeds cap " + std::to_string(max_band));
    }
  }
  FourierPoly r;
  for (const auto& [m1, z1] : c_) {
    for (const auto& [m2, z2] : o.c_) {
      r.add_to_coeff(m1 + m2, z1 * z2, 0.0);
    }
  }
  r.prune();
  return r;
}

FourierPoly FourierPoly::rotate(double t) const {
  FourierPoly r;
  for (const auto& [m, z] : c_) {
    r.set_coeff(m, z * cis(frac_mul(static_cast<double>(m), t)));
  }
  return r;
}

FourierPoly FourierPoly::conjugate() const {
  FourierPoly r;
  for (const auto& [m, z] : c_) r.set_coeff(-m, std::conj(z));
  return r;
}

Complex FourierPoly::evaluate(double x) const {
  Complex s{0.0, 0.0};
  for (const auto& [m, z] : c_) {
    s += z * cis(frac_mul(static_cast<double>(m), x));
  }
  return s;
}

double FourierPoly::l2_norm() const {
  double s = 0.0;
  for (const auto& [m, z] : c_) s += std::norm(z);
  return std::sqrt(s);
}

double FourierPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& [m, z] : c_) s += std::abs(z);
  return s;
}

bool FourierPoly::is_real_valued(double tol) const {
  for (const auto& [m, z] : c_) {
    if (std::abs(z - std::conj(coeff(-m))) > tol) return false;
  }
  return true;
}

void FourierPoly::symmetrize_real() {
  FourierPoly r;
  for (const auto& [m, z] : c_) {
    r.set_coeff(m, 0.5 * (z + std::conj(coeff(-m))));
  }
  c_ = std::move(r.c_);
}

void FourierPoly::prune(double floor) {
  for (auto it = c_.begin(); it != c_.end();) {
    if (std::abs(it->second) <= floor) {
      it = c_.erase(it);
    } else {
      ++it;
    }
  }
}

double coeff_distance(const FourierPoly& a, const FourierPoly& b) {
  double d = 0.0;
  for (const auto& [m, z] : a.coeffs()) d = std::max(d, std::abs(z - b.coeff(m)));
  for (const auto& [m, z] : b.coeffs()) d = std::max(d, std::abs(z - a.coeff(m)));
  return d;
}

std::vector<Complex> sample_grid(const FourierPoly& f, std::size_t n) {
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = f.evaluate(static_cast<double>(j) / static_cast<double>(n));
  }
  return out;
}

FourierPoly coeffs_from_samples(const std::vector<Complex>& samples,
                                std::int32_t keep_band, double floor) {
  const std::size_t n = samples.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("sample count must be a power of two");
  }
  const auto spectrum = detail::dft_forward(samples);
  FourierPoly f;
  const std::int32_t half = static_cast<std::int32_t>(n / 2);
  const std::int32_t bmax = std::min(keep_band, half - 1);
  for (std::int32_t m = -bmax; m <= bmax; ++m) {
    const std::size_t idx = static_cast<std::size_t>((m + static_cast<std::int32_t>(n)) % static_cast<std::int32_t>(n));
    f.set_coeff(m, spectrum[idx] / static_cast<double>(n), floor);
  }
  return f;
}

}  // namespace skewprod
