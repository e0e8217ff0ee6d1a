#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewprod {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Default floor below which coefficients are dropped after arithmetic.
inline constexpr double kPruneFloor = 1e-15;

/// Thrown when an operation would push a coefficient band (or V-support)
/// past an explicit cap.  We refuse loudly instead of truncating silently.
class band_overflow_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a numeric budget is exhausted (grid too small for a phase
/// band, integer overflow in a convergent, continued fraction exhausted...).
class numeric_budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// x mod 1, result in [0, 1).
double frac(double x);

/// (a * b) mod 1 in [0, 1), with an fma-compensated product so the reduction
/// stays accurate even when |a * b| is large.
double frac_mul(double a, double b);

/// exp(2*pi*i*t).  The argument is in turns; it is reduced mod 1 before
/// scaling by 2*pi, so large inputs do not lose the fractional part.
Complex cis(double turns);

/// Finitely supported Fourier expansion f(x) = sum_m c(m) exp(2*pi*i*m*x)
/// on the circle R/Z.  Coefficients live in an ordered map so iteration and
/// serialization are deterministic.  Coefficients with modulus below the
/// prune floor are dropped on insertion.
class FourierPoly {
 public:
  using Map = std::map<std::int32_t, Complex>;

  FourierPoly() = default;

  static FourierPoly zero() { return {}; }
  static FourierPoly constant(Complex z);
  /// The character chi_m(x) = exp(2*pi*i*m*x).
  static FourierPoly character(std::int32_t m, Complex amplitude = 1.0);

  const Map& coeffs() const { return c_; }
  bool empty() const { return c_.empty(); }
  std::size_t support_size() const { return c_.size(); }

  Complex coeff(std::int32_t m) const;
  void set_coeff(std::int32_t m, Complex z, double floor = kPruneFloor);
  void add_to_coeff(std::int32_t m, Complex z, double floor = kPruneFloor);

  /// Largest |m| carrying a coefficient (0 for the zero polynomial).
  std::int32_t band() const;

  FourierPoly& operator+=(const FourierPoly& o);
  FourierPoly& operator-=(const FourierPoly& o);
  FourierPoly& operator*=(Complex z);
  friend FourierPoly operator+(FourierPoly a, const FourierPoly& b) { return a += b; }
  friend FourierPoly operator-(FourierPoly a, const FourierPoly& b) { return a -= b; }
  friend FourierPoly operator*(FourierPoly a, Complex z) { return a *= z; }
  friend FourierPoly operator*(Complex z, FourierPoly a) { return a *= z; }

  /// Pointwise product (coefficient convolution).  If max_band > 0 the
  /// result band is checked against it and band_overflow_error is thrown.
  FourierPoly multiply(const FourierPoly& o, std::int32_t max_band = 0) const;

  /// f(x + t): multiplies c(m) by exp(2*pi*i*m*t).
  FourierPoly rotate(double t) const;

  /// Complex conjugate of the function: coefficient at m becomes conj(c(-m)).
  FourierPoly conjugate() const;

  Complex evaluate(double x) const;

  double l2_norm() const;
  /// l^1 mass of the coefficients; an upper bound for the sup norm.
  double l1_norm() const;

  /// True when c(-m) == conj(c(m)) for all m, within tol.
  bool is_real_valued(double tol = 1e-12) const;

  /// Force exact conjugate symmetry by averaging c(m) and conj(c(-m)).
  void symmetrize_real();

  void prune(double floor = kPruneFloor);

  bool operator==(const FourierPoly& o) const { return c_ == o.c_; }

 private:
  Map c_;
};

/// max_m |a(m) - b(m)| over the union of supports.
double coeff_distance(const FourierPoly& a, const FourierPoly& b);

/// Uniform-grid samples f(j/n), j = 0..n-1.
std::vector<Complex> sample_grid(const FourierPoly& f, std::size_t n);

/// Inverse problem of sample_grid: least |m| <= n/2 coefficients from n
/// uniform samples (n a power of two; FFT-backed).
FourierPoly coeffs_from_samples(const std::vector<Complex>& samples,
                                std::int32_t keep_band,
                                double floor = kPruneFloor);

}  // namespace skewprod
