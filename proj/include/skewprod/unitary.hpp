#pragma once

#include <cstdint>
#include <string>

#include "skewprod/fourier.hpp"

namespace skewprod {

/// A continuous unitary (circle-valued) function on the circle,
///
///     u(x) = exp(2*pi*i*(k*x + phi(x))),
///
/// stored as its integer winding number k plus a real-valued trigonometric
/// polynomial phase phi.  This closed form is exact under products,
/// adjoints and rotations, which is what cocycle arithmetic needs; the
/// coefficient expansion (expand_unitary) is the lossy direction.
class UnitaryFn {
 public:
  UnitaryFn() = default;

  /// Throws std::invalid_argument unless phase is real-valued within 1e-12
  /// (it is symmetrized exactly on acceptance).
  UnitaryFn(std::int32_t winding, FourierPoly phase);

  static UnitaryFn one();
  /// The character chi_m as a unitary: winding m, zero phase.
  static UnitaryFn character(std::int32_t m);
  /// Constant exp(2*pi*i*angle).
  static UnitaryFn constant(double angle);

  std::int32_t winding() const { return winding_; }
  const FourierPoly& phase() const { return phase_; }

  /// True when the phase is a constant (band 0), so the function is a
  /// scalar multiple of a character and expands to one exact coefficient.
  bool is_character_multiple() const { return phase_.band() == 0; }

  UnitaryFn multiply(const UnitaryFn& o) const;   // windings add, phases add
  UnitaryFn adjoint() const;                      // pointwise conjugate
  UnitaryFn rotate(double t) const;               // x -> x + t
  UnitaryFn power(std::int64_t n) const;

  Complex evaluate(double x) const;

  /// Normalize the constant part of the phase into [-1/2, 1/2); the function
  /// is unchanged (the phase matters mod 1) and accumulated constants stay
  /// small, which keeps long cocycle products accurate.
  void normalize_phase_constant();

  bool is_one(double tol = 1e-12) const;

 private:
  std::int32_t winding_ = 0;
  FourierPoly phase_;  // real-valued
};

struct UnitaryExpansion {
  FourierPoly poly;
  /// l^1 mass of the grid-transform coefficients beyond the kept band; an
  /// upper bound (up to grid aliasing) for the sup-norm truncation error.
  double aliasing_estimate = 0.0;
  std::size_t grid_size = 0;
};

/// Coefficient expansion of u through band N: samples on a power-of-two
/// grid of size >= 8*N (>= 4*band(phase)+8 as well), discrete transform,
/// keep |m| <= N.  Characters with constant phase are expanded exactly
/// without a grid.  Throws numeric_budget_error if the phase band cannot be
/// resolved within the grid budget.
UnitaryExpansion expand_unitary(const UnitaryFn& u, std::int32_t band);

/// max_j |u(x_j) - v(x_j)| over a uniform grid.
double grid_distance(const UnitaryFn& u, const UnitaryFn& v, std::size_t grid);

}  // namespace skewprod
