#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skewprod/rotation.hpp"
#include "skewprod/unitary.hpp"

namespace skewprod {

/// Element of the acting group Z^d.
struct GroupElement {
  std::vector<std::int64_t> v;

  static GroupElement zero(int dim) { return {std::vector<std::int64_t>(dim, 0)}; }
  static GroupElement unit(int dim, int axis, std::int64_t step = 1);
  int dim() const { return static_cast<int>(v.size()); }
  bool is_zero() const;
  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-() const;
};

/// Phase-coefficient law for cocycles whose phase lives on the convergent
/// denominators q_k of a rotation number: the generator is
/// u(x) = exp(2*pi*i*phi(x)) with phi supported on {±q_k | k >= k_min}.
///
/// Amplitude rules:
///   kMatchDivisor: phi_hat(q_k) = s_k * (1 - e^{2 pi i e_k}) where
///       e_k = q_k*theta - p_k, so the formal transfer-function coefficient
///       is exactly s_k (the small divisor cancels by construction).
///   kInversePower: phi_hat(q_k) = s_k directly.
/// In both cases s_k = c / k^p.
struct CoefficientLaw {
  enum class Amplitude { kMatchDivisor, kInversePower };

  Amplitude amplitude = Amplitude::kMatchDivisor;
  double c = 1.0;
  double p = 1.0;
  int k_min = 1;

  double s(int k) const;  // c / k^p
};

/// A 1-cocycle of Z^d over commuting irrational rotations theta_1..theta_d,
/// taking values in the unitaries of C(T), together with the angle alpha of
/// the ambient automorphism used by twisted families.  Exactly one of
/// `generators` (closed trig-poly form) or `law` (lacunary coefficient law,
/// dimension 1 only) describes the generator values.
struct CocycleSpec {
  int dimension = 1;
  std::vector<RotationNumber> base_angles;  // theta_i, one per generator
  RotationNumber alpha;
  std::vector<UnitaryFn> generators;  // u_{e_i}
  std::optional<CoefficientLaw> law;

  static CocycleSpec trivial(RotationNumber theta, RotationNumber alpha);
  /// d = 1 cocycle generated by a single unitary.
  static CocycleSpec single(UnitaryFn u, RotationNumber theta, RotationNumber alpha);

  double base_angle_value(int axis) const { return base_angles.at(axis).value(); }
  double alpha_value() const { return alpha.value(); }
  /// Rotation angle of theta_g, reduced mod 1 with compensated products.
  double group_angle(const GroupElement& g) const;

  /// Throws std::invalid_argument / numeric_budget_error on violations:
  /// dimension/base/generator arity, rational base angle, non-unitary data,
  /// or (d >= 2) failure of the compatibility identity
  /// theta_i(u_j) u_i = theta_j(u_i) u_j beyond tol.
  void validate(double tol = 1e-9) const;

  bool is_law() const { return law.has_value(); }
};

/// u_g for g in Z^d, built by the cocycle identity u_{g+h} = theta_g(u_h) u_g
/// walked axis by axis.  u_0 = 1, u_{-g} = theta_{-g}(u_g^*).
UnitaryFn cocycle_at(const CocycleSpec& spec, const GroupElement& g);

/// alpha-twisted power of a single unitary:
///   n = 0: 1
///   n > 0: u * R(u) * ... * R^{n-1}(u)
///   n < 0: R^{n}(u^*) * R^{n+1}(u^*) * ... * R^{-1}(u^*)
/// where R rotates by step_angle (each offset j*step_angle is reduced mod 1
/// with a compensated product, so long products stay accurate).
UnitaryFn twisted_power(const UnitaryFn& u, double step_angle, std::int64_t n);

/// Twisted family member u_g^{(n)} (the level-n companion of u_g under the
/// ambient rotation alpha).  Its winding is n * winding(u_g).
UnitaryFn twisted_level(const CocycleSpec& spec, const GroupElement& g, std::int64_t n);

/// Max sampled residual |u_{g+h}(x) - u_h(theta_g x) * u_g(x)| over `trials`
/// random pairs (g, h) in the centered box of the given radius and a uniform
/// x-grid of `grid` points.  Deterministic for a fixed seed.
double verify_cocycle(const CocycleSpec& spec, std::int64_t box_radius, int trials,
                      std::size_t grid = 128, std::uint64_t seed = 1);

/// Max sampled residual of the Z-cocycle law of a twisted family,
/// |u_g^{(m+n)}(x) - u_g^{(m)}(x) * u_g^{(n)}(x + m*alpha)|.
double verify_twisted_law(const CocycleSpec& spec, const GroupElement& g,
                          std::int64_t level_radius, int trials,
                          std::size_t grid = 128, std::uint64_t seed = 1);

/// Incremental walk g -> g + e_axis yielding u_g without recomputing
/// products from scratch; one unitary multiply per step.
class CocycleWalker {
 public:
  CocycleWalker(const CocycleSpec& spec, int axis = 0);

  const GroupElement& position() const { return g_; }
  const UnitaryFn& value() const { return u_; }  // u_g at the current g
  void step();

 private:
  const CocycleSpec& spec_;
  int axis_;
  GroupElement g_;
  UnitaryFn u_;
};

}  // namespace skewprod
