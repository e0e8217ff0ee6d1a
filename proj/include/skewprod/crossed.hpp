#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "skewprod/cocycle.hpp"
#include "skewprod/fourier.hpp"

namespace skewprod {

/// Caps on the two truncation directions of a crossed-product element:
/// coefficient band |m| and V-power support |n|.  Operations that would
/// exceed a cap throw band_overflow_error instead of truncating.
struct Limits {
  std::int32_t max_band = 512;
  std::int32_t max_power = 64;
  /// Largest acceptable expansion tail when a twisted multiplier is
  /// truncated to a coefficient band (see apply_skew).
  double aliasing_budget = 1e-10;
};

/// Finite sum x = sum_n a_n V^n in the crossed product of C(T) by the
/// rotation alpha, with V a V^* = a(. + alpha).  Terms are Fourier
/// polynomials keyed by the V-power; the ambient rotation angle rides along
/// so mismatched algebras cannot be combined silently.
class CPElement {
 public:
  using TermMap = std::map<std::int32_t, FourierPoly>;

  CPElement() = default;
  explicit CPElement(double alpha_angle) : alpha_(alpha_angle) {}

  static CPElement zero(double alpha) { return CPElement(alpha); }
  static CPElement identity(double alpha);
  static CPElement from_function(FourierPoly a, double alpha);
  static CPElement monomial(FourierPoly a, std::int32_t n, double alpha);
  static CPElement v_power(std::int32_t n, double alpha);

  double alpha() const { return alpha_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FourierPoly term(std::int32_t n) const;
  void set_term(std::int32_t n, FourierPoly a);
  void add_term(std::int32_t n, const FourierPoly& a);

  /// Largest |n| in the support (0 for zero element).
  std::int32_t power_radius() const;
  /// Largest coefficient band over all terms.
  std::int32_t band() const;

  CPElement& operator+=(const CPElement& o);
  CPElement& operator-=(const CPElement& o);
  CPElement& operator*=(Complex z);
  friend CPElement operator+(CPElement a, const CPElement& b) { return a += b; }
  friend CPElement operator-(CPElement a, const CPElement& b) { return a -= b; }
  friend CPElement operator*(CPElement a, Complex z) { return a *= z; }
  friend CPElement operator*(Complex z, CPElement a) { return a *= z; }

  void prune(double floor = kPruneFloor);

 private:
  TermMap terms_;
  double alpha_ = 0.0;

  friend CPElement multiply(const CPElement&, const CPElement&, const Limits&);
};

/// (a V^m)(b V^n) = a * alpha^m(b) V^{m+n}, extended bilinearly.
CPElement multiply(const CPElement& x, const CPElement& y, const Limits& lim = {});

/// (a V^n)^* = alpha^{-n}(conj a) V^{-n}.
CPElement adjoint(const CPElement& x, const Limits& lim = {});

/// Canonical expectation onto C(T): E(sum a_n V^n) = a_0.
FourierPoly expectation(const CPElement& x);

/// E(V^{-k} x) = alpha^{-k}(a_k): the k-th Fourier coefficient of x.
FourierPoly fourier_coefficient(const CPElement& x, std::int32_t k);

/// Canonical invariant state omega(a V^k) = (Haar integral of a) * delta_{k,0}.
Complex canonical_state(const CPElement& x);

/// Gauge automorphism for z = exp(2*pi*i*t): a_n V^n -> z^n a_n V^n.
CPElement gauge(const CPElement& x, double t);

/// Average of gauge over the order-th roots of unity; keeps exactly the
/// terms with n = 0 mod order (computed structurally, no root summation).
CPElement gauge_root_average(const CPElement& x, int order);

/// sum_{|k| <= K} V^k E(V^{-k} x); exact equal to x once K >= power_radius.
CPElement reconstruct(const CPElement& x, std::int32_t K);

/// Fejer-weighted variant: sum_{|k| < K} (1 - |k|/K) V^k E(V^{-k} x).
/// Converges to x as K grows (deviation (|k|/K)|a_k| per term) but is not
/// exact at finite K; see reconstruct() for the exact partial sum.
CPElement fejer_reconstruct(const CPElement& x, std::int32_t K);

/// GNS 2-norm sqrt(omega(x^* x)) = sqrt(sum_n sum_m |a_n_hat(m)|^2).
double gns_norm(const CPElement& x);

/// Skew automorphism attached to a cocycle: a_n V^n -> theta_g(a_n) u_g^{(n)} V^n.
/// Twisted multipliers are expanded at a band chosen within lim.max_band;
/// throws numeric_budget_error if the expansion tail cannot be brought under
/// the aliasing budget.
CPElement apply_skew(const CocycleSpec& spec, const GroupElement& g,
                     const CPElement& x, const Limits& lim = {});

/// Box Cesaro mean (1/window^d) sum_{g in {0..window-1}^d} Phi_g(x),
/// accumulated in ascending lexicographic g order (bit-stable reduction).
CPElement cesaro_average(const CocycleSpec& spec, const CPElement& x,
                         std::int64_t window, const Limits& lim = {});

/// Vector in the GNS space H = closure(span{a V^n : a, n}), stored by the
/// same term map as the element it represents: component n is the
/// a_n-coefficient of a V^n monomial vector.  The group acts componentwise
/// by xi_n -> theta_g(xi_n) u_g^{(n)}, matching the skew automorphism on
/// monomials (property-tested, not just asserted).
struct GNSVector {
  std::map<std::int32_t, FourierPoly> comps;

  static GNSVector from_element(const CPElement& x);
  double norm() const;
};

GNSVector gns_apply_skew(const CocycleSpec& spec, const GroupElement& g,
                         const GNSVector& v, const Limits& lim = {});

/// Box average of the unitary group action on a GNS vector; converges to
/// the orthogonal projection onto the invariant vectors as the window grows.
GNSVector gns_project_invariant(const CocycleSpec& spec, const GNSVector& v,
                                std::int64_t window, const Limits& lim = {});

/// Truncated maximal-abelianness test: over the band/power truncation, any
/// x that nearly commutes with chi_1 and chi_2 has small off-zero part.
/// The commutator constraint is assembled per V-power and its smallest
/// singular value is computed; off_zero_bound = residual / min over n != 0.
struct MasaReport {
  double min_singular_value = 0.0;   // over blocks n != 0
  std::int32_t argmin_power = 0;
  double residual_bound = 0.0;
  double off_zero_bound = 0.0;       // residual_bound / min_singular_value
};

MasaReport masa_commutant_check(double alpha, std::int32_t band,
                                std::int32_t power_radius, double residual_bound);

}  // namespace skewprod
