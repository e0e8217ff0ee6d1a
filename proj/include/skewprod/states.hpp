#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewprod/classifier.hpp"
#include "skewprod/crossed.hpp"

namespace skewprod {

/// Probability measure on the circle given by finitely many atoms plus the
/// truncated moment sequence of a density part.  moment(k) returns
/// c_k = integral of z^k: atom contribution + stored density moment
/// (density moments beyond the stored order count as zero; c_{-k} is the
/// conjugate of c_k; c_0 must come out as 1).
struct MeasureSpec {
  std::vector<std::pair<double, double>> atoms;     // (angle in turns, weight)
  std::map<std::int32_t, Complex> density_moments;  // k >= 1 -> moment
  double density_mass = 0.0;                        // c_0 of the density part

  static MeasureSpec haar();
  static MeasureSpec dirac(double angle);

  Complex moment(std::int32_t k) const;
};

struct ToeplitzCheck {
  bool ok = true;
  int first_bad_order = 0;      // smallest order whose minor dips below slack
  double min_eigenvalue = 0.0;  // of the largest Toeplitz matrix tested
};

/// Positive semidefiniteness of the moment matrix [c_{i-j}] up to `order`,
/// with slack for roundoff (minors >= -slack).
ToeplitzCheck toeplitz_psd_check(const MeasureSpec& mu, int order,
                                 double slack = 1e-10);

/// Throws std::invalid_argument when weights are non-positive, total mass
/// is not 1 within tol, or the Toeplitz test fails.
void validate_measure(const MeasureSpec& mu, int order = 6, double tol = 1e-9,
                      double psd_slack = 1e-10);

/// Dual-gauge automorphism of order n0: a V^k -> e^{2 pi i k/n0} a V^k
/// raised to the j-th power.
CPElement beta_gauge(const CPElement& x, int n0, int j = 1);

/// Conditional expectation onto the V-powers divisible by n0 (the average
/// of beta_gauge over j = 0..n0-1, computed structurally: terms with
/// n % n0 != 0 are dropped, the rest pass through unchanged).
CPElement expectation_n0(const CPElement& x, int n0);

/// Expanded transfer functions w_{k n0} for k in [-k_max, k_max], built
/// from the level-n0 witness via witness_extend and expanded at `band`.
struct WitnessTable {
  int n0 = 1;
  std::int32_t band = 0;
  std::map<std::int32_t, UnitaryFn> closed;     // k -> w_{k n0} closed form
  std::map<std::int32_t, FourierPoly> expanded;  // k -> coefficient expansion

  const FourierPoly& expansion(std::int32_t k) const;
};

WitnessTable build_witness_table(const UnitaryFn& w_n0, int n0, int k_max,
                                 const CocycleSpec& spec, std::int32_t band,
                                 double tol = 1e-8);

/// T(a V^{k n0}) = omega_0(a w_{k n0}^*) V^{k n0}; off-lattice powers are
/// annihilated first.  Combines expectation_n0, the witness untwist, and
/// the Haar average.
CPElement t_map(const CPElement& x, const WitnessTable& table);

/// State x -> sum_k moment(k) omega_0(a_{k n0} w_{k n0}^*): the measure's
/// moments paired with the T-map coefficients.
struct StateFunctional {
  const WitnessTable* witnesses = nullptr;
  MeasureSpec measure;

  Complex value(const CPElement& x) const;
};

StateFunctional state_from_measure(const MeasureSpec& mu,
                                   const WitnessTable& table);

/// Max |phi(Phi_g(x)) - phi(x)| over g in the centered box and a
/// deterministic battery of random elements with the given V-support and
/// band (seeded).  Positivity of the sampling is not asserted; this is the
/// invariance check only.
double check_invariance(const StateFunctional& phi, const CocycleSpec& spec,
                        std::int64_t box_radius, int n_elements,
                        std::int32_t support, std::int32_t band,
                        std::uint64_t seed, const Limits& lim = {});

/// Cesaro means of x at the given windows, with the GNS deviation between
/// consecutive windows; converges to the invariant conditional expectation
/// when the system admits one.
struct StabilizationReport {
  CPElement limit;  // mean at the last window
  std::vector<std::pair<std::int64_t, double>> deviations;  // (window, gns dev)
  double last_deviation = 0.0;
};

StabilizationReport expectation_onto_fixed_points(
    const CocycleSpec& spec, const CPElement& x,
    const std::vector<std::int64_t>& windows, const Limits& lim = {});

}  // namespace skewprod
