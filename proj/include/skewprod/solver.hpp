#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skewprod/cocycle.hpp"
#include "skewprod/rotation.hpp"
#include "skewprod/unitary.hpp"

namespace skewprod {

enum class VerdictTag {
  kContinuousCoboundary,
  kMeasurableCoboundary,
  kNotCoboundary,
  kInconclusive,
};

std::string to_string(VerdictTag tag);

/// Certificates attached to NotCoboundary verdicts.  The first three are
/// rigorous (relative to floating point and, for the mean obstruction, the
/// stated search bound); detector nullity is heuristic and is never
/// presented as more than that.
struct WindingObstruction {
  std::int64_t winding = 0;  // nonzero winding of the level under test
};
struct MeanObstruction {
  std::int64_t search_bound = 0;  // no |m_w| <= bound matches the constant
  double best_distance = 0.0;     // closest approach to an integer found
};
struct L2Divergence {
  double partial_sum = 0.0;  // certified lower bound for the formal l^2 mass
  int depth = 0;
  bool analytic_tail_divergent = false;  // closed-form tail diverges too
};
struct DetectorNull {
  double max_norm = 0.0;
  std::int32_t band = 0;
  std::int64_t iterations = 0;
};
using Certificate =
    std::variant<std::monostate, WindingObstruction, MeanObstruction,
                 L2Divergence, DetectorNull>;

std::string certificate_name(const Certificate& c);

/// Truncated formal-solution table backing a MeasurableCoboundary verdict.
/// Convention (always attached): an l^2-summable formal solution with
/// unimodular exponential is reported as a measurable transfer function;
/// non-continuity is certified only when flagged rigorous (coefficients
/// bounded away from zero), otherwise it rests on the Fejer-mean
/// uniform-Cauchy heuristic.
struct MeasurableWitness {
  struct Entry {
    int k = 0;                       // convergent index
    double frequency_approx = 0.0;   // q_k (approximate once past int64)
    Complex value;                   // formal solution coefficient at +q_k
  };
  std::vector<Entry> table;
  double l2_partial = 0.0;     // one-sided sum of |value|^2 through depth
  double l2_tail_bound = 0.0;  // analytic bound for the remaining tail
  bool rigorous_noncontinuity = false;
  std::string convention_note;
};

struct Verdict {
  VerdictTag tag = VerdictTag::kInconclusive;
  std::optional<UnitaryFn> witness;  // continuous transfer function
  std::optional<MeasurableWitness> measurable;
  Certificate certificate;
  bool heuristic_only = false;  // conclusion rests on heuristic evidence
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;

  bool is(VerdictTag t) const { return tag == t; }
};

/// Configuration of the truncated invariant-vector detector for
/// (W f)(x) = u(x) f(x + theta) acting on band-limited L^2(T).
struct DetectorConfig {
  std::int32_t band = 64;           // matrix truncation |m| <= band
  std::int64_t iterations = 4096;   // Cesaro length K
  std::int32_t battery = 8;         // probe characters chi_m, |m| <= battery
  double tau = 0.0;                 // null threshold; 0 -> default below
  double tau_prime = 0.5;           // witness threshold
  double tol = 1e-9;                // aliasing budget reference

  /// Default null threshold 10 * sqrt(battery count) / sqrt(K), capped at
  /// 0.9 * tau_prime so the null threshold always sits below the existence
  /// threshold even at short iteration counts.
  double effective_tau() const;
};

struct DetectorReport {
  double max_norm = 0.0;
  std::int32_t argmax = 0;
  bool null_verdict = false;     // max_norm < tau
  bool witness_verdict = false;  // max_norm >= tau_prime
  double aliasing = 0.0;         // multiplier expansion tail mass
  double spill = 0.0;            // band-truncation mass discarded (max step)
  std::int32_t band = 0;
  std::int64_t iterations = 0;
  std::vector<std::pair<std::int32_t, double>> battery_norms;
};

/// Runs the Cesaro-averaged power battery.  Preconditions: winding(u) == 0
/// (nonzero winding shifts the band every step and is classified upstream);
/// the multiplier expansion tail must satisfy aliasing <= 10 * cfg.tol,
/// otherwise numeric_budget_error is thrown.
DetectorReport detect_invariant_vector(const UnitaryFn& u, double theta,
                                       const DetectorConfig& cfg);

struct SolverConfig {
  double tol = 1e-9;
  std::int64_t constant_search_bound = 10000;  // winding search for constants
  double divisor_floor = 1e-14;                // refuse smaller small divisors
  int analytic_depth = 48;                     // convergent indices examined
  int fejer_grid_log2 = 10;                    // dyadic grid for the Cauchy test
  DetectorConfig detector;
  bool run_detector = true;
};

/// Decides whether the unitary u is a continuous coboundary for the
/// rotation theta: u = theta(w^*) w with w = chi_{m_w} e^{2 pi i W}.
/// Winding must vanish (else the winding obstruction is returned), the
/// constant part must be matched by an integer winding search, and the
/// remaining coefficients divide by 1 - e^{2 pi i m theta}.  The returned
/// witness always satisfies the defining equation within tol on a grid.
Verdict solve_continuous(const UnitaryFn& u, double theta,
                         const SolverConfig& cfg = {});

/// Classifies the level-`level` twisted family of a lacunary coefficient
/// law over theta (ambient rotation alpha).  Outcomes: MeasurableCoboundary
/// (summable formal solution + non-continuity certificate or heuristic),
/// NotCoboundary with l^2 divergence, or Inconclusive with diagnostics.
Verdict solve_analytic(const CoefficientLaw& law, int level,
                       const RotationNumber& theta, const RotationNumber& alpha,
                       const SolverConfig& cfg = {});

/// Dispatcher: trig-poly generators go through solve_continuous (with
/// detector corroboration where required), laws through solve_analytic.
/// `level` selects the twisted-family member u^{(level)} of the generator
/// along the first axis.  Note that trig-poly inputs with solvable constants
/// always yield continuous witnesses (finite Fourier division), so
/// measurable-but-not-continuous outcomes are reachable only through
/// coefficient-law inputs.
Verdict classify(const CocycleSpec& spec, int level, const SolverConfig& cfg = {});

/// Residual max_x |u(x) - conj(w(x + theta)) w(x)| on a uniform grid:
/// how well w solves the transfer equation for u.
double coboundary_residual(const UnitaryFn& u, const UnitaryFn& w, double theta,
                           std::size_t grid = 1024);

}  // namespace skewprod
