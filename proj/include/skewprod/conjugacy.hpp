#pragma once

#include <cstdint>
#include <optional>

#include "skewprod/crossed.hpp"
#include "skewprod/solver.hpp"

namespace skewprod {

/// Outcome of the cohomology comparison of two cocycles over the same base:
/// the classification of the ratio u * v^* at the generator, plus the
/// transfer function w (u_g = theta_g(w^*) w v_g) when it is continuous.
struct CohomologyResult {
  Verdict verdict;
  std::optional<UnitaryFn> transfer;

  bool cohomologous() const {
    return verdict.tag == VerdictTag::kContinuousCoboundary;
  }
};

/// Requires both specs to share dimension and base angles (and alpha);
/// throws std::invalid_argument otherwise.  Law specs are not comparable
/// this way and are rejected.
CohomologyResult are_cohomologous(const CocycleSpec& u, const CocycleSpec& v,
                                  const SolverConfig& cfg = {});

/// The intertwiner induced by a transfer function w: the algebra map
/// fixing C(T) pointwise with V -> w V, i.e.
/// a_n V^n -> a_n * w^{(n)} V^n where w^{(n)} is the alpha-twisted power.
CPElement apply_intertwiner(const UnitaryFn& w, const CPElement& x,
                            const Limits& lim = {});

/// Max GNS residual of the intertwining identity
/// Psi(Phi^v_g(x)) = Phi^u_g(Psi(x)) over g in the centered box and the
/// monomial battery {chi_m V^n : |m| <= band, |n| <= support}.
/// This is C*-side verification; on the measurable side the same residual
/// in the GNS norm is reported as evidence, never as a proof.
double verify_intertwining(const CocycleSpec& u, const CocycleSpec& v,
                           const UnitaryFn& w, std::int64_t box_radius,
                           std::int32_t support, std::int32_t band,
                           const Limits& lim = {});

}  // namespace skewprod
