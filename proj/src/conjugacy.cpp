#include "skewprod/conjugacy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skewprod {

namespace {

void require_comparable(const CocycleSpec& u, const CocycleSpec& v) {
  if (u.is_law() || v.is_law()) {
    throw std::invalid_argument("coefficient-law cocycles are not comparable in closed form");
  }
  if (u.dimension != v.dimension) {
    throw std::invalid_argument("cocycle dimensions differ");
  }
  for (int i = 0; i < u.dimension; ++i) {
    if (!(u.base_angles[i] == v.base_angles[i])) {
      throw std::invalid_argument("cocycles live over different base rotations");
    }
  }
  if (!(u.alpha == v.alpha)) {
    throw std::invalid_argument("cocycles carry different twist angles");
  }
}

// Coefficient-band expansion of a twisted multiplier, widened until the
// discarded tail fits the aliasing budget.
FourierPoly expand_within(const UnitaryFn& w, const Limits& lim) {
  std::int32_t want = std::min(
      lim.max_band, std::max<std::int32_t>(std::abs(w.winding()) + w.phase().band() + 8, 8));
  for (;;) {
    const UnitaryExpansion exp = expand_unitary(w, want);
    if (exp.aliasing_estimate <= lim.aliasing_budget) return exp.poly;
    if (want >= lim.max_band) {
      throw numeric_budget_error("intertwiner multiplier tail " +
                                 std::to_string(exp.aliasing_estimate) +
                                 " exceeds budget at band " + std::to_string(want));
    }
    want = std::min(lim.max_band, want * 2);
  }
}

template <typename Fn>
void for_each_in_box(int dim, std::int64_t radius, Fn&& fn) {
  GroupElement g = GroupElement::zero(dim);
  for (auto& c : g.v) c = -radius;
  for (;;) {
    fn(g);
    int axis = dim - 1;
    while (axis >= 0 && g.v[axis] == radius) {
      g.v[axis] = -radius;
      --axis;
    }
    if (axis < 0) return;
    ++g.v[axis];
  }
}

}  // namespace

CohomologyResult are_cohomologous(const CocycleSpec& u, const CocycleSpec& v,
                                  const SolverConfig& cfg) {
  require_comparable(u, v);
  CohomologyResult result;
  const UnitaryFn ratio = u.generators[0].multiply(v.generators[0].adjoint());
  result.verdict = solve_continuous(ratio, u.base_angle_value(0), cfg);
  if (result.verdict.tag == VerdictTag::kContinuousCoboundary &&
      result.verdict.witness.has_value()) {
    const UnitaryFn& w = *result.verdict.witness;
    // In higher rank the single transfer function must solve every axis.
    for (int i = 1; i < u.dimension; ++i) {
      const UnitaryFn ratio_i = u.generators[i].multiply(v.generators[i].adjoint());
      const double res = coboundary_residual(ratio_i, w, u.base_angle_value(i));
      result.verdict.diagnostics["axis_" + std::to_string(i) + "_residual"] = res;
      if (res > cfg.tol) {
        result.verdict.tag = VerdictTag::kInconclusive;
        result.verdict.notes.push_back(
            "axis-0 transfer function fails axis " + std::to_string(i) +
            " (residual " + std::to_string(res) + ")");
        result.verdict.witness.reset();
        break;
      }
    }
  }
  if (result.verdict.tag == VerdictTag::kContinuousCoboundary) {
    result.transfer = result.verdict.witness;
  }
  return result;
}

CPElement apply_intertwiner(const UnitaryFn& w, const CPElement& x,
                            const Limits& lim) {
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    const UnitaryFn w_n = twisted_power(w, x.alpha(), n);
    if (w_n.is_one(1e-15)) {
      r.set_term(n, a);
      continue;
    }
    r.set_term(n, a.multiply(expand_within(w_n, lim), lim.max_band));
  }
  r.prune();
  return r;
}

double verify_intertwining(const CocycleSpec& u, const CocycleSpec& v,
                           const UnitaryFn& w, std::int64_t box_radius,
                           std::int32_t support, std::int32_t band,
                           const Limits& lim) {
  require_comparable(u, v);
  const double alpha = u.alpha_value();
  double worst = 0.0;
  for (std::int32_t n = -support; n <= support; ++n) {
    for (std::int32_t m = -band; m <= band; ++m) {
      const CPElement x = CPElement::monomial(FourierPoly::character(m), n, alpha);
      const CPElement psi_x = apply_intertwiner(w, x, lim);
      for_each_in_box(u.dimension, box_radius, [&](const GroupElement& g) {
        const CPElement lhs = apply_intertwiner(w, apply_skew(v, g, x, lim), lim);
        const CPElement rhs = apply_skew(u, g, psi_x, lim);
        worst = std::max(worst, gns_norm(lhs - rhs));
      });
    }
  }
  return worst;
}

}  // namespace skewprod
