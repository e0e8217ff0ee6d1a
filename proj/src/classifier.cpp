#include "skewprod/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace skewprod {

std::string to_string(Flag f) {
  switch (f) {
    case Flag::kFalse: return "false";
    case Flag::kTrue: return "true";
    case Flag::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const Verdict* ClassificationReport::level_verdict(int n) const {
  for (const auto& lv : levels) {
    if (lv.level == n) return &lv.verdict;
  }
  return nullptr;
}

Verdict classify_level(const CocycleSpec& spec, int level, const SolverConfig& cfg) {
  if (level == 0) throw std::invalid_argument("level zero is trivially solvable");
  return classify(spec, level, cfg);
}

namespace {

bool is_coboundary_tag(VerdictTag t) {
  return t == VerdictTag::kContinuousCoboundary ||
         t == VerdictTag::kMeasurableCoboundary;
}

// Whether a NotCoboundary verdict excludes measurable transfer functions as
// well: rigorous for pure characters (equal-modulus progression), for the
// lacunary l^2 divergence, and for the constant/mean obstruction (measurable
// eigenfunctions of an irrational rotation are characters); detector-backed
// exclusions count as evidence.
bool measurable_excluded(const Verdict& v) {
  const std::string cert = certificate_name(v.certificate);
  if (cert == "l2_divergence" || cert == "mean_obstruction" || cert == "detector_null") {
    return true;
  }
  if (cert == "winding_obstruction") {
    auto it = v.diagnostics.find("character_multiple");
    return it != v.diagnostics.end() && it->second == 1.0;
  }
  return false;
}

}  // namespace

ClassificationReport classify_system(const CocycleSpec& spec, int n_max,
                                     const SolverConfig& cfg, int threads) {
  if (n_max < 1) throw std::invalid_argument("scan range must be >= 1");
  ClassificationReport rep;
  rep.n_max = n_max;

  std::vector<int> order;
  for (int n = -n_max; n <= -1; ++n) order.push_back(n);
  for (int n = 1; n <= n_max; ++n) order.push_back(n);

  std::vector<Verdict> verdicts(order.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      verdicts[i] = classify_level(spec, order[i], cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= order.size()) return;
        try {
          verdicts[i] = classify_level(spec, order[i], cfg);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(order.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    rep.levels.push_back({order[i], std::move(verdicts[i])});
  }

  int continuous = 0, measurable = 0, blocked = 0, open = 0;
  std::vector<int> continuous_levels;
  for (const auto& lv : rep.levels) {
    switch (lv.verdict.tag) {
      case VerdictTag::kContinuousCoboundary:
        ++continuous;
        continuous_levels.push_back(lv.level);
        break;
      case VerdictTag::kMeasurableCoboundary: ++measurable; break;
      case VerdictTag::kNotCoboundary: ++blocked; break;
      case VerdictTag::kInconclusive: ++open; break;
    }
  }
  rep.diagnostics["levels_continuous"] = continuous;
  rep.diagnostics["levels_measurable"] = measurable;
  rep.diagnostics["levels_not_coboundary"] = blocked;
  rep.diagnostics["levels_inconclusive"] = open;

  for (int n = 1; n <= n_max; ++n) {
    const Verdict* v = rep.level_verdict(n);
    if (rep.m0 == 0 && v->tag == VerdictTag::kContinuousCoboundary) rep.m0 = n;
    if (rep.n0 == 0 && is_coboundary_tag(v->tag)) rep.n0 = n;
  }

  bool lattice_ok = true;
  for (int n : continuous_levels) {
    if (rep.m0 == 0 || n % rep.m0 != 0) lattice_ok = false;
  }
  rep.diagnostics["continuous_levels_form_lattice"] = lattice_ok ? 1.0 : 0.0;
  if (!lattice_ok) {
    rep.notes.push_back("continuous levels do not form a lattice within the window; "
                        "flags degraded to inconclusive");
  }

  if (rep.m0 > 0) {
    const Verdict* v = rep.level_verdict(rep.m0);
    if (v->witness.has_value()) rep.fixed_point_witness = v->witness;
  }

  const bool any_open = open > 0;
  bool all_blocked_exclude_measurable = true;
  for (const auto& lv : rep.levels) {
    if (lv.verdict.tag == VerdictTag::kNotCoboundary &&
        !measurable_excluded(lv.verdict)) {
      all_blocked_exclude_measurable = false;
    }
  }
  bool any_rigorous_measurable_only = false;
  bool any_measurable_only = false;
  for (const auto& lv : rep.levels) {
    if (lv.verdict.tag == VerdictTag::kMeasurableCoboundary) {
      any_measurable_only = true;
      if (lv.verdict.measurable.has_value() &&
          lv.verdict.measurable->rigorous_noncontinuity) {
        any_rigorous_measurable_only = true;
      }
    }
  }

  if (!lattice_ok) {
    rep.weakly_ergodic = Flag::kInconclusive;
    rep.uniquely_ergodic = Flag::kInconclusive;
    rep.ue_wrt_fixed_point = Flag::kInconclusive;
  } else {
    // Trivial fixed points: no continuous transfer function at any level.
    if (rep.m0 > 0) {
      rep.weakly_ergodic = Flag::kFalse;
    } else if (any_open) {
      rep.weakly_ergodic = Flag::kInconclusive;
    } else {
      rep.weakly_ergodic = Flag::kTrue;
    }

    // One invariant state: no level carries any transfer function.
    if (rep.n0 > 0) {
      rep.uniquely_ergodic = Flag::kFalse;
    } else if (any_open || !all_blocked_exclude_measurable) {
      rep.uniquely_ergodic = Flag::kInconclusive;
    } else {
      rep.uniquely_ergodic = Flag::kTrue;
    }

    // Unique extensions from the fixed-point subalgebra: fails exactly on
    // measurable-but-not-continuous levels.
    if (any_rigorous_measurable_only) {
      rep.ue_wrt_fixed_point = Flag::kFalse;
    } else if (any_measurable_only || any_open || !all_blocked_exclude_measurable) {
      rep.ue_wrt_fixed_point = Flag::kInconclusive;
    } else {
      rep.ue_wrt_fixed_point = Flag::kTrue;
    }
  }

  rep.notes.push_back("flags describe the scanned window |n| <= " +
                      std::to_string(n_max) + " only");
  return rep;
}

UnitaryFn witness_extend(const UnitaryFn& w_n0, int n0, int k, double alpha,
                         const CocycleSpec& spec, double tol) {
  if (n0 < 1) throw std::invalid_argument("witness level must be >= 1");
  const double step = frac_mul(static_cast<double>(n0), alpha);
  UnitaryFn w = twisted_power(w_n0, step, k);
  if (spec.is_law()) {
    throw std::invalid_argument(
        "witness extension is validated against closed generators only");
  }
  const UnitaryFn u_level = twisted_level(
      spec, GroupElement::unit(spec.dimension, 0), static_cast<std::int64_t>(k) * n0);
  const double residual =
      coboundary_residual(u_level, w, spec.base_angle_value(0), 512);
  if (residual > tol) {
    throw std::invalid_argument("extended witness residual " +
                                std::to_string(residual) +
                                " exceeds tolerance (inconsistent input witness)");
  }
  return w;
}

double fixed_point_check(const CocycleSpec& spec, const UnitaryFn& w_m0, int m0,
                         std::int64_t box_radius, int powers, const Limits& lim) {
  if (m0 < 1) throw std::invalid_argument("fixed-point level must be >= 1");
  if (powers < 1) throw std::invalid_argument("need at least one power");
  const double alpha = spec.alpha_value();
  const std::int32_t want = std::min(
      lim.max_band,
      std::max(std::abs(w_m0.winding()) + w_m0.phase().band() + 8, 8));
  const UnitaryExpansion exp = expand_unitary(w_m0, want);
  if (exp.aliasing_estimate > lim.aliasing_budget * 10.0) {
    throw numeric_budget_error("fixed-point generator expansion tail too large");
  }
  const CPElement y = CPElement::monomial(exp.poly, m0, alpha);

  double worst = 0.0;
  CPElement y_pow = CPElement::identity(alpha);
  for (int j = 1; j <= powers; ++j) {
    y_pow = multiply(y_pow, y, lim);
    for (int d = 0; d < spec.dimension; ++d) {
      for (std::int64_t s = -box_radius; s <= box_radius; ++s) {
        const GroupElement g = GroupElement::unit(spec.dimension, d, s);
        const CPElement moved = apply_skew(spec, g, y_pow, lim);
        worst = std::max(worst, gns_norm(moved - y_pow));
      }
    }
  }
  return worst;
}

}  // namespace skewprod
