#include "skewprod/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skewprod {

std::string to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::kContinuousCoboundary: return "ContinuousCoboundary";
    case VerdictTag::kMeasurableCoboundary: return "MeasurableCoboundary";
    case VerdictTag::kNotCoboundary: return "NotCoboundary";
    case VerdictTag::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string certificate_name(const Certificate& c) {
  struct Namer {
    std::string operator()(std::monostate) const { return "none"; }
    std::string operator()(const WindingObstruction&) const { return "winding_obstruction"; }
    std::string operator()(const MeanObstruction&) const { return "mean_obstruction"; }
    std::string operator()(const L2Divergence&) const { return "l2_divergence"; }
    std::string operator()(const DetectorNull&) const { return "detector_null"; }
  };
  return std::visit(Namer{}, c);
}

double DetectorConfig::effective_tau() const {
  if (tau > 0.0) return tau;
  const double scaled =
      10.0 * std::sqrt(2.0 * battery + 1.0) / std::sqrt(static_cast<double>(iterations));
  // Keep the configured invariant tau < tau' even at short iteration counts.
  return std::min(scaled, 0.9 * tau_prime);
}

namespace {

double dist_to_int(double t) {
  const double f = frac(t);
  return std::min(f, 1.0 - f);
}

// Compensated accumulation of exp(2*pi*i*j*phi), j = 0..count-1, each angle
// reduced mod 1 independently so nothing drifts over long runs.
Complex phasor_sum(double phi, std::int64_t count) {
  double sr = 0.0, cr = 0.0;  // Kahan sum + compensation, real part
  double si = 0.0, ci = 0.0;
  for (std::int64_t j = 0; j < count; ++j) {
    const Complex z = cis(frac_mul(static_cast<double>(j), phi));
    double y = z.real() - cr;
    double t = sr + y;
    cr = (t - sr) - y;
    sr = t;
    y = z.imag() - ci;
    t = si + y;
    ci = (t - si) - y;
    si = t;
  }
  return {sr, si};
}

}  // namespace

DetectorReport detect_invariant_vector(const UnitaryFn& u, double theta,
                                       const DetectorConfig& cfg) {
  if (u.winding() != 0) {
    throw std::invalid_argument("detector requires a winding-zero unitary");
  }
  if (cfg.band < 1 || cfg.iterations < 1 || cfg.battery < 0) {
    throw std::invalid_argument("detector needs band >= 1, iterations >= 1, battery >= 0");
  }
  if (cfg.effective_tau() >= cfg.tau_prime) {
    throw std::invalid_argument("null threshold must sit below the existence threshold");
  }

  DetectorReport rep;
  rep.band = cfg.band;
  rep.iterations = cfg.iterations;
  const double k_inv = 1.0 / static_cast<double>(cfg.iterations);

  if (u.is_character_multiple()) {
    // W is diagonal on characters: A_K e_m has norm |sum_j e^{2 pi i j phi_m}| / K
    // with phi_m = c + m*theta.  Summed in compensated arithmetic so the
    // report matches the closed-form geometric sum at the 1e-12 scale.
    const double c = u.phase().coeff(0).real();
    for (std::int32_t m = -cfg.battery; m <= cfg.battery; ++m) {
      const double phi = frac(c + frac_mul(static_cast<double>(m), theta));
      const double norm = std::abs(phasor_sum(phi, cfg.iterations)) * k_inv;
      rep.battery_norms.emplace_back(m, norm);
      if (norm > rep.max_norm) {
        rep.max_norm = norm;
        rep.argmax = m;
      }
    }
  } else {
    const UnitaryExpansion exp = expand_unitary(u, 2 * cfg.band);
    rep.aliasing = exp.aliasing_estimate;
    if (rep.aliasing > 10.0 * cfg.tol) {
      throw numeric_budget_error("multiplier expansion tail " +
                                 std::to_string(rep.aliasing) +
                                 " too large at band " + std::to_string(2 * cfg.band) +
                                 "; use a larger band");
    }
    std::vector<std::pair<std::int32_t, Complex>> taps(exp.poly.coeffs().begin(),
                                                       exp.poly.coeffs().end());
    const std::int32_t dim = 2 * cfg.band + 1;
    std::vector<Complex> ph(dim);
    for (std::int32_t i = 0; i < dim; ++i) {
      ph[i] = cis(frac_mul(static_cast<double>(i - cfg.band), theta));
    }
    for (std::int32_t m0 = -cfg.battery; m0 <= cfg.battery; ++m0) {
      std::vector<Complex> cur(dim), acc(dim), next(dim);
      cur[m0 + cfg.band] = 1.0;
      for (std::int64_t j = 0; j < cfg.iterations; ++j) {
        for (std::int32_t i = 0; i < dim; ++i) acc[i] += cur[i];
        if (j + 1 == cfg.iterations) break;
        std::fill(next.begin(), next.end(), Complex{});
        double out_mass = 0.0;
        for (std::int32_t i = 0; i < dim; ++i) {
          if (cur[i] == Complex{}) continue;
          const Complex base = ph[i] * cur[i];
          for (const auto& [off, tap] : taps) {
            const std::int32_t l = i - cfg.band + off;
            const Complex val = tap * base;
            if (std::abs(l) <= cfg.band) {
              next[l + cfg.band] += val;
            } else {
              out_mass += std::norm(val);
            }
          }
        }
        rep.spill = std::max(rep.spill, std::sqrt(out_mass));
        cur.swap(next);
      }
      double nsq = 0.0;
      for (const Complex& z : acc) nsq += std::norm(z);
      const double norm = std::sqrt(nsq) * k_inv;
      rep.battery_norms.emplace_back(m0, norm);
      if (norm > rep.max_norm) {
        rep.max_norm = norm;
        rep.argmax = m0;
      }
    }
  }
  rep.null_verdict = rep.max_norm < cfg.effective_tau();
  rep.witness_verdict = rep.max_norm >= cfg.tau_prime;
  return rep;
}

double coboundary_residual(const UnitaryFn& u, const UnitaryFn& w, double theta,
                           std::size_t grid) {
  double worst = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    const Complex rhs = std::conj(w.evaluate(frac(x + theta))) * w.evaluate(x);
    worst = std::max(worst, std::abs(u.evaluate(x) - rhs));
  }
  return worst;
}

Verdict solve_continuous(const UnitaryFn& u, double theta, const SolverConfig& cfg) {
  Verdict v;
  v.diagnostics["winding"] = static_cast<double>(u.winding());
  v.diagnostics["character_multiple"] = u.is_character_multiple() ? 1.0 : 0.0;

  if (u.winding() != 0) {
    v.tag = VerdictTag::kNotCoboundary;
    v.certificate = WindingObstruction{u.winding()};
    v.notes.push_back("nonzero winding: a transfer function w would give "
                      "conj(w(x+theta))*w(x) winding zero");
    if (u.is_character_multiple()) {
      v.notes.push_back("pure character: any measurable transfer function would need "
                        "|w_hat(m)| = |w_hat(m + winding)| for all m, forcing infinite "
                        "l^2 mass, so measurable solutions are excluded as well");
    }
    return v;
  }

  const FourierPoly& phi = u.phase();
  const double c0 = phi.coeff(0).real();

  // Constant part: only character windings can match it.
  double best_dist = std::numeric_limits<double>::infinity();
  std::int64_t best_m = 0;
  for (std::int64_t m = -cfg.constant_search_bound; m <= cfg.constant_search_bound; ++m) {
    const double d = dist_to_int(c0 + frac_mul(static_cast<double>(m), theta));
    if (d < best_dist) {
      best_dist = d;
      best_m = m;
    }
  }
  v.diagnostics["constant_gap"] = best_dist;
  const double accept = cfg.tol / 10.0;

  if (best_dist > accept) {
    MeanObstruction cert{cfg.constant_search_bound, best_dist};
    if (cfg.run_detector) {
      const DetectorReport rep = detect_invariant_vector(u, theta, cfg.detector);
      v.diagnostics["detector_max_norm"] = rep.max_norm;
      v.diagnostics["detector_tau"] = cfg.detector.effective_tau();
      v.diagnostics["detector_tau_prime"] = cfg.detector.tau_prime;
      if (rep.null_verdict) {
        v.tag = VerdictTag::kNotCoboundary;
        v.certificate = cert;
        v.notes.push_back("constant part matched by no character winding within the "
                          "search bound; detector corroborates (null)");
        return v;
      }
      v.tag = VerdictTag::kInconclusive;
      v.notes.push_back(rep.witness_verdict
                            ? "constant search found no match but the detector reports an "
                              "invariant vector; the search bound is likely too small"
                            : "constant search found no match and the detector landed "
                              "between its thresholds");
      return v;
    }
    v.tag = VerdictTag::kNotCoboundary;
    v.certificate = cert;
    v.notes.push_back("constant part matched by no character winding within the "
                      "search bound; detector corroboration disabled by configuration");
    return v;
  }

  // Divide the oscillating part by the small divisors.
  FourierPoly W;
  double min_div = std::numeric_limits<double>::infinity();
  for (const auto& [f, z] : phi.coeffs()) {
    if (f == 0) continue;
    const Complex div = Complex{1.0, 0.0} - cis(frac_mul(static_cast<double>(f), theta));
    const double mag = std::abs(div);
    min_div = std::min(min_div, mag);
    if (mag < cfg.divisor_floor) {
      v.tag = VerdictTag::kInconclusive;
      v.diagnostics["offending_frequency"] = static_cast<double>(f);
      v.diagnostics["min_divisor"] = mag;
      v.notes.push_back("small divisor below the floor at frequency " +
                        std::to_string(f) + "; refusing to divide");
      return v;
    }
    W.set_coeff(f, z / div);
  }
  if (min_div < std::numeric_limits<double>::infinity()) {
    v.diagnostics["min_divisor"] = min_div;
  }
  W.symmetrize_real();

  UnitaryFn w(static_cast<std::int32_t>(best_m), std::move(W));
  const double residual = coboundary_residual(u, w, theta, 1024);
  v.diagnostics["residual"] = residual;
  v.diagnostics["witness_winding"] = static_cast<double>(best_m);
  if (residual <= cfg.tol) {
    v.tag = VerdictTag::kContinuousCoboundary;
    v.witness = std::move(w);
    v.notes.push_back("constant matched by character winding search; oscillating part "
                      "solved by Fourier division");
    return v;
  }
  v.tag = VerdictTag::kInconclusive;
  v.notes.push_back("formal witness failed the grid residual gate");
  return v;
}

namespace {

// Level multiplier sum_{j < n} e^{2 pi i j t} (n < 0: minus the sum over
// j = n..-1), with every angle reduced mod 1 separately.
Complex level_multiplier(double t_turns, std::int64_t n) {
  Complex g{0.0, 0.0};
  if (n > 0) {
    for (std::int64_t j = 0; j < n; ++j) g += cis(frac_mul(static_cast<double>(j), t_turns));
  } else {
    for (std::int64_t j = n; j < 0; ++j) g -= cis(frac_mul(static_cast<double>(j), t_turns));
  }
  return g;
}

}  // namespace

Verdict solve_analytic(const CoefficientLaw& law, int level,
                       const RotationNumber& theta, const RotationNumber& alpha,
                       const SolverConfig& cfg) {
  Verdict v;
  v.diagnostics["level"] = static_cast<double>(level);

  if (law.c == 0.0) {
    v.tag = VerdictTag::kContinuousCoboundary;
    v.witness = UnitaryFn::one();
    v.diagnostics["residual"] = 0.0;
    v.notes.push_back("empty coefficient law: the cocycle is identically one");
    return v;
  }
  if (level == 0) {
    v.tag = VerdictTag::kContinuousCoboundary;
    v.witness = UnitaryFn::one();
    v.diagnostics["residual"] = 0.0;
    v.notes.push_back("level zero of a twisted family is identically one");
    return v;
  }

  const bool same_angle = (theta == alpha);
  v.diagnostics["twist_matches_base"] = same_angle ? 1.0 : 0.0;
  const std::int64_t n = level;

  MeasurableWitness table;
  table.convention_note =
      "one-sided table at the +q_k frequencies (the -q_k entries are conjugate); "
      "an l^2-summable formal solution with unimodular exponential is reported "
      "as a measurable transfer function";
  long double partial = 0.0L;
  long double first_sq = -1.0L, last_sq = 0.0L;
  bool depth_limited_twist = false;

  for (int k = law.k_min; k < law.k_min + cfg.analytic_depth; ++k) {
    if (!theta.has_term(k + 1)) break;  // convergent error needs the next term
    const long double q = theta.denominator_approx(k);
    const long double err = theta.convergent_error(k);  // q_k*theta - p_k
    double twist;
    if (same_angle) {
      twist = static_cast<double>(err);
    } else {
      if (q > 1.099511627776e12L) {  // 2^40: double product with alpha stays sharp
        depth_limited_twist = true;
        break;
      }
      twist = frac_mul(static_cast<double>(q), alpha.value());
    }
    const Complex g = level_multiplier(twist, n);
    const double s = law.s(k);
    Complex value;
    if (law.amplitude == CoefficientLaw::Amplitude::kMatchDivisor) {
      // phi_hat(q_k) = s_k (1 - e^{2 pi i e_k}) cancels the divisor exactly.
      value = s * g;
    } else {
      const Complex div = Complex{1.0, 0.0} - cis(static_cast<double>(err));
      const double mag = std::abs(div);
      if (mag == 0.0 || !std::isfinite(s / mag)) {
        // Terms beyond double range: record divergence and stop.
        last_sq = std::numeric_limits<long double>::infinity();
        partial = std::numeric_limits<long double>::infinity();
        table.table.push_back({k, static_cast<double>(q), Complex{}});
        break;
      }
      value = s * g / div;
    }
    table.table.push_back({k, static_cast<double>(q), value});
    const long double term_sq = static_cast<long double>(std::norm(value));
    partial += term_sq;
    if (first_sq < 0.0L) first_sq = term_sq;
    last_sq = term_sq;
  }

  const int depth = static_cast<int>(table.table.size());
  table.l2_partial = static_cast<double>(partial);
  v.diagnostics["depth_achieved"] = static_cast<double>(depth);
  v.diagnostics["l2_partial"] = table.l2_partial;
  if (depth_limited_twist) {
    v.notes.push_back("twist angle differs from the base rotation; the table stops "
                      "where q_k * alpha can no longer be reduced mod 1 at full "
                      "precision");
  }
  if (depth < 2) {
    v.tag = VerdictTag::kInconclusive;
    v.measurable = std::move(table);
    v.notes.push_back("continued-fraction data exhausted before any analysis depth");
    return v;
  }

  const double abs_n = static_cast<double>(std::llabs(n));
  const bool divergent_law =
      law.amplitude == CoefficientLaw::Amplitude::kMatchDivisor
          ? (law.p <= 0.5)
          : (last_sq >= first_sq && partial > 1.0L);

  if (divergent_law) {
    if (!same_angle && law.amplitude == CoefficientLaw::Amplitude::kMatchDivisor) {
      // Without exact twist angles the level multiplier has no lower bound.
      v.tag = VerdictTag::kInconclusive;
      v.measurable = std::move(table);
      v.notes.push_back("coefficient law diverges for the base twist, but the level "
                        "multiplier is uncontrolled for a different twist angle");
      return v;
    }
    v.tag = VerdictTag::kNotCoboundary;
    L2Divergence cert;
    cert.partial_sum = table.l2_partial;
    cert.depth = depth;
    cert.analytic_tail_divergent = true;
    v.certificate = cert;
    if (law.p == 0.0 && law.amplitude == CoefficientLaw::Amplitude::kMatchDivisor) {
      table.rigorous_noncontinuity = true;
      v.notes.push_back("coefficients stay bounded away from zero, so no continuous "
                        "solution exists either (coefficients of a continuous function "
                        "must vanish at infinity)");
    }
    v.notes.push_back("formal-solution l^2 mass diverges along the lacunary spectrum");
    v.measurable = std::move(table);
    return v;
  }

  // Convergent side: certified analytic tail bound (|g_n| <= |n|).
  if (law.amplitude == CoefficientLaw::Amplitude::kInversePower) {
    v.tag = VerdictTag::kInconclusive;
    v.measurable = std::move(table);
    v.notes.push_back("inverse-power amplitudes decayed over the computed table but "
                      "carry no analytic tail bound");
    return v;
  }
  const int d_last = law.k_min + depth - 1;
  table.l2_tail_bound = abs_n * abs_n * law.c * law.c *
                        std::pow(static_cast<double>(d_last), 1.0 - 2.0 * law.p) /
                        (2.0 * law.p - 1.0);
  v.diagnostics["l2_tail_bound"] = table.l2_tail_bound;

  // Non-continuity evidence: partial sums of the formal solution over the
  // last half of the table should stay uniformly small if a continuous
  // solution exists.  Evaluated exactly on a dyadic grid via q_k mod 2^g.
  const std::uint32_t grid = 1u << cfg.fejer_grid_log2;
  double tail_sup = 0.0;
  const int half_lo = law.k_min + depth / 2;
  std::vector<std::pair<std::uint32_t, Complex>> tail_terms;
  for (const auto& e : table.table) {
    if (e.k >= half_lo) tail_terms.emplace_back(theta.denominator_mod(e.k, grid), e.value);
  }
  for (std::uint32_t j = 0; j < grid; ++j) {
    double val = 0.0;
    for (const auto& [r, coeff] : tail_terms) {
      const std::uint64_t rot = (static_cast<std::uint64_t>(r) * j) % grid;
      val += 2.0 * (coeff * cis(static_cast<double>(rot) / grid)).real();
    }
    tail_sup = std::max(tail_sup, std::abs(val));
  }
  v.diagnostics["fejer_tail_sup"] = tail_sup;
  const double kappa = 0.1 * abs_n * std::abs(law.c);

  if (tail_sup >= kappa) {
    v.tag = VerdictTag::kMeasurableCoboundary;
    v.heuristic_only = true;
    table.rigorous_noncontinuity = false;
    v.notes.push_back("l^2 mass of the formal solution converges with a certified tail "
                      "bound (measurable transfer function exists)");
    v.notes.push_back("partial sums fail the uniform-Cauchy test on the dyadic grid; "
                      "continuity exclusion is heuristic");
    v.measurable = std::move(table);
    return v;
  }
  v.tag = VerdictTag::kInconclusive;
  v.measurable = std::move(table);
  v.notes.push_back("l^2 mass converges but the uniform-Cauchy test shows no failure; "
                    "measurable-versus-continuous stays undecided");
  return v;
}

Verdict classify(const CocycleSpec& spec, int level, const SolverConfig& cfg) {
  if (spec.is_law()) {
    return solve_analytic(*spec.law, level, spec.base_angles.at(0), spec.alpha, cfg);
  }
  const UnitaryFn u_level =
      twisted_level(spec, GroupElement::unit(spec.dimension, 0), level);
  return solve_continuous(u_level, spec.base_angle_value(0), cfg);
}

}  // namespace skewprod
