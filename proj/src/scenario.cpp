#include "skewprod/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include "skewprod/conjugacy.hpp"
#include "skewprod/version.hpp"

namespace skewprod {

using nlohmann::json;

namespace {

std::string normalize_name(std::string s) {
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

RotationNumber parse_angle(const json& node, const std::string& path) {
  if (node.is_string()) {
    const std::string name = normalize_name(node.get<std::string>());
    if (name == "golden") return RotationNumber::golden();
    if (name == "sqrt2-1") return RotationNumber::sqrt2_minus_1();
    if (name == "liouville-squares") return RotationNumber::liouville_squares();
    throw SchemaError(path, "unknown named angle '" + name +
                                "' (golden, sqrt2-1, liouville-squares)");
  }
  if (node.is_number()) {
    const double v = node.get<double>();
    if (!(v > 0.0 && v < 1.0)) {
      throw SchemaError(path, "numeric angle must lie in (0, 1) turns");
    }
    return RotationNumber::from_double(v);
  }
  throw SchemaError(path, "expected an angle (name string or number in turns)");
}

FourierPoly parse_phase_coeffs(const json& node, const std::string& path) {
  if (!node.is_array()) throw SchemaError(path, "expected array of [m, re, im]");
  FourierPoly p;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& e = node[i];
    const std::string ep = path + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number() || !e[2].is_number()) {
      throw SchemaError(ep, "expected [m, re, im]");
    }
    p.set_coeff(e[0].get<std::int32_t>(),
                Complex{e[1].get<double>(), e[2].get<double>()}, 0.0);
  }
  if (!p.is_real_valued(1e-12)) {
    throw SchemaError(path, "phase coefficients must be Hermitian (real-valued phase)");
  }
  return p;
}

CoefficientLaw parse_law(const json& node, const std::string& path) {
  if (!node.is_object()) throw SchemaError(path, "expected a law object");
  CoefficientLaw law;
  if (node.contains("amplitude")) {
    const std::string a = normalize_name(node["amplitude"].get<std::string>());
    if (a == "match-divisor") {
      law.amplitude = CoefficientLaw::Amplitude::kMatchDivisor;
    } else if (a == "inverse-power") {
      law.amplitude = CoefficientLaw::Amplitude::kInversePower;
    } else {
      throw SchemaError(path + ".amplitude",
                        "unknown amplitude rule (match-divisor, inverse-power)");
    }
  }
  if (node.contains("c")) law.c = node["c"].get<double>();
  if (node.contains("p")) law.p = node["p"].get<double>();
  if (node.contains("k_min")) law.k_min = node["k_min"].get<int>();
  return law;
}

/// Parsed cocycle block: either a closed generator or a coefficient law.
struct GeneratorBlock {
  std::optional<UnitaryFn> unit;
  std::optional<CoefficientLaw> law;
};

GeneratorBlock parse_cocycle_block(const json& node, const std::string& path,
                                   const RotationNumber& theta) {
  if (!node.is_object() || !node.contains("kind")) {
    throw SchemaError(path, "expected a cocycle object with a 'kind'");
  }
  const std::string kind = normalize_name(node["kind"].get<std::string>());
  GeneratorBlock block;
  if (kind == "character") {
    if (!node.contains("winding")) throw SchemaError(path + ".winding", "required");
    block.unit = UnitaryFn::character(node["winding"].get<std::int32_t>());
  } else if (kind == "constant") {
    double c = 0.0;
    if (node.contains("lambda")) {
      c = node["lambda"].get<double>();
    } else if (node.contains("lambda_times_theta")) {
      c = frac_mul(node["lambda_times_theta"].get<double>(), theta.value());
    } else {
      throw SchemaError(path, "constant cocycle needs 'lambda' (turns) or 'lambda_times_theta'");
    }
    block.unit = UnitaryFn::constant(c);
  } else if (kind == "trigpoly") {
    const std::int32_t winding =
        node.contains("winding") ? node["winding"].get<std::int32_t>() : 0;
    FourierPoly phase;
    if (node.contains("phase_coeffs")) {
      phase = parse_phase_coeffs(node["phase_coeffs"], path + ".phase_coeffs");
    }
    block.unit = UnitaryFn(winding, std::move(phase));
  } else if (kind == "lacunary") {
    if (!node.contains("law")) throw SchemaError(path + ".law", "required");
    block.law = parse_law(node["law"], path + ".law");
  } else {
    throw SchemaError(path + ".kind",
                      "unknown kind (character, constant, trigpoly, lacunary)");
  }
  return block;
}

CocycleSpec spec_from_block(const GeneratorBlock& block, RotationNumber theta,
                            RotationNumber alpha) {
  if (block.law.has_value()) {
    CocycleSpec s;
    s.dimension = 1;
    s.base_angles = {std::move(theta)};
    s.alpha = std::move(alpha);
    s.law = block.law;
    return s;
  }
  return CocycleSpec::single(*block.unit, std::move(theta), std::move(alpha));
}

MeasureSpec parse_measure(const json& node, const std::string& path) {
  if (node.is_string()) {
    if (normalize_name(node.get<std::string>()) == "haar") return MeasureSpec::haar();
    throw SchemaError(path, "unknown named measure (only 'haar')");
  }
  if (!node.is_object()) throw SchemaError(path, "expected a measure object or 'haar'");
  MeasureSpec mu;
  if (node.contains("atoms")) {
    const json& atoms = node["atoms"];
    if (!atoms.is_array()) throw SchemaError(path + ".atoms", "expected array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const json& a = atoms[i];
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        throw SchemaError(path + ".atoms[" + std::to_string(i) + "]",
                          "expected [angle, weight]");
      }
      mu.atoms.emplace_back(frac(a[0].get<double>()), a[1].get<double>());
    }
  }
  if (node.contains("moments")) {
    const json& moments = node["moments"];
    if (!moments.is_array()) throw SchemaError(path + ".moments", "expected array");
    for (std::size_t i = 0; i < moments.size(); ++i) {
      const json& m = moments[i];
      const std::string mp = path + ".moments[" + std::to_string(i) + "]";
      if (!m.is_array() || m.size() != 3 || !m[0].is_number_integer()) {
        throw SchemaError(mp, "expected [k, re, im]");
      }
      const std::int32_t k = m[0].get<std::int32_t>();
      if (k < 1) throw SchemaError(mp, "moment order must be >= 1");
      mu.density_moments[k] = Complex{m[1].get<double>(), m[2].get<double>()};
    }
  }
  if (node.contains("density_mass")) {
    mu.density_mass = node["density_mass"].get<double>();
  }
  return mu;
}

void parse_solver(const json& node, SolverConfig& cfg, const std::string& path) {
  if (!node.is_object()) throw SchemaError(path, "expected an object");
  if (node.contains("tol")) cfg.tol = node["tol"].get<double>();
  if (node.contains("constant_search_bound")) {
    cfg.constant_search_bound = node["constant_search_bound"].get<std::int64_t>();
  }
  if (node.contains("divisor_floor")) cfg.divisor_floor = node["divisor_floor"].get<double>();
  if (node.contains("analytic_depth")) cfg.analytic_depth = node["analytic_depth"].get<int>();
  if (node.contains("fejer_grid_log2")) cfg.fejer_grid_log2 = node["fejer_grid_log2"].get<int>();
  if (node.contains("run_detector")) cfg.run_detector = node["run_detector"].get<bool>();
  if (node.contains("detector")) {
    const json& d = node["detector"];
    if (!d.is_object()) throw SchemaError(path + ".detector", "expected an object");
    if (d.contains("band")) cfg.detector.band = d["band"].get<std::int32_t>();
    if (d.contains("iterations")) cfg.detector.iterations = d["iterations"].get<std::int64_t>();
    if (d.contains("battery")) cfg.detector.battery = d["battery"].get<std::int32_t>();
    if (d.contains("tau")) cfg.detector.tau = d["tau"].get<double>();
    if (d.contains("tau_prime")) cfg.detector.tau_prime = d["tau_prime"].get<double>();
    if (d.contains("tol")) cfg.detector.tol = d["tol"].get<double>();
  }
}

void parse_limits(const json& node, Limits& lim, const std::string& path) {
  if (!node.is_object()) throw SchemaError(path, "expected an object");
  if (node.contains("max_band")) lim.max_band = node["max_band"].get<std::int32_t>();
  if (node.contains("max_power")) lim.max_power = node["max_power"].get<std::int32_t>();
  if (node.contains("aliasing_budget")) {
    lim.aliasing_budget = node["aliasing_budget"].get<double>();
  }
}

// ---------------------------------------------------------------------------
// Report serialization helpers.

json unitary_to_json(const UnitaryFn& u) {
  json coeffs = json::array();
  for (const auto& [m, c] : u.phase().coeffs()) {
    coeffs.push_back({m, c.real(), c.imag()});
  }
  return json{{"winding", u.winding()}, {"phase_coeffs", std::move(coeffs)}};
}

json certificate_to_json(const Certificate& cert) {
  json out;
  out["name"] = certificate_name(cert);
  if (const auto* w = std::get_if<WindingObstruction>(&cert)) {
    out["winding"] = w->winding;
  } else if (const auto* m = std::get_if<MeanObstruction>(&cert)) {
    out["search_bound"] = m->search_bound;
    out["best_distance"] = m->best_distance;
  } else if (const auto* l = std::get_if<L2Divergence>(&cert)) {
    out["partial_sum"] = l->partial_sum;
    out["depth"] = l->depth;
    out["analytic_tail_divergent"] = l->analytic_tail_divergent;
  } else if (const auto* d = std::get_if<DetectorNull>(&cert)) {
    out["max_norm"] = d->max_norm;
    out["band"] = d->band;
    out["iterations"] = d->iterations;
  }
  return out;
}

json verdict_to_json(const Verdict& v) {
  json out;
  out["tag"] = to_string(v.tag);
  out["heuristic_only"] = v.heuristic_only;
  out["certificate"] = certificate_to_json(v.certificate);
  if (v.witness.has_value()) out["witness"] = unitary_to_json(*v.witness);
  if (v.measurable.has_value()) {
    const MeasurableWitness& mw = *v.measurable;
    json table = json::array();
    for (const auto& e : mw.table) {
      table.push_back({e.k, e.frequency_approx, e.value.real(), e.value.imag()});
    }
    out["measurable"] = json{{"table", std::move(table)},
                             {"l2_partial", mw.l2_partial},
                             {"l2_tail_bound", mw.l2_tail_bound},
                             {"rigorous_noncontinuity", mw.rigorous_noncontinuity},
                             {"convention_note", mw.convention_note}};
  }
  out["diagnostics"] = v.diagnostics;
  out["notes"] = v.notes;
  return out;
}

json measure_to_json(const MeasureSpec& mu) {
  json atoms = json::array();
  for (const auto& [angle, weight] : mu.atoms) atoms.push_back({angle, weight});
  json moments = json::array();
  for (const auto& [k, c] : mu.density_moments) {
    moments.push_back({k, c.real(), c.imag()});
  }
  return json{{"atoms", std::move(atoms)},
              {"moments", std::move(moments)},
              {"density_mass", mu.density_mass}};
}

json spec_to_json(const CocycleSpec& spec) {
  json out;
  out["dimension"] = spec.dimension;
  json bases = json::array();
  for (const auto& th : spec.base_angles) bases.push_back(th.value());
  out["base_angles"] = std::move(bases);
  out["alpha"] = spec.alpha_value();
  if (spec.is_law()) {
    out["law"] = json{
        {"amplitude", spec.law->amplitude == CoefficientLaw::Amplitude::kMatchDivisor
                          ? "match-divisor"
                          : "inverse-power"},
        {"c", spec.law->c},
        {"p", spec.law->p},
        {"k_min", spec.law->k_min}};
  } else {
    json gens = json::array();
    for (const auto& g : spec.generators) gens.push_back(unitary_to_json(g));
    out["generators"] = std::move(gens);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Task runners.

json run_classify_task(const Scenario& s, const RunOptions& opts,
                       ClassificationReport& rep, RunReport& rr) {
  rep = classify_system(s.cocycle, s.scan_n_max, s.solver, opts.threads);
  json out;
  out["m0"] = rep.m0;
  out["n0"] = rep.n0;
  out["weakly_ergodic"] = to_string(rep.weakly_ergodic);
  out["uniquely_ergodic"] = to_string(rep.uniquely_ergodic);
  out["ue_wrt_fixed_point"] = to_string(rep.ue_wrt_fixed_point);
  out["diagnostics"] = rep.diagnostics;
  out["notes"] = rep.notes;
  if (rep.fixed_point_witness.has_value()) {
    out["fixed_point_witness"] = unitary_to_json(*rep.fixed_point_witness);
    if (!s.cocycle.is_law()) {
      out["fixed_point_residual"] = fixed_point_check(
          s.cocycle, *rep.fixed_point_witness, rep.m0, 3, 2, s.limits);
    }
  }
  json levels = json::array();
  std::ostringstream tsv;
  tsv << "level\ttag\tcertificate\theuristic_only\n";
  for (const auto& lv : rep.levels) {
    levels.push_back({{"level", lv.level}, {"verdict", verdict_to_json(lv.verdict)}});
    tsv << lv.level << '\t' << to_string(lv.verdict.tag) << '\t'
        << certificate_name(lv.verdict.certificate) << '\t'
        << (lv.verdict.heuristic_only ? 1 : 0) << '\n';
  }
  out["levels"] = std::move(levels);
  rr.tables["levels.tsv"] = tsv.str();
  return out;
}

json run_average_task(const Scenario& s, RunReport& rr) {
  const double alpha = s.cocycle.alpha_value();
  const CPElement x = CPElement::v_power(1, alpha);
  json out;
  json rows = json::array();
  std::ostringstream tsv;
  tsv << "window\tgns_norm\tdeviation\n";
  bool have_prev = false;
  CPElement prev;
  double last_dev = 0.0;
  CPElement mean;
  for (const std::int64_t w : s.windows) {
    mean = cesaro_average(s.cocycle, x, w, s.limits);
    const double norm = gns_norm(mean);
    double dev = 0.0;
    if (have_prev) {
      dev = gns_norm(mean - prev);
      last_dev = dev;
    }
    rows.push_back({{"window", w}, {"gns_norm", norm}, {"deviation", dev}});
    tsv << w << '\t' << fmt_double(norm) << '\t' << fmt_double(dev) << '\n';
    prev = mean;
    have_prev = true;
  }
  out["series"] = std::move(rows);
  out["last_deviation"] = last_dev;
  json support = json::array();
  json terms = json::array();
  for (const auto& [n, a] : mean.terms()) {
    support.push_back(n);
    json coeffs = json::array();
    for (const auto& [m, c] : a.coeffs()) coeffs.push_back({m, c.real(), c.imag()});
    terms.push_back({{"n", n}, {"coeffs", std::move(coeffs)}});
  }
  out["limit_support"] = std::move(support);
  out["limit_terms"] = std::move(terms);
  rr.tables["cesaro.tsv"] = tsv.str();
  return out;
}

json run_states_task(const Scenario& s, const RunOptions& opts,
                     const std::optional<ClassificationReport>& classified,
                     RunReport& rr) {
  int n0 = 0;
  std::optional<UnitaryFn> witness;
  if (classified.has_value()) {
    n0 = classified->n0;
    if (n0 > 0) {
      const Verdict* v = classified->level_verdict(n0);
      if (v != nullptr && v->witness.has_value()) witness = v->witness;
    }
  } else {
    for (int n = 1; n <= s.scan_n_max && !witness.has_value(); ++n) {
      const Verdict v = classify_level(s.cocycle, n, s.solver);
      if (v.tag == VerdictTag::kContinuousCoboundary && v.witness.has_value()) {
        n0 = n;
        witness = v.witness;
      }
    }
  }
  json out;
  if (!witness.has_value()) {
    out["note"] =
        "no usable transfer function in the scan window - the canonical "
        "state is the only invariant state found";
    return out;
  }
  out["n0"] = n0;
  const int k_max = std::max(1, s.scan_n_max / n0);
  const std::int32_t band = std::min(
      s.limits.max_band,
      std::max<std::int32_t>(
          16, std::abs(witness->winding()) * (k_max + 1) + witness->phase().band() + 8));
  const WitnessTable table =
      build_witness_table(*witness, n0, k_max, s.cocycle, band);
  json measures_out = json::array();
  std::ostringstream tsv;
  tsv << "measure\tk\tmoment_re\tmoment_im\tpsi_re\tpsi_im\n";
  for (std::size_t i = 0; i < s.measures.size(); ++i) {
    const StateFunctional phi = state_from_measure(s.measures[i], table);
    json values = json::array();
    for (int k = -k_max; k <= k_max; ++k) {
      const CPElement x = CPElement::monomial(table.expansion(k), k * n0,
                                              s.cocycle.alpha_value());
      const Complex psi = phi.value(x);
      const Complex mom = s.measures[i].moment(k);
      values.push_back({{"input", "w V^" + std::to_string(k * n0)},
                        {"value", {psi.real(), psi.imag()}}});
      tsv << i << '\t' << k << '\t' << fmt_double(mom.real()) << '\t'
          << fmt_double(mom.imag()) << '\t' << fmt_double(psi.real()) << '\t'
          << fmt_double(psi.imag()) << '\n';
    }
    const double invariance =
        check_invariance(phi, s.cocycle, 5, 8, std::min(2, k_max) * n0, 3,
                         opts.seed, s.limits);
    measures_out.push_back({{"measure", measure_to_json(s.measures[i])},
                            {"values", std::move(values)},
                            {"invariance_residual", invariance}});
  }
  out["measures"] = std::move(measures_out);
  rr.tables["states.tsv"] = tsv.str();
  return out;
}

json run_conjugacy_task(const Scenario& s) {
  const CohomologyResult res =
      are_cohomologous(s.cocycle, *s.conjugate_against, s.solver);
  json out;
  out["verdict"] = verdict_to_json(res.verdict);
  out["cohomologous"] = res.cohomologous();
  if (res.transfer.has_value()) {
    out["transfer"] = unitary_to_json(*res.transfer);
    out["intertwining_residual"] = verify_intertwining(
        s.cocycle, *s.conjugate_against, *res.transfer, 3, 2, 2, s.limits);
  }
  return out;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError("$", e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "scenario must be a JSON object");
  if (j.contains("schema") && j["schema"].get<int>() != kReportSchema) {
    throw SchemaError("schema", "unsupported schema version");
  }
  Scenario s;
  try {
    if (!j.contains("name") || !j["name"].is_string()) {
      throw SchemaError("name", "required string");
    }
    s.name = j["name"].get<std::string>();
    if (!j.contains("base_angle")) throw SchemaError("base_angle", "required");
    const RotationNumber theta = parse_angle(j["base_angle"], "base_angle");
    const RotationNumber alpha =
        j.contains("alpha") ? parse_angle(j["alpha"], "alpha") : theta;
    if (!j.contains("cocycle")) throw SchemaError("cocycle", "required");
    s.cocycle = spec_from_block(parse_cocycle_block(j["cocycle"], "cocycle", theta),
                                theta, alpha);
    if (j.contains("conjugate_against")) {
      const GeneratorBlock block =
          parse_cocycle_block(j["conjugate_against"], "conjugate_against", theta);
      if (block.law.has_value()) {
        throw SchemaError("conjugate_against", "must be a closed-form cocycle");
      }
      s.conjugate_against = spec_from_block(block, theta, alpha);
    }
    if (j.contains("scan_n_max")) s.scan_n_max = j["scan_n_max"].get<int>();
    if (j.contains("solver")) parse_solver(j["solver"], s.solver, "solver");
    if (j.contains("limits")) parse_limits(j["limits"], s.limits, "limits");
    if (j.contains("windows")) {
      if (!j["windows"].is_array()) throw SchemaError("windows", "expected array");
      for (const auto& w : j["windows"]) {
        if (!w.is_number_integer()) throw SchemaError("windows", "expected integers");
        s.windows.push_back(w.get<std::int64_t>());
      }
    }
    if (!j.contains("tasks") || !j["tasks"].is_array()) {
      throw SchemaError("tasks", "required array");
    }
    for (const auto& t : j["tasks"]) s.tasks.push_back(t.get<std::string>());
    if (j.contains("measures")) {
      if (!j["measures"].is_array()) throw SchemaError("measures", "expected array");
      for (std::size_t i = 0; i < j["measures"].size(); ++i) {
        s.measures.push_back(parse_measure(j["measures"][i],
                                           "measures[" + std::to_string(i) + "]"));
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError("$", e.what());
  }
  return s;
}

void validate_scenario(const Scenario& s) {
  if (s.name.empty()) throw SchemaError("name", "must be nonempty");
  try {
    s.cocycle.validate();
  } catch (const std::exception& e) {
    throw SchemaError("cocycle", e.what());
  }
  if (s.conjugate_against.has_value()) {
    try {
      s.conjugate_against->validate();
    } catch (const std::exception& e) {
      throw SchemaError("conjugate_against", e.what());
    }
  }
  if (s.scan_n_max < 1) throw SchemaError("scan_n_max", "must be >= 1");
  if (s.solver.tol <= 0.0) throw SchemaError("solver.tol", "must be positive");
  if (!(s.solver.detector.effective_tau() < s.solver.detector.tau_prime)) {
    throw SchemaError("solver.detector", "tau must stay below tau_prime");
  }
  if (s.limits.max_band < 1 || s.limits.max_power < 1 ||
      s.limits.aliasing_budget <= 0.0) {
    throw SchemaError("limits", "bands/powers must be >= 1, budget positive");
  }
  std::int64_t prev_window = 0;
  for (const auto w : s.windows) {
    if (w <= prev_window) throw SchemaError("windows", "must be positive and ascending");
    prev_window = w;
  }
  if (s.tasks.empty()) throw SchemaError("tasks", "at least one task required");
  for (const auto& t : s.tasks) {
    if (t != "classify" && t != "coboundary" && t != "average" && t != "states" &&
        t != "conjugacy") {
      throw SchemaError("tasks", "unknown task '" + t + "'");
    }
    if ((t == "average" || t == "states") && s.cocycle.is_law()) {
      throw SchemaError("tasks", "task '" + t + "' needs closed-form generators");
    }
    if (t == "conjugacy" && !s.conjugate_against.has_value()) {
      throw SchemaError("tasks", "conjugacy task needs 'conjugate_against'");
    }
    if (t == "average" && s.windows.empty()) {
      throw SchemaError("windows", "average task needs a window schedule");
    }
    if (t == "states" && s.measures.empty()) {
      throw SchemaError("measures", "states task needs at least one measure");
    }
  }
  for (std::size_t i = 0; i < s.measures.size(); ++i) {
    try {
      validate_measure(s.measures[i]);
    } catch (const std::exception& e) {
      throw SchemaError("measures[" + std::to_string(i) + "]", e.what());
    }
  }
}

RunReport run_scenario(const Scenario& s, const RunOptions& opts) {
  validate_scenario(s);
  RunReport rr;
  json report;
  report["schema"] = kReportSchema;
  report["version"] = kVersion;
  report["name"] = s.name;
  report["seed"] = opts.seed;
  report["threads"] = opts.threads;
  json scenario_echo;
  scenario_echo["cocycle"] = spec_to_json(s.cocycle);
  if (s.conjugate_against.has_value()) {
    scenario_echo["conjugate_against"] = spec_to_json(*s.conjugate_against);
  }
  scenario_echo["scan_n_max"] = s.scan_n_max;
  scenario_echo["windows"] = s.windows;
  scenario_echo["tasks"] = s.tasks;
  json measures = json::array();
  for (const auto& mu : s.measures) measures.push_back(measure_to_json(mu));
  scenario_echo["measures"] = std::move(measures);
  report["scenario"] = std::move(scenario_echo);

  std::optional<ClassificationReport> classified;
  json tasks_out;
  for (const auto& task : s.tasks) {
    if (task == "classify") {
      ClassificationReport rep;
      tasks_out["classify"] = run_classify_task(s, opts, rep, rr);
      classified = std::move(rep);
    } else if (task == "coboundary") {
      tasks_out["coboundary"] =
          verdict_to_json(classify_level(s.cocycle, 1, s.solver));
    } else if (task == "average") {
      tasks_out["average"] = run_average_task(s, rr);
    } else if (task == "states") {
      tasks_out["states"] = run_states_task(s, opts, classified, rr);
    } else if (task == "conjugacy") {
      tasks_out["conjugacy"] = run_conjugacy_task(s);
    }
  }
  report["tasks"] = std::move(tasks_out);
  rr.report_json = report.dump(2) + "\n";
  return rr;
}

void write_report(const RunReport& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.json in " + out_dir);
    out << r.report_json;
  }
  for (const auto& [name, content] : r.tables) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write table " + name);
    out << content;
  }
}

}  // namespace skewprod
