#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/crossed.hpp"
#include "skewprod/solver.hpp"

namespace skewprod {

/// Three-valued flag: heuristic evidence never silently hardens into true
/// or false; anything resting on an unresolved level stays inconclusive.
enum class Flag { kFalse, kTrue, kInconclusive };

std::string to_string(Flag f);

struct LevelVerdict {
  int level = 0;
  Verdict verdict;
};

/// Ergodicity summary of a skew-product system over the scan window
/// 1 <= |n| <= n_max:
///   m0: least positive level carrying a continuous transfer function
///       (0 when none in the window) - the continuous levels found form
///       m0 * Z within the window;
///   n0: least positive level carrying any transfer function, continuous
///       or measurable (0 when none).
struct ClassificationReport {
  int n_max = 0;
  std::vector<LevelVerdict> levels;  // ordered n = -n_max..-1, 1..n_max
  int m0 = 0;
  int n0 = 0;
  Flag weakly_ergodic = Flag::kInconclusive;
  Flag uniquely_ergodic = Flag::kInconclusive;
  Flag ue_wrt_fixed_point = Flag::kInconclusive;
  std::optional<UnitaryFn> fixed_point_witness;  // w_{m0} when m0 > 0
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;

  const Verdict* level_verdict(int n) const;
};

/// Verdict for the level-n twisted family of the cocycle generator.
Verdict classify_level(const CocycleSpec& spec, int level,
                       const SolverConfig& cfg = {});

/// Scans levels n = +-1..n_max, derives m0/n0 and the three flags, and
/// stores the minimal-level witness.  Levels can be classified in parallel
/// (`threads` > 1) - results are collected in level order regardless.
ClassificationReport classify_system(const CocycleSpec& spec, int n_max,
                                     const SolverConfig& cfg = {}, int threads = 1);

/// w_{k*n0} = w * R^{n0}(w) * ... * R^{(k-1) n0}(w) with R the ambient
/// rotation: the transfer function at level k*n0 induced by the level-n0
/// witness.  Throws std::invalid_argument when the residual of the induced
/// equation exceeds tol (corrupted witness).
UnitaryFn witness_extend(const UnitaryFn& w_n0, int n0, int k, double alpha,
                         const CocycleSpec& spec, double tol = 1e-8);

/// Invariance residual of the fixed-point generator w_{m0} V^{m0}:
/// max over g in the centered box and 1 <= j <= powers of
/// gns_norm(Phi_g(y^j) - y^j), y = w_{m0} V^{m0}.
double fixed_point_check(const CocycleSpec& spec, const UnitaryFn& w_m0, int m0,
                         std::int64_t box_radius, int powers,
                         const Limits& lim = {});

}  // namespace skewprod
