#include "skewprod/states.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace skewprod {

MeasureSpec MeasureSpec::haar() {
  MeasureSpec mu;
  mu.density_mass = 1.0;
  return mu;
}

MeasureSpec MeasureSpec::dirac(double angle) {
  MeasureSpec mu;
  mu.atoms.emplace_back(frac(angle), 1.0);
  return mu;
}

Complex MeasureSpec::moment(std::int32_t k) const {
  Complex c{0.0, 0.0};
  for (const auto& [angle, weight] : atoms) {
    c += weight * cis(frac_mul(static_cast<double>(k), angle));
  }
  if (k == 0) {
    c += density_mass;
  } else {
    const auto it = density_moments.find(std::abs(k));
    if (it != density_moments.end()) {
      c += (k > 0) ? it->second : std::conj(it->second);
    }
  }
  return c;
}

ToeplitzCheck toeplitz_psd_check(const MeasureSpec& mu, int order, double slack) {
  if (order < 0) throw std::invalid_argument("moment order must be >= 0");
  ToeplitzCheck check;
  check.first_bad_order = -1;
  for (int ord = 0; ord <= order; ++ord) {
    const int n = ord + 1;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = mu.moment(i - j);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (ord == order) check.min_eigenvalue = min_eig;
    if (min_eig < -slack && check.ok) {
      check.ok = false;
      check.first_bad_order = ord;
    }
  }
  return check;
}

void validate_measure(const MeasureSpec& mu, int order, double tol,
                      double psd_slack) {
  double mass = mu.density_mass;
  for (const auto& [angle, weight] : mu.atoms) {
    (void)angle;
    if (weight <= 0.0) throw std::invalid_argument("atom weights must be positive");
    mass += weight;
  }
  if (std::abs(mass - 1.0) > tol) {
    throw std::invalid_argument("measure mass " + std::to_string(mass) +
                                " is not 1");
  }
  const ToeplitzCheck check = toeplitz_psd_check(mu, order, psd_slack);
  if (!check.ok) {
    throw std::invalid_argument(
        "moment matrix is not positive semidefinite (order " +
        std::to_string(check.first_bad_order) + ")");
  }
}

CPElement beta_gauge(const CPElement& x, int n0, int j) {
  if (n0 < 1) throw std::invalid_argument("gauge order must be >= 1");
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    // Exact rational phase n * j / n0 mod 1.
    const std::int64_t num = (static_cast<std::int64_t>(n) * j) % n0;
    const double phase = static_cast<double>(num) / n0;
    r.set_term(n, a * cis(phase));
  }
  return r;
}

CPElement expectation_n0(const CPElement& x, int n0) {
  if (n0 < 1) throw std::invalid_argument("gauge order must be >= 1");
  return gauge_root_average(x, n0);
}

const FourierPoly& WitnessTable::expansion(std::int32_t k) const {
  const auto it = expanded.find(k);
  if (it == expanded.end()) {
    throw std::out_of_range("witness table has no level " +
                            std::to_string(static_cast<long long>(k) * n0));
  }
  return it->second;
}

WitnessTable build_witness_table(const UnitaryFn& w_n0, int n0, int k_max,
                                 const CocycleSpec& spec, std::int32_t band,
                                 double tol) {
  if (k_max < 0) throw std::invalid_argument("table radius must be >= 0");
  WitnessTable table;
  table.n0 = n0;
  table.band = band;
  const Limits lim;
  for (int k = -k_max; k <= k_max; ++k) {
    UnitaryFn w = witness_extend(w_n0, n0, k, spec.alpha_value(), spec, tol);
    const UnitaryExpansion exp = expand_unitary(w, band);
    if (exp.aliasing_estimate > lim.aliasing_budget) {
      throw numeric_budget_error("witness expansion tail " +
                                 std::to_string(exp.aliasing_estimate) +
                                 " exceeds budget at level " +
                                 std::to_string(static_cast<long long>(k) * n0));
    }
    table.closed.emplace(k, std::move(w));
    table.expanded.emplace(k, exp.poly);
  }
  return table;
}

namespace {

// omega_0(a w^*) = sum_m a_m conj(w_m): the Haar pairing of a against w.
Complex haar_pair(const FourierPoly& a, const FourierPoly& w) {
  Complex acc{0.0, 0.0};
  for (const auto& [m, c] : a.coeffs()) {
    acc += c * std::conj(w.coeff(m));
  }
  return acc;
}

// Enumerates the centered box {-r..r}^d in ascending lexicographic order.
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

CPElement t_map(const CPElement& x, const WitnessTable& table) {
  CPElement r(x.alpha());
  for (const auto& [n, a] : x.terms()) {
    if (n % table.n0 != 0) continue;
    const std::int32_t k = n / table.n0;
    const Complex val = haar_pair(a, table.expansion(k));
    r.set_term(n, FourierPoly::constant(val));
  }
  r.prune();
  return r;
}

Complex StateFunctional::value(const CPElement& x) const {
  if (witnesses == nullptr) {
    throw std::logic_error("state functional has no witness table");
  }
  Complex acc{0.0, 0.0};
  for (const auto& [n, a] : x.terms()) {
    if (n % witnesses->n0 != 0) continue;
    const std::int32_t k = n / witnesses->n0;
    acc += measure.moment(k) * haar_pair(a, witnesses->expansion(k));
  }
  return acc;
}

StateFunctional state_from_measure(const MeasureSpec& mu,
                                   const WitnessTable& table) {
  validate_measure(mu);
  StateFunctional phi;
  phi.witnesses = &table;
  phi.measure = mu;
  return phi;
}

double check_invariance(const StateFunctional& phi, const CocycleSpec& spec,
                        std::int64_t box_radius, int n_elements,
                        std::int32_t support, std::int32_t band,
                        std::uint64_t seed, const Limits& lim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double alpha = spec.alpha_value();
  double worst = 0.0;
  for (int e = 0; e < n_elements; ++e) {
    CPElement x(alpha);
    for (std::int32_t n = -support; n <= support; ++n) {
      FourierPoly a;
      for (std::int32_t m = -band; m <= band; ++m) {
        a.set_coeff(m, Complex{unit(rng), unit(rng)} / (1.0 + std::abs(m)));
      }
      x.set_term(n, std::move(a));
    }
    const Complex base = phi.value(x);
    for_each_in_box(spec.dimension, box_radius, [&](const GroupElement& g) {
      const Complex moved = phi.value(apply_skew(spec, g, x, lim));
      worst = std::max(worst, std::abs(moved - base));
    });
  }
  return worst;
}

StabilizationReport expectation_onto_fixed_points(
    const CocycleSpec& spec, const CPElement& x,
    const std::vector<std::int64_t>& windows, const Limits& lim) {
  if (windows.empty()) throw std::invalid_argument("need at least one window");
  StabilizationReport rep;
  bool have_prev = false;
  CPElement prev;
  for (const std::int64_t w : windows) {
    CPElement mean = cesaro_average(spec, x, w, lim);
    if (have_prev) {
      const double dev = gns_norm(mean - prev);
      rep.deviations.emplace_back(w, dev);
      rep.last_deviation = dev;
    }
    prev = std::move(mean);
    have_prev = true;
  }
  rep.limit = std::move(prev);
  return rep;
}

}  // namespace skewprod
