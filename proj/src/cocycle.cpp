#include "skewprod/cocycle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace skewprod {

GroupElement GroupElement::unit(int dim, int axis, std::int64_t step) {
  if (axis < 0 || axis >= dim) {
    throw std::invalid_argument("group axis out of range");
  }
  GroupElement g = zero(dim);
  g.v[axis] = step;
  return g;
}

bool GroupElement::is_zero() const {
  for (auto x : v) {
    if (x != 0) return false;
  }
  return true;
}

GroupElement GroupElement::operator+(const GroupElement& o) const {
  if (v.size() != o.v.size()) {
    throw std::invalid_argument("group element dimension mismatch");
  }
  GroupElement r = *this;
  for (std::size_t i = 0; i < v.size(); ++i) r.v[i] += o.v[i];
  return r;
}

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (auto& x : r.v) x = -x;
  return r;
}

double CoefficientLaw::s(int k) const {
  if (k <= 0) throw std::invalid_argument("coefficient index must be positive");
  return c / std::pow(static_cast<double>(k), p);
}

CocycleSpec CocycleSpec::trivial(RotationNumber theta, RotationNumber alpha) {
  CocycleSpec s;
  s.dimension = 1;
  s.base_angles = {std::move(theta)};
  s.alpha = std::move(alpha);
  s.generators = {UnitaryFn::one()};
  return s;
}

CocycleSpec CocycleSpec::single(UnitaryFn u, RotationNumber theta, RotationNumber alpha) {
  CocycleSpec s;
  s.dimension = 1;
  s.base_angles = {std::move(theta)};
  s.alpha = std::move(alpha);
  s.generators = {std::move(u)};
  return s;
}

double CocycleSpec::group_angle(const GroupElement& g) const {
  if (g.dim() != dimension) {
    throw std::invalid_argument("group element dimension mismatch");
  }
  double t = 0.0;
  for (int i = 0; i < dimension; ++i) {
    t += frac_mul(static_cast<double>(g.v[i]), base_angle_value(i));
  }
  return frac(t);
}

namespace {

// "Irrational enough" for our arithmetic: the continued fraction must not
// terminate within the first few terms.  Exact small rationals ([0;2] etc.)
// fail this; every bundled angle and any from_double of a generic real passes.
bool plausibly_irrational(const RotationNumber& r) { return r.has_term(6); }

}  // namespace

void CocycleSpec::validate(double tol) const {
  if (dimension < 1) throw std::invalid_argument("cocycle dimension must be >= 1");
  if (static_cast<int>(base_angles.size()) != dimension) {
    throw std::invalid_argument("need one base angle per group axis");
  }
  for (const auto& th : base_angles) {
    if (!plausibly_irrational(th)) {
      throw std::invalid_argument("base angle looks rational (continued fraction terminates)");
    }
  }
  if (!plausibly_irrational(alpha)) {
    throw std::invalid_argument("twist angle looks rational (continued fraction terminates)");
  }
  if (law.has_value()) {
    if (dimension != 1) {
      throw std::invalid_argument("coefficient-law cocycles are one-dimensional");
    }
    if (!generators.empty()) {
      throw std::invalid_argument("give either closed generators or a coefficient law, not both");
    }
    // c == 0 is the empty law (phase identically zero), which is legal.
    if (law->k_min < 1 || law->p < 0.0) {
      throw std::invalid_argument("coefficient law needs p >= 0, k_min >= 1");
    }
    return;
  }
  if (static_cast<int>(generators.size()) != dimension) {
    throw std::invalid_argument("need one generator per group axis");
  }
  if (dimension >= 2) {
    // Commutation compatibility: theta_i(u_j) u_i == theta_j(u_i) u_j.
    for (int i = 0; i < dimension; ++i) {
      for (int j = i + 1; j < dimension; ++j) {
        const UnitaryFn lhs = generators[j].rotate(base_angle_value(i)).multiply(generators[i]);
        const UnitaryFn rhs = generators[i].rotate(base_angle_value(j)).multiply(generators[j]);
        const double d = grid_distance(lhs, rhs, 256);
        if (d > tol) {
          throw std::invalid_argument("generator compatibility violated (residual " +
                                      std::to_string(d) + ")");
        }
      }
    }
  }
}

UnitaryFn cocycle_at(const CocycleSpec& spec, const GroupElement& g) {
  if (spec.is_law()) {
    throw std::invalid_argument("coefficient-law cocycle has no closed generator form");
  }
  if (g.dim() != spec.dimension) {
    throw std::invalid_argument("group element dimension mismatch");
  }
  UnitaryFn u = UnitaryFn::one();
  GroupElement pos = GroupElement::zero(spec.dimension);
  for (int axis = 0; axis < spec.dimension; ++axis) {
    const std::int64_t n = g.v[axis];
    const UnitaryFn& gen = spec.generators[axis];
    for (std::int64_t s = 0; s < std::llabs(n); ++s) {
      if (n > 0) {
        // u_{h+e} = theta_h(u_e) u_h
        u = gen.rotate(spec.group_angle(pos)).multiply(u);
        ++pos.v[axis];
      } else {
        // u_{h-e} = theta_{h-e}(u_e^*) u_h
        --pos.v[axis];
        u = gen.adjoint().rotate(spec.group_angle(pos)).multiply(u);
      }
    }
  }
  return u;
}

UnitaryFn twisted_power(const UnitaryFn& u, double step_angle, std::int64_t n) {
  UnitaryFn r = UnitaryFn::one();
  if (n > 0) {
    for (std::int64_t j = 0; j < n; ++j) {
      r = r.multiply(u.rotate(frac_mul(static_cast<double>(j), step_angle)));
    }
  } else if (n < 0) {
    const UnitaryFn ua = u.adjoint();
    for (std::int64_t j = n; j < 0; ++j) {
      r = r.multiply(ua.rotate(frac_mul(static_cast<double>(j), step_angle)));
    }
  }
  return r;
}

UnitaryFn twisted_level(const CocycleSpec& spec, const GroupElement& g, std::int64_t n) {
  return twisted_power(cocycle_at(spec, g), spec.alpha_value(), n);
}

double verify_cocycle(const CocycleSpec& spec, std::int64_t box_radius, int trials,
                      std::size_t grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(-box_radius, box_radius);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    GroupElement g = GroupElement::zero(spec.dimension);
    GroupElement h = GroupElement::zero(spec.dimension);
    for (int i = 0; i < spec.dimension; ++i) {
      g.v[i] = pick(rng);
      h.v[i] = pick(rng);
    }
    const UnitaryFn lhs = cocycle_at(spec, g + h);
    const UnitaryFn rhs = cocycle_at(spec, h).rotate(spec.group_angle(g))
                              .multiply(cocycle_at(spec, g));
    worst = std::max(worst, grid_distance(lhs, rhs, grid));
  }
  return worst;
}

double verify_twisted_law(const CocycleSpec& spec, const GroupElement& g,
                          std::int64_t level_radius, int trials,
                          std::size_t grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(-level_radius, level_radius);
  const UnitaryFn u = cocycle_at(spec, g);
  const double alpha = spec.alpha_value();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::int64_t m = pick(rng);
    const std::int64_t n = pick(rng);
    const UnitaryFn lhs = twisted_power(u, alpha, m + n);
    const UnitaryFn rhs =
        twisted_power(u, alpha, m)
            .multiply(twisted_power(u, alpha, n).rotate(frac_mul(static_cast<double>(m), alpha)));
    worst = std::max(worst, grid_distance(lhs, rhs, grid));
  }
  return worst;
}

CocycleWalker::CocycleWalker(const CocycleSpec& spec, int axis)
    : spec_(spec), axis_(axis), g_(GroupElement::zero(spec.dimension)),
      u_(UnitaryFn::one()) {
  if (spec.is_law()) {
    throw std::invalid_argument("coefficient-law cocycle has no closed generator form");
  }
  if (axis < 0 || axis >= spec.dimension) {
    throw std::invalid_argument("walk axis out of range");
  }
}

void CocycleWalker::step() {
  u_ = spec_.generators[axis_].rotate(spec_.group_angle(g_)).multiply(u_);
  ++g_.v[axis_];
}

}  // namespace skewprod
