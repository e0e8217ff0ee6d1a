#include "skewprod/rotation.hpp"

#include <cmath>
#include <limits>

namespace skewprod {

namespace {

constexpr long double kTermOverflow = 1e4900L;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

std::string to_string(CfTail tail) {
  switch (tail) {
    case CfTail::kNone: return "none";
    case CfTail::kPeriodic: return "periodic";
    case CfTail::kSquares: return "rule:squares";
  }
  return "none";
}

std::optional<CfTail> cf_tail_from_string(const std::string& s) {
  if (s == "none") return CfTail::kNone;
  if (s == "periodic") return CfTail::kPeriodic;
  if (s == "rule:squares") return CfTail::kSquares;
  return std::nullopt;
}

RotationNumber RotationNumber::from_cf(std::vector<std::int64_t> head, CfTail tail) {
  if (head.empty()) throw std::invalid_argument("continued fraction head is empty");
  for (auto a : head) {
    if (a <= 0) throw std::invalid_argument("continued fraction terms must be positive");
  }
  RotationNumber r;
  r.head_ = std::move(head);
  r.tail_ = tail;
  r.compute_value();
  return r;
}

RotationNumber RotationNumber::golden() { return from_cf({1}, CfTail::kPeriodic); }

RotationNumber RotationNumber::sqrt2_minus_1() { return from_cf({2}, CfTail::kPeriodic); }

RotationNumber RotationNumber::liouville_squares() { return from_cf({10}, CfTail::kSquares); }

RotationNumber RotationNumber::from_double(double v, int max_terms) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("angle must lie in (0, 1)");
  std::vector<std::int64_t> head;
  double x = v;
  for (int i = 0; i < max_terms; ++i) {
    const double inv = 1.0 / x;
    auto a = static_cast<std::int64_t>(std::floor(inv));
    if (a < 1) a = 1;
    if (a > (std::int64_t{1} << 52)) {  // effectively rational at double scale
      break;
    }
    head.push_back(a);
    x = inv - std::floor(inv);
    if (x < 1e-14) break;
  }
  if (head.empty()) head.push_back(1);
  return from_cf(std::move(head), CfTail::kNone);
}

bool RotationNumber::has_term(int k) const {
  if (k < 1) return false;
  if (static_cast<std::size_t>(k) <= head_.size()) return true;
  if (tail_ == CfTail::kNone) return false;
  if (tail_ == CfTail::kPeriodic) return true;
  // kSquares: available until the long double range runs out.
  long double a = static_cast<long double>(head_.back());
  for (std::size_t i = head_.size(); i < static_cast<std::size_t>(k); ++i) {
    a = a * a;
    if (a > kTermOverflow) return false;
  }
  return true;
}

long double RotationNumber::term(int k) const {
  if (k < 1) throw std::invalid_argument("continued fraction terms start at k = 1");
  if (static_cast<std::size_t>(k) <= head_.size()) {
    return static_cast<long double>(head_[static_cast<std::size_t>(k) - 1]);
  }
  switch (tail_) {
    case CfTail::kNone:
      throw numeric_budget_error("continued fraction exhausted at term " + std::to_string(k));
    case CfTail::kPeriodic:
      return static_cast<long double>(
          head_[(static_cast<std::size_t>(k) - 1) % head_.size()]);
    case CfTail::kSquares: {
      long double a = static_cast<long double>(head_.back());
      for (std::size_t i = head_.size(); i < static_cast<std::size_t>(k); ++i) {
        a = a * a;
        if (a > kTermOverflow) {
          throw numeric_budget_error("continued fraction term overflow at k = " +
                                     std::to_string(k));
        }
      }
      return a;
    }
  }
  throw numeric_budget_error("unreachable tail state");
}

void RotationNumber::compute_value() {
  // Forward convergents in long double until the next one cannot move the
  // double value anymore.
  long double p_prev = 1.0L, q_prev = 0.0L;  // index -1
  long double p = 0.0L, q = 1.0L;            // index 0
  for (int k = 1; k <= 128 && has_term(k); ++k) {
    const long double a = term(k);
    const long double pn = a * p + p_prev;
    const long double qn = a * q + q_prev;
    p_prev = p; q_prev = q; p = pn; q = qn;
    if (q > 1e12L && q_prev > 0.0L) break;
    if (q > 1e30L) break;
  }
  value_ = static_cast<double>(p / q);
}

std::vector<RotationNumber::Convergent> RotationNumber::convergents(int count) const {
  std::vector<Convergent> out;
  if (count <= 0) return out;
  out.push_back({0, 1});
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p = 0, q = 1;
  for (int k = 1; k < count; ++k) {
    if (!has_term(k)) {
      throw numeric_budget_error("continued fraction exhausted at term " + std::to_string(k));
    }
    const long double a_ld = term(k);
    if (a_ld > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
      throw numeric_budget_error("convergent overflow at index " + std::to_string(k));
    }
    const auto a = static_cast<std::int64_t>(a_ld);
    std::int64_t pn = 0, qn = 0;
    if (__builtin_mul_overflow(a, p, &pn) || __builtin_add_overflow(pn, p_prev, &pn) ||
        __builtin_mul_overflow(a, q, &qn) || __builtin_add_overflow(qn, q_prev, &qn)) {
      throw numeric_budget_error("convergent overflow at index " + std::to_string(k));
    }
    p_prev = p; q_prev = q; p = pn; q = qn;
    out.push_back({p, q});
  }
  return out;
}

long double RotationNumber::denominator_approx(int k) const {
  if (k < 0) throw std::invalid_argument("convergent index must be >= 0");
  long double q_prev = 0.0L, q = 1.0L;
  for (int j = 1; j <= k; ++j) {
    const long double a = term(j);
    const long double qn = a * q + q_prev;
    q_prev = q; q = qn;
  }
  return q;
}

long double RotationNumber::complete_quotient(int k) const {
  // s_k = [a_k; a_{k+1}, ...] evaluated backward; terms grow so fast (or
  // repeat) that two dozen levels exceed long double resolution.
  const int depth = 24;
  int last = k;
  while (last < k + depth && has_term(last + 1)) ++last;
  long double s = 0.0L;
  bool have = false;
  for (int j = last; j >= k; --j) {
    long double a;
    try {
      a = term(j);
    } catch (const numeric_budget_error&) {
      have = false;
      continue;
    }
    s = have ? a + 1.0L / s : a;
    have = true;
  }
  if (!have) throw numeric_budget_error("complete quotient unavailable at " + std::to_string(k));
  return s;
}

long double RotationNumber::convergent_error(int k) const {
  if (k < 0) throw std::invalid_argument("convergent index must be >= 0");
  if (!has_term(k + 1)) {
    throw numeric_budget_error("convergent error needs term " + std::to_string(k + 1));
  }
  // e_k = q_k theta - p_k = (-1)^k / (q_k s_{k+1} + q_{k-1}) where s_{k+1}
  // is the complete quotient; fully accurate in the relative sense.
  const long double q = denominator_approx(k);
  const long double q_prev = (k == 0) ? 0.0L : denominator_approx(k - 1);
  const long double s = complete_quotient(k + 1);
  const long double mag = 1.0L / (q * s + q_prev);
  return (k % 2 == 0) ? mag : -mag;
}

std::uint64_t RotationNumber::denominator_mod(int k, std::uint64_t modulus) const {
  if (modulus == 0 || modulus > (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("modulus must lie in [1, 2^32]");
  }
  if (k < 0) throw std::invalid_argument("convergent index must be >= 0");
  std::uint64_t q_prev = 0, q = 1 % modulus;
  // Tail-rule terms are tracked mod `modulus` (squaring commutes with mod).
  std::uint64_t rule_residue = 0;
  for (int j = 1; j <= k; ++j) {
    std::uint64_t a_mod;
    if (static_cast<std::size_t>(j) <= head_.size()) {
      a_mod = static_cast<std::uint64_t>(head_[static_cast<std::size_t>(j) - 1]) % modulus;
      rule_residue = a_mod;
    } else {
      switch (tail_) {
        case CfTail::kNone:
          throw numeric_budget_error("continued fraction exhausted at term " + std::to_string(j));
        case CfTail::kPeriodic:
          a_mod = static_cast<std::uint64_t>(
                      head_[(static_cast<std::size_t>(j) - 1) % head_.size()]) % modulus;
          break;
        case CfTail::kSquares:
          rule_residue = mulmod(rule_residue, rule_residue, modulus);
          a_mod = rule_residue;
          break;
        default:
          throw numeric_budget_error("unreachable tail state");
      }
    }
    const std::uint64_t qn = (mulmod(a_mod, q, modulus) + q_prev) % modulus;
    q_prev = q; q = qn;
  }
  return q;
}

}  // namespace skewprod
