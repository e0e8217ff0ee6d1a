#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/fourier.hpp"

namespace skewprod {

/// How a finite continued-fraction head is extended to an infinite one.
enum class CfTail {
  kNone,      // nothing beyond the head (rational; most dynamics refuse it)
  kPeriodic,  // repeat the head cyclically
  kSquares,   // a_{k+1} = a_k^2 (fast Liouville-type growth)
};

std::string to_string(CfTail tail);
std::optional<CfTail> cf_tail_from_string(const std::string& s);

/// An angle in (0, 1) described by its continued fraction
/// [0; a_1, a_2, ...].  The head is stored exactly; the tail rule generates
/// later terms on demand.  Irrationality (needed by every small-divisor
/// argument) is equivalent to the tail being infinite, i.e. not kNone.
class RotationNumber {
 public:
  struct Convergent {
    std::int64_t p = 0;
    std::int64_t q = 1;
  };

  RotationNumber() = default;

  /// head must be non-empty with strictly positive entries.
  static RotationNumber from_cf(std::vector<std::int64_t> head, CfTail tail);

  /// Golden-mean angle [0; 1, 1, 1, ...] = (sqrt(5) - 1) / 2.
  static RotationNumber golden();

  /// sqrt(2) - 1 = [0; 2, 2, 2, ...].
  static RotationNumber sqrt2_minus_1();

  /// Bundled Liouville-type angle [0; 10, 100, 10^4, 10^8, ...].
  static RotationNumber liouville_squares();

  /// Angle from a decimal value via the Euclidean algorithm (finite head,
  /// no tail).  Useful for constants; not accepted as a dynamics base.
  static RotationNumber from_double(double v, int max_terms = 24);

  const std::vector<std::int64_t>& head() const { return head_; }
  CfTail tail() const { return tail_; }
  bool is_irrational() const { return tail_ != CfTail::kNone; }

  /// Double-precision value of the angle.
  double value() const { return value_; }

  /// Continued-fraction term a_k, k >= 1, as a long double (rule-generated
  /// terms overflow int64 quickly).  Throws numeric_budget_error once the
  /// tail is exhausted (kNone) or the term overflows long double.
  long double term(int k) const;

  bool has_term(int k) const;

  /// Convergents p_k/q_k for k = 0..count-1 with the convention
  /// (p_0, q_0) = (0, 1), p_k = a_k p_{k-1} + p_{k-2}.  Exact int64
  /// arithmetic; throws numeric_budget_error on overflow or exhaustion.
  std::vector<Convergent> convergents(int count) const;

  /// q_k as a long double (survives far past int64).
  long double denominator_approx(int k) const;

  /// Signed error e_k = q_k * theta - p_k, computed through the
  /// complete-quotient identity e_k = (-1)^k / (q_k s_{k+1} + q_{k-1}),
  /// which keeps full *relative* accuracy even when e_k is astronomically
  /// small.  Throws when terms run out.
  long double convergent_error(int k) const;

  /// q_k mod modulus (modulus <= 2^32), following the tail rule in modular
  /// arithmetic, so lattice evaluations of huge-frequency characters stay
  /// exact.  k >= 0.
  std::uint64_t denominator_mod(int k, std::uint64_t modulus) const;

  bool operator==(const RotationNumber& o) const {
    return head_ == o.head_ && tail_ == o.tail_;
  }

 private:
  std::vector<std::int64_t> head_;
  CfTail tail_ = CfTail::kNone;
  double value_ = 0.0;

  void compute_value();
  /// Complete quotient s_k = [a_k; a_{k+1}, ...] in long double.
  long double complete_quotient(int k) const;
};

}  // namespace skewprod
