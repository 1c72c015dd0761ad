#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pcause {

/// Exact rational number. Always canonical (lowest terms, positive denominator).
using Rat = mpq_class;

/// Parses `a/b`, an integer, or a finite decimal such as `-0.125` exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rat parse_rat(std::string_view text);

/// `num/den`, or just `num` when the denominator is 1.
std::string to_string(const Rat& r);

/// Rough double value for sampling and reporting only.
inline double to_double(const Rat& r) { return r.get_d(); }

/// Least common multiple of the denominators of all values (1 for an empty list).
mpz_class denominator_lcm(const std::vector<Rat>& values);

/// Rational extended with +inf and -inf. Used for cost values and thresholds.
class ExtRat {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  ExtRat() = default;
  ExtRat(Rat value) : kind_(Kind::finite), value_(std::move(value)) {}  // NOLINT
  ExtRat(long value) : kind_(Kind::finite), value_(value) {}            // NOLINT

  static ExtRat pos_inf() { return ExtRat(Kind::pos_inf); }
  static ExtRat neg_inf() { return ExtRat(Kind::neg_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  /// Finite value; only meaningful when is_finite().
  const Rat& value() const { return value_; }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

  /// Sum; -inf + +inf is rejected with std::domain_error.
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b);

 private:
  explicit ExtRat(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::finite;
  Rat value_ = 0;
};

/// "inf", "-inf", or the rational in to_string form.
std::string to_string(const ExtRat& r);

inline std::ostream& operator<<(std::ostream& out, const ExtRat& r) { return out << to_string(r); }

/// Inverse of to_string(const ExtRat&); also accepts "+inf" and "infinity".
ExtRat parse_ext_rat(std::string_view text);

}  // namespace pcause
