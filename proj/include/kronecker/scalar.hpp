#pragma once

#include <compare>
#include <string>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

namespace kronecker {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr int kDefaultPrecisionBits = 128;

// Owning wrapper around an mpfr_t. A moved-from value is a valid zero.
class BigFloat {
 public:
  explicit BigFloat(int bits = kDefaultPrecisionBits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  int bits() const { return static_cast<int>(mpfr_get_prec(value_)); }

  // Exact: every finite mpfr value is a dyadic rational.
  Rational to_rational() const;

 private:
  mpfr_t value_;
};

// Closed interval [lo, hi] with MPFR endpoints at a common precision.
// Every operation producing one rounds lo down and hi up.
class DyadicInterval {
 public:
  explicit DyadicInterval(int bits = kDefaultPrecisionBits);
  DyadicInterval(const Rational& value, int bits);
  DyadicInterval(const Rational& lo, const Rational& hi, int bits);
  DyadicInterval(BigFloat lo, BigFloat hi);

  int bits() const { return lo_.bits(); }
  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  BigFloat& lo() { return lo_; }
  BigFloat& hi() { return hi_; }

 private:
  BigFloat lo_;
  BigFloat hi_;
};

// A real number, either known exactly as a rational or enclosed in an
// outward-rounded interval. Immutable in practice: all operations return
// new values, and the true result always lies inside the returned enclosure.
class Scalar {
 public:
  enum class Mode { Exact, Enclosure };

  Scalar() : value_(Rational(0)) {}
  Scalar(int v) : value_(Rational(v)) {}
  Scalar(long v) : value_(Rational(v)) {}
  Scalar(long long v) : value_(Rational(static_cast<long>(v))) {}
  Scalar(const Integer& v) : value_(Rational(v)) {}
  Scalar(Rational v);
  explicit Scalar(DyadicInterval v) : value_(std::move(v)) {}

  // Enclosure of [lo, hi] rounded outward to `bits`.
  static Scalar enclose(const Rational& lo, const Rational& hi, int bits);

  Mode mode() const { return is_exact() ? Mode::Exact : Mode::Enclosure; }
  bool is_exact() const { return std::holds_alternative<Rational>(value_); }

  // Throws DomainError in enclosure mode.
  const Rational& exact() const;
  const DyadicInterval& enclosure() const;

  // Working precision of an enclosure; 0 for exact values.
  int bits() const;

  Rational lower() const;
  Rational upper() const;
  Rational midpoint() const;
  Rational radius() const;
  double to_double() const;

  bool contains(const Rational& q) const;
  bool is_zero() const { return is_exact() && sgn(exact()) == 0; }
  // -1, 0, +1 when the sign is certain; 2 when the enclosure contains 0
  // but is not exactly zero.
  int sign() const;

  DyadicInterval to_interval(int bits) const;

  // Short human-readable form: "p/q" or "[lo, hi]" with `digits` digits.
  std::string to_string(int digits = 20) const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  // Throws DomainError on exact zero, PrecisionExhausted on an enclosure
  // containing zero.
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  // Structural identity (same mode, same exact value or same endpoints).
  // Not a mathematical equality test for enclosures; see compare().
  bool identical(const Scalar& other) const;

 private:
  std::variant<Rational, DyadicInterval> value_;
};

// less / greater when the enclosures are strictly separated, equivalent when
// both sides are the same single point, unordered otherwise.
std::partial_ordering compare(const Scalar& a, const Scalar& b);

// Provable relations: true only if the relation holds for every point of
// both enclosures.
bool certainly_le(const Scalar& a, const Scalar& b);
bool certainly_lt(const Scalar& a, const Scalar& b);
bool certainly_ge(const Scalar& a, const Scalar& b);
bool certainly_gt(const Scalar& a, const Scalar& b);

Scalar abs(const Scalar& x);
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

// Distance to the nearest integer, in [0, 1/2].
Scalar dist_to_nearest_int(const Scalar& x);

// Nearest integer, ties to even. Throws AmbiguousEnclosure when the
// enclosure does not determine it.
Integer nearest_int(const Scalar& x);
Integer floor_of(const Scalar& x);
Integer ceil_of(const Scalar& x);

Integer nearest_int(const Rational& x);
Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

// Natural logarithm and exponential as enclosures at `bits`.
Scalar log_of(const Scalar& x, int bits);
Scalar exp_of(const Scalar& x, int bits);

// Decimal rendering of a rational rounded to `digits` significant digits.
std::string to_decimal(const Rational& q, int digits = 20);
// Decimal rendering of a bound, rounded down (lower) or up (upper).
std::string to_decimal_bound(const BigFloat& x, bool round_up, int digits);

// "p/q" or "p".
std::string to_fraction_string(const Rational& q);

}  // namespace kronecker
