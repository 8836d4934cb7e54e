#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "kronecker/scalar.hpp"

namespace kronecker {

// A named irrational constant that can be evaluated to any precision.
struct IrrationalPreset {
  enum class Kind { SqrtInt, LogInt, Pi, E, Phi, DecimalLiteral };

  Kind kind = Kind::Pi;
  long arg = 0;             // k for SqrtInt / LogInt
  std::string literal;      // DecimalLiteral only
  bool negated = false;
  int precision_bits = kDefaultPrecisionBits;

  static IrrationalPreset sqrt_int(long k, int bits = kDefaultPrecisionBits);
  static IrrationalPreset log_int(long k, int bits = kDefaultPrecisionBits);

  // Throws DomainError for sqrt of a perfect square or k < 2.
  void validate() const;

  Scalar evaluate() const { return evaluate(precision_bits); }
  Scalar evaluate(int bits) const;

  // "sqrt(2)", "-log(3)", "pi", "e", "phi", "decimal(0.125)".
  std::string token() const;

  bool operator==(const IrrationalPreset& o) const {
    return kind == o.kind && arg == o.arg && literal == o.literal && negated == o.negated;
  }
};

// The source of an input number: an exact rational or a preset. Keeping the
// source (rather than an evaluated Scalar) lets pipelines re-evaluate at a
// higher precision when an enclosure is too wide.
class Real {
 public:
  Real() : value_(Rational(0)) {}
  Real(Rational q);
  Real(long v) : Real(Rational(v)) {}
  Real(IrrationalPreset p);

  // Accepts "0.05", "-1.5e-3", "7/3", "sqrt(2)", "log(3)", "pi", "e", "phi",
  // "decimal(...)", each optionally preceded by '-'. Decimal strings are
  // exact. Throws ParseError.
  static Real parse(std::string_view token);

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const;
  const IrrationalPreset& preset() const;

  Scalar at(int bits) const;

  // Canonical token; parse(token()) == *this.
  std::string token() const;

  bool operator==(const Real& o) const { return value_ == o.value_; }

 private:
  std::variant<Rational, IrrationalPreset> value_;
};

// Exact decimal/fraction parser used for file formats.
Rational parse_rational(std::string_view text);

// Exact decimal rendering when the denominator is 2^a 5^b, else "p/q".
std::string exact_token(const Rational& q);

}  // namespace kronecker
