#include "kronecker/real.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "kronecker/errors.hpp"

namespace kronecker {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("invalid integer '" + std::string(s) + "'");
  Integer v(std::string(s), 10);
  return neg ? Integer(-v) : v;
}

Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_perfect_square(long k) {
  Integer v(k);
  return mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den <= 0) throw ParseError("non-positive denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  bool neg = false;
  if (s.front() == '-' || s.front() == '+') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
      throw ParseError("invalid exponent in '" + std::string(text) + "'");
    }
    if (exponent > 100000 || exponent < -100000) throw ParseError("exponent out of range");
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ParseError("invalid number '" + std::string(text) + "'");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw ParseError("invalid number '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw ParseError("invalid number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Integer mant(digits, 10);
  if (neg) mant = -mant;
  const long scale = exponent - frac_len;
  Rational q = scale >= 0 ? Rational(mant * pow10(scale)) : Rational(mant, pow10(-scale));
  q.canonicalize();
  return q;
}

std::string exact_token(const Rational& q) {
  Integer den = q.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Integer(5).get_mpz_t());
  if (den != 1) return q.get_str();
  if (twos == 0 && fives == 0) return q.get_num().get_str();
  const unsigned long places = std::max(twos, fives);
  Integer scaled = q.get_num() * pow10(places) / q.get_den();
  const bool neg = scaled < 0;
  std::string s = Integer(::abs(scaled)).get_str();
  if (s.size() <= places) s.insert(0, places - s.size() + 1, '0');
  s.insert(s.size() - places, ".");
  return neg ? "-" + s : s;
}

// ---------------------------------------------------------------------------

IrrationalPreset IrrationalPreset::sqrt_int(long k, int bits) {
  IrrationalPreset p;
  p.kind = Kind::SqrtInt;
  p.arg = k;
  p.precision_bits = bits;
  p.validate();
  return p;
}

IrrationalPreset IrrationalPreset::log_int(long k, int bits) {
  IrrationalPreset p;
  p.kind = Kind::LogInt;
  p.arg = k;
  p.precision_bits = bits;
  p.validate();
  return p;
}

void IrrationalPreset::validate() const {
  if (precision_bits < 2) throw DomainError("preset precision must be positive");
  switch (kind) {
    case Kind::SqrtInt:
      if (arg < 2 || is_perfect_square(arg)) {
        throw DomainError("sqrt preset needs a non-square integer >= 2, got " + std::to_string(arg));
      }
      break;
    case Kind::LogInt:
      if (arg < 2) throw DomainError("log preset needs an integer >= 2, got " + std::to_string(arg));
      break;
    case Kind::DecimalLiteral:
      parse_rational(literal);
      break;
    default:
      break;
  }
}

Scalar IrrationalPreset::evaluate(int bits) const {
  BigFloat lo(bits), hi(bits);
  switch (kind) {
    case Kind::SqrtInt:
      mpfr_sqrt_ui(lo.get(), static_cast<unsigned long>(arg), MPFR_RNDD);
      mpfr_sqrt_ui(hi.get(), static_cast<unsigned long>(arg), MPFR_RNDU);
      break;
    case Kind::LogInt:
      mpfr_log_ui(lo.get(), static_cast<unsigned long>(arg), MPFR_RNDD);
      mpfr_log_ui(hi.get(), static_cast<unsigned long>(arg), MPFR_RNDU);
      break;
    case Kind::Pi:
      mpfr_const_pi(lo.get(), MPFR_RNDD);
      mpfr_const_pi(hi.get(), MPFR_RNDU);
      break;
    case Kind::E:
      mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
      mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
      mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
      mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
      break;
    case Kind::Phi:
      mpfr_sqrt_ui(lo.get(), 5, MPFR_RNDD);
      mpfr_sqrt_ui(hi.get(), 5, MPFR_RNDU);
      mpfr_add_ui(lo.get(), lo.get(), 1, MPFR_RNDD);
      mpfr_add_ui(hi.get(), hi.get(), 1, MPFR_RNDU);
      mpfr_div_2ui(lo.get(), lo.get(), 1, MPFR_RNDD);
      mpfr_div_2ui(hi.get(), hi.get(), 1, MPFR_RNDU);
      break;
    case Kind::DecimalLiteral: {
      const Rational q = parse_rational(literal);
      mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
      break;
    }
  }
  Scalar s(DyadicInterval(std::move(lo), std::move(hi)));
  return negated ? -s : s;
}

std::string IrrationalPreset::token() const {
  std::string body;
  switch (kind) {
    case Kind::SqrtInt: body = "sqrt(" + std::to_string(arg) + ")"; break;
    case Kind::LogInt: body = "log(" + std::to_string(arg) + ")"; break;
    case Kind::Pi: body = "pi"; break;
    case Kind::E: body = "e"; break;
    case Kind::Phi: body = "phi"; break;
    case Kind::DecimalLiteral: body = "decimal(" + literal + ")"; break;
  }
  return negated ? "-" + body : body;
}

// ---------------------------------------------------------------------------

Real::Real(Rational q) {
  q.canonicalize();
  value_ = std::move(q);
}

Real::Real(IrrationalPreset p) {
  p.validate();
  value_ = std::move(p);
}

const Rational& Real::exact() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw DomainError("exact value requested from preset " + preset().token());
}

const IrrationalPreset& Real::preset() const { return std::get<IrrationalPreset>(value_); }

Scalar Real::at(int bits) const {
  if (is_exact()) return Scalar(exact());
  return preset().evaluate(bits);
}

std::string Real::token() const {
  if (is_exact()) return exact_token(exact());
  return preset().token();
}

Real Real::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  const bool neg = s.front() == '-';
  std::string_view body = neg ? s.substr(1) : s;

  auto with_arg = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (body.size() > prefix.size() + 1 && body.substr(0, prefix.size()) == prefix &&
        body.back() == ')') {
      return body.substr(prefix.size(), body.size() - prefix.size() - 1);
    }
    return std::nullopt;
  };

  IrrationalPreset p;
  p.negated = neg;
  if (auto arg = with_arg("sqrt(")) {
    p.kind = IrrationalPreset::Kind::SqrtInt;
    if (!all_digits(*arg)) throw ParseError("sqrt preset needs an integer argument: '" + std::string(s) + "'");
    p.arg = std::stol(std::string(*arg));
  } else if (auto arg = with_arg("log(")) {
    p.kind = IrrationalPreset::Kind::LogInt;
    if (!all_digits(*arg)) throw ParseError("log preset needs an integer argument: '" + std::string(s) + "'");
    p.arg = std::stol(std::string(*arg));
  } else if (auto arg = with_arg("decimal(")) {
    p.kind = IrrationalPreset::Kind::DecimalLiteral;
    p.literal = std::string(*arg);
  } else if (body == "pi") {
    p.kind = IrrationalPreset::Kind::Pi;
  } else if (body == "e") {
    p.kind = IrrationalPreset::Kind::E;
  } else if (body == "phi") {
    p.kind = IrrationalPreset::Kind::Phi;
  } else {
    return Real(parse_rational(s));
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return Real(std::move(p));
}

}  // namespace kronecker
