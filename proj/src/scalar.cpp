#include "kronecker/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kronecker/errors.hpp"

namespace kronecker {

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(int bits) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_set_zero(value_, 1);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

Rational BigFloat::to_rational() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

// ---------------------------------------------------------------------------
// DyadicInterval

DyadicInterval::DyadicInterval(int bits) : lo_(bits), hi_(bits) {}

DyadicInterval::DyadicInterval(const Rational& value, int bits) : lo_(bits), hi_(bits) {
  mpfr_set_q(lo_.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_.get(), value.get_mpq_t(), MPFR_RNDU);
}

DyadicInterval::DyadicInterval(const Rational& lo, const Rational& hi, int bits)
    : lo_(bits), hi_(bits) {
  if (lo > hi) throw DomainError("interval with lower bound above upper bound");
  mpfr_set_q(lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
}

DyadicInterval::DyadicInterval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

namespace {

// One endpoint of a Scalar, without materializing a conversion.
struct Bound {
  const Rational* q = nullptr;
  mpfr_srcptr f = nullptr;
};

int cmp(Bound a, Bound b) {
  if (a.q && b.q) return cmp(*a.q, *b.q);
  if (a.f && b.f) return mpfr_cmp(a.f, b.f);
  if (a.f) return mpfr_cmp_q(a.f, b.q->get_mpq_t());
  return -mpfr_cmp_q(b.f, a.q->get_mpq_t());
}

Bound lower_bound(const Scalar& s) {
  if (s.is_exact()) return {&s.exact(), nullptr};
  return {nullptr, s.enclosure().lo().get()};
}

Bound upper_bound(const Scalar& s) {
  if (s.is_exact()) return {&s.exact(), nullptr};
  return {nullptr, s.enclosure().hi().get()};
}

int common_bits(const Scalar& a, const Scalar& b) {
  return std::max({a.bits(), b.bits(), static_cast<int>(MPFR_PREC_MIN)});
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(Rational v) {
  v.canonicalize();
  value_ = std::move(v);
}

Scalar Scalar::enclose(const Rational& lo, const Rational& hi, int bits) {
  return Scalar(DyadicInterval(lo, hi, bits));
}

const Rational& Scalar::exact() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw DomainError("exact value requested from an enclosure");
}

const DyadicInterval& Scalar::enclosure() const {
  if (const auto* e = std::get_if<DyadicInterval>(&value_)) return *e;
  throw DomainError("enclosure requested from an exact value");
}

int Scalar::bits() const { return is_exact() ? 0 : enclosure().bits(); }

Rational Scalar::lower() const { return is_exact() ? exact() : enclosure().lo().to_rational(); }

Rational Scalar::upper() const { return is_exact() ? exact() : enclosure().hi().to_rational(); }

Rational Scalar::midpoint() const {
  if (is_exact()) return exact();
  Rational m = (lower() + upper()) / 2;
  m.canonicalize();
  return m;
}

Rational Scalar::radius() const {
  if (is_exact()) return Rational(0);
  Rational r = (upper() - lower()) / 2;
  r.canonicalize();
  return r;
}

double Scalar::to_double() const {
  if (is_exact()) return exact().get_d();
  BigFloat mid(enclosure().bits() + 1);
  mpfr_add(mid.get(), enclosure().lo().get(), enclosure().hi().get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mpfr_get_d(mid.get(), MPFR_RNDN);
}

bool Scalar::contains(const Rational& q) const {
  Bound b{&q, nullptr};
  return cmp(lower_bound(*this), b) <= 0 && cmp(b, upper_bound(*this)) <= 0;
}

int Scalar::sign() const {
  if (is_exact()) return sgn(exact());
  const auto& e = enclosure();
  if (mpfr_sgn(e.lo().get()) > 0) return 1;
  if (mpfr_sgn(e.hi().get()) < 0) return -1;
  if (mpfr_zero_p(e.lo().get()) && mpfr_zero_p(e.hi().get())) return 0;
  return 2;
}

DyadicInterval Scalar::to_interval(int target_bits) const {
  if (is_exact()) return DyadicInterval(exact(), target_bits);
  const auto& e = enclosure();
  if (e.bits() == target_bits) return e;
  BigFloat lo(target_bits), hi(target_bits);
  mpfr_set(lo.get(), e.lo().get(), MPFR_RNDD);
  mpfr_set(hi.get(), e.hi().get(), MPFR_RNDU);
  return DyadicInterval(std::move(lo), std::move(hi));
}

std::string Scalar::to_string(int digits) const {
  if (is_exact()) return to_fraction_string(exact());
  return "[" + to_decimal_bound(enclosure().lo(), false, digits) + ", " +
         to_decimal_bound(enclosure().hi(), true, digits) + "]";
}

bool Scalar::identical(const Scalar& other) const {
  if (is_exact() != other.is_exact()) return false;
  if (is_exact()) return exact() == other.exact();
  const auto& a = enclosure();
  const auto& b = other.enclosure();
  return a.bits() == b.bits() && mpfr_equal_p(a.lo().get(), b.lo().get()) &&
         mpfr_equal_p(a.hi().get(), b.hi().get());
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-exact()));
  const auto& e = enclosure();
  BigFloat lo(e.bits()), hi(e.bits());
  mpfr_neg(lo.get(), e.hi().get(), MPFR_RNDD);
  mpfr_neg(hi.get(), e.lo().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
  const int bits = common_bits(a, b);
  const DyadicInterval x = a.to_interval(bits);
  const DyadicInterval y = b.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_add(lo.get(), x.lo().get(), y.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), x.hi().get(), y.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
  const int bits = common_bits(a, b);
  const DyadicInterval x = a.to_interval(bits);
  const DyadicInterval y = b.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_sub(lo.get(), x.lo().get(), y.hi().get(), MPFR_RNDD);
  mpfr_sub(hi.get(), x.hi().get(), y.lo().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

namespace {

using MpfrOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Hull of op over the four endpoint combinations (valid for * and for / by
// an interval not containing zero).
Scalar corner_hull(const DyadicInterval& x, const DyadicInterval& y, MpfrOp op) {
  const int bits = x.bits();
  BigFloat lo(bits), hi(bits), t(bits);
  bool first = true;
  for (mpfr_srcptr p : {x.lo().get(), x.hi().get()}) {
    for (mpfr_srcptr q : {y.lo().get(), y.hi().get()}) {
      op(t.get(), p, q, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      op(t.get(), p, q, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

}  // namespace

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
  if (a.is_zero() || b.is_zero()) return Scalar(0);
  const int bits = common_bits(a, b);
  return corner_hull(a.to_interval(bits), b.to_interval(bits), &mpfr_mul);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() / b.exact()));
  if (b.sign() == 2) throw PrecisionExhausted("division by an enclosure containing zero");
  if (a.is_zero()) return Scalar(0);
  const int bits = common_bits(a, b);
  return corner_hull(a.to_interval(bits), b.to_interval(bits), &mpfr_div);
}

std::partial_ordering compare(const Scalar& a, const Scalar& b) {
  const Bound alo = lower_bound(a), ahi = upper_bound(a);
  const Bound blo = lower_bound(b), bhi = upper_bound(b);
  if (cmp(ahi, blo) < 0) return std::partial_ordering::less;
  if (cmp(alo, bhi) > 0) return std::partial_ordering::greater;
  if (cmp(alo, ahi) == 0 && cmp(blo, bhi) == 0 && cmp(alo, blo) == 0) {
    return std::partial_ordering::equivalent;
  }
  return std::partial_ordering::unordered;
}

bool certainly_le(const Scalar& a, const Scalar& b) { return cmp(upper_bound(a), lower_bound(b)) <= 0; }
bool certainly_lt(const Scalar& a, const Scalar& b) { return cmp(upper_bound(a), lower_bound(b)) < 0; }
bool certainly_ge(const Scalar& a, const Scalar& b) { return certainly_le(b, a); }
bool certainly_gt(const Scalar& a, const Scalar& b) { return certainly_lt(b, a); }

Scalar abs(const Scalar& x) {
  if (x.is_exact()) return Scalar(Rational(::abs(x.exact())));
  const int s = x.sign();
  if (s >= 0 && s != 2) return x;
  if (s == -1) return -x;
  const auto& e = x.enclosure();
  BigFloat lo(e.bits()), hi(e.bits());
  mpfr_neg(hi.get(), e.lo().get(), MPFR_RNDU);
  mpfr_max(hi.get(), hi.get(), e.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Scalar min(const Scalar& a, const Scalar& b) {
  if (certainly_le(a, b)) return a;
  if (certainly_le(b, a)) return b;
  const int bits = common_bits(a, b);
  const DyadicInterval x = a.to_interval(bits), y = b.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_min(lo.get(), x.lo().get(), y.lo().get(), MPFR_RNDD);
  mpfr_min(hi.get(), x.hi().get(), y.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Scalar max(const Scalar& a, const Scalar& b) {
  if (certainly_le(a, b)) return b;
  if (certainly_le(b, a)) return a;
  const int bits = common_bits(a, b);
  const DyadicInterval x = a.to_interval(bits), y = b.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_max(lo.get(), x.lo().get(), y.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), x.hi().get(), y.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer nearest_int(const Rational& x) {
  const Integer f = floor_of(x);
  const Rational frac = x - f;
  const int c = cmp(frac, Rational(1, 2));
  if (c < 0) return f;
  if (c > 0) return f + 1;
  return mpz_even_p(f.get_mpz_t()) ? f : Integer(f + 1);
}

namespace {

template <class F>
Integer monotone_integer(const Scalar& x, F f, const char* what) {
  if (x.is_exact()) return f(x.exact());
  Integer lo = f(x.lower());
  Integer hi = f(x.upper());
  if (lo != hi) throw AmbiguousEnclosure(std::string(what) + " of enclosure " + x.to_string() + " is ambiguous");
  return lo;
}

}  // namespace

Integer nearest_int(const Scalar& x) {
  return monotone_integer(x, [](const Rational& q) { return nearest_int(q); }, "nearest integer");
}

Integer floor_of(const Scalar& x) {
  return monotone_integer(x, [](const Rational& q) { return floor_of(q); }, "floor");
}

Integer ceil_of(const Scalar& x) {
  return monotone_integer(x, [](const Rational& q) { return ceil_of(q); }, "ceiling");
}

Scalar dist_to_nearest_int(const Scalar& x) {
  auto dist = [](const Rational& q) {
    Rational r = q - nearest_int(q);
    return Rational(::abs(r));
  };
  if (x.is_exact()) return Scalar(dist(x.exact()));
  const Rational lo = x.lower();
  const Rational hi = x.upper();
  const Rational half(1, 2);
  Rational dmin, dmax;
  if (ceil_of(lo) <= floor_of(hi)) {
    dmin = 0;
  } else {
    dmin = std::min(dist(lo), dist(hi));
  }
  if (ceil_of(Rational(lo - half)) <= floor_of(Rational(hi - half))) {
    dmax = half;
  } else {
    dmax = std::max(dist(lo), dist(hi));
  }
  return Scalar::enclose(dmin, dmax, x.bits());
}

Scalar log_of(const Scalar& x, int bits) {
  if (x.sign() == 0 || x.sign() == -1) throw DomainError("logarithm of a non-positive value");
  if (x.sign() == 2) throw PrecisionExhausted("logarithm of an enclosure containing zero");
  const DyadicInterval e = x.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_log(lo.get(), e.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), e.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

Scalar exp_of(const Scalar& x, int bits) {
  if (x.is_zero()) return Scalar(1);
  const DyadicInterval e = x.to_interval(bits);
  BigFloat lo(bits), hi(bits);
  mpfr_exp(lo.get(), e.lo().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), e.hi().get(), MPFR_RNDU);
  return Scalar(DyadicInterval(std::move(lo), std::move(hi)));
}

namespace {

std::string format_mpfr(const char* fmt, int digits, mpfr_srcptr x) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, fmt, digits, x);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

std::string to_decimal(const Rational& q, int digits) {
  const int bits = static_cast<int>(std::ceil(digits * 3.33)) + 16;
  BigFloat f(bits);
  mpfr_set_q(f.get(), q.get_mpq_t(), MPFR_RNDN);
  return format_mpfr("%.*Rg", digits, f.get());
}

std::string to_decimal_bound(const BigFloat& x, bool round_up, int digits) {
  return format_mpfr(round_up ? "%.*RUg" : "%.*RDg", digits, x.get());
}

std::string to_fraction_string(const Rational& q) { return q.get_str(); }

}  // namespace kronecker
