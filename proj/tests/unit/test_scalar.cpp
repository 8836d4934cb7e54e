#include "doctest.h"
#include "generators.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/real.hpp"
#include "kronecker/scalar.hpp"

using namespace kronecker;

namespace {

Scalar q(long p, long d = 1) { return Scalar(Rational(p, d)); }
Scalar enc(const char* token, int bits = 128) { return Real::parse(token).at(bits); }

}  // namespace

TEST_CASE("dist_to_nearest_int on exact values") {
  CHECK(dist_to_nearest_int(q(7, 3)).exact() == Rational(1, 3));
  CHECK(dist_to_nearest_int(q(-3, 10)).exact() == Rational(3, 10));
  CHECK(dist_to_nearest_int(q(1, 2)).exact() == Rational(1, 2));
  CHECK(dist_to_nearest_int(q(5)).exact() == 0);
}

TEST_CASE("dist_to_nearest_int on an enclosure with zero radius") {
  const Scalar x = Scalar::enclose(Rational(6, 5), Rational(6, 5), 128);
  const Scalar d = dist_to_nearest_int(x);
  CHECK(d.contains(Rational(1, 5)));
  CHECK(d.upper() - d.lower() < Rational(1, 1000000));
}

TEST_CASE("dist_to_nearest_int widens across the half-integer fold") {
  const Scalar x = Scalar::enclose(Rational(49, 100), Rational(51, 100), 64);
  const Scalar d = dist_to_nearest_int(x);
  CHECK(d.contains(Rational(1, 2)));
  CHECK(d.contains(Rational(49, 100)));
  CHECK(d.upper() <= Rational(1, 2));
}

TEST_CASE("nearest_int rounds half to even") {
  CHECK(nearest_int(q(12, 5)) == 2);
  CHECK(nearest_int(q(-3, 2)) == -2);
  CHECK(nearest_int(q(5, 2)) == 2);
  CHECK(nearest_int(q(7, 2)) == 4);
  CHECK(nearest_int(q(-5, 2)) == -2);
}

TEST_CASE("nearest_int of 70 sqrt(2) at 64 bits") {
  CHECK(nearest_int(Scalar(70) * enc("sqrt(2)", 64)) == 99);
}

TEST_CASE("nearest_int refuses an enclosure spanning a half-integer") {
  const Scalar x = Scalar::enclose(Rational(49, 100), Rational(51, 100), 64);
  CHECK_THROWS_AS(nearest_int(x), AmbiguousEnclosure);
}

TEST_CASE("exact mode has zero radius; presets meet the precision bound") {
  CHECK(q(3, 7).radius() == 0);
  for (const char* token : {"sqrt(2)", "log(3)", "pi", "e", "phi", "-sqrt(7)"}) {
    for (int bits : {32, 64, 128, 512}) {
      const Scalar x = enc(token, bits);
      CHECK_FALSE(x.is_exact());
      // radius <= 2^(1 - p) |midpoint|
      Rational bound = abs(x.midpoint());
      mpq_div_2exp(bound.get_mpq_t(), bound.get_mpq_t(), static_cast<mp_bitcnt_t>(bits - 1));
      CHECK(x.radius() <= bound);
    }
  }
}

TEST_CASE("preset validation") {
  CHECK_THROWS_AS(Real::parse("sqrt(4)"), ParseError);
  CHECK_THROWS_AS(Real::parse("sqrt(1)"), ParseError);
  CHECK_THROWS_AS(Real::parse("log(1)"), ParseError);
  CHECK_NOTHROW(Real::parse("log(2)"));
  CHECK(Real::parse("0.05").exact() == Rational(1, 20));
  CHECK(Real::parse("1e-5").exact() == Rational(1, 100000));
  CHECK(Real::parse("-7/3").exact() == Rational(-7, 3));
}

TEST_CASE("property: ||x + k|| = ||x||, ||-x|| = ||x||, 0 <= ||x|| <= 1/2") {
  gen::Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const Scalar x(gen::rational(rng, 1000, 50));
    const long k = gen::uniform_int(rng, -1000, 1000);
    const Scalar d = dist_to_nearest_int(x);
    CHECK(dist_to_nearest_int(x + Scalar(k)).exact() == d.exact());
    CHECK(dist_to_nearest_int(-x).exact() == d.exact());
    CHECK(d.exact() >= 0);
    CHECK(d.exact() <= Rational(1, 2));
  }
}

TEST_CASE("property: integer shifts of enclosures give overlapping distances") {
  gen::Rng rng(102);
  for (int trial = 0; trial < 300; ++trial) {
    const Scalar x = Scalar(gen::rational(rng, 1000, 50)) * enc("sqrt(3)", 96);
    const long k = gen::uniform_int(rng, -1000, 1000);
    const Scalar a = dist_to_nearest_int(x);
    const Scalar b = dist_to_nearest_int(x + Scalar(k));
    CHECK(compare(a, b) == std::partial_ordering::unordered);
    CHECK(a.lower() >= 0);
    CHECK(a.upper() <= Rational(1, 2));
  }
}

TEST_CASE("property: enclosure soundness over 1000 random rationals") {
  gen::Rng rng(103);
  for (int trial = 0; trial < 1000; ++trial) {
    const Rational a = gen::rational(rng, 1 << 20, 100);
    const Rational b = gen::rational(rng, 1 << 20, 100);
    const int bits = static_cast<int>(gen::uniform_int(rng, 24, 200));
    const Scalar ea(DyadicInterval(a, bits));
    const Scalar eb(DyadicInterval(b, bits));
    CHECK(ea.contains(a));
    CHECK((ea + eb).contains(a + b));
    CHECK((ea - eb).contains(a - b));
    CHECK((ea * eb).contains(a * b));
    if (sgn(b) != 0 && eb.sign() != 2) CHECK((ea / eb).contains(a / b));
    CHECK(dist_to_nearest_int(ea * eb).contains(dist_to_nearest_int(Scalar(a * b)).exact()));
  }
}

TEST_CASE("division by zero") {
  CHECK_THROWS_AS(q(1) / q(0), DomainError);
  CHECK_THROWS_AS(q(1) / Scalar::enclose(Rational(-1, 10), Rational(1, 10), 64), PrecisionExhausted);
}

TEST_CASE("compare is partial on overlapping enclosures") {
  const Scalar a = enc("sqrt(2)");
  CHECK(compare(a, q(1)) == std::partial_ordering::greater);
  CHECK(compare(a, q(2)) == std::partial_ordering::less);
  CHECK(compare(a, a) == std::partial_ordering::unordered);
  CHECK(compare(q(1, 3), q(1, 3)) == std::partial_ordering::equivalent);
}
