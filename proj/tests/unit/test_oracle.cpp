#include "doctest.h"
#include "generators.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/real.hpp"
#include "kronecker/witness.hpp"
#include "oracle.hpp"

using namespace kronecker;

namespace {

Scalar q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return Scalar(r);
}

}  // namespace

TEST_CASE("grid_witness_oracle examples") {
  KroneckerInstance inst;
  inst.lambda = {q(1)};
  inst.alpha = {q(1, 2)};
  inst.eps = {q(1, 4)};
  inst.tau = q(0);
  const auto t = oracle::grid_witness_oracle(inst, q(1), Rational(1, 100));
  REQUIRE(t);
  CHECK(t->exact() == Rational(1, 4));

  inst.lambda = {q(1), q(1)};
  inst.alpha = {q(0), q(1, 2)};
  inst.eps = {q(1, 5), q(1, 5)};
  CHECK_FALSE(oracle::grid_witness_oracle(inst, q(4), Rational(1, 100)));

  inst.lambda = {q(1), Real::parse("sqrt(2)").at(128)};
  inst.alpha = {q(1, 2), q(1, 2)};
  inst.eps = {q(3, 10), q(3, 10)};
  CHECK(oracle::grid_witness_oracle(inst, q(8), Rational(1, 100)).has_value() == find_t(inst, q(8)).has_value());
}

TEST_CASE("exhaustive_min_oracle examples") {
  const Scalar root[] = {q(1), Real::parse("sqrt(2)").at(128)};
  auto [v, m] = oracle::exhaustive_min_oracle(root, IntBox::uniform(2, 3));
  CHECK(m == make_int_vector({3, -2}));
  CHECK(abs(v - (q(3) - q(2) * root[1])).upper() < Rational(1, 1000000000000));
  const Scalar one[] = {q(1)};
  std::tie(v, m) = oracle::exhaustive_min_oracle(one, IntBox::uniform(1, 1));
  CHECK(v.exact() == 1);
  CHECK(m == make_int_vector({1}));
  const Scalar dep[] = {q(2), q(1)};
  std::tie(v, m) = oracle::exhaustive_min_oracle(dep, IntBox::uniform(2, 2));
  CHECK(v.exact() == 0);
  CHECK(m == make_int_vector({1, -2}));
  CHECK_THROWS_AS(oracle::exhaustive_min_oracle(dep, IntBox::uniform(2, 1000)), BudgetExceeded);
}

TEST_CASE("exhaustive_solution_oracle examples") {
  LinearFormSystem sys(2, 1, {q(1, 3), q(2, 7)});
  const Integer a0[] = {2, -1};
  const auto alpha = eval_forms(sys, a0);
  const Scalar eps[] = {q(1, 100)}, X[] = {q(3), q(3)};
  const auto a = oracle::exhaustive_solution_oracle(sys, alpha, eps, X);
  REQUIRE(a);
  CHECK(!lex_less(make_int_vector({2, -1}), *a));

  LinearFormSystem zero(1, 1, {q(0)});
  const Scalar half[] = {q(1, 2)}, e[] = {q(1, 4)}, X1[] = {q(2)};
  CHECK_FALSE(oracle::exhaustive_solution_oracle(zero, half, e, X1));
}

TEST_CASE("property: solution oracle matches find_integer_point on the shifted box") {
  gen::Rng rng(601);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = static_cast<std::size_t>(gen::uniform_int(rng, 1, 3));
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 3));
    const auto sys = gen::system(rng, m, n, 7);
    std::vector<Scalar> alpha, eps, X, tau, T;
    for (std::size_t j = 0; j < n; ++j) {
      alpha.push_back(Scalar(gen::rational(rng, 9)));
      eps.push_back(Scalar(gen::rational_in(rng, Rational(1, 20), Rational(2, 5), 20)));
    }
    for (std::size_t i = 0; i < m; ++i) {
      const long b = gen::uniform_int(rng, 1, 4);
      X.push_back(Scalar(Rational(b)) + Scalar(gen::rational_in(rng, Rational(0), Rational(9, 10), 10)));
      tau.push_back(q(-b));
      T.push_back(q(2 * b));
    }
    const auto want = oracle::exhaustive_solution_oracle(sys, alpha, eps, X);
    const auto got = find_integer_point(sys, alpha, eps, tau, T);
    CHECK(want == got);
    solved += want.has_value();
  }
  CHECK(solved > 20);
}
