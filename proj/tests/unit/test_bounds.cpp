#include "doctest.h"
#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/real.hpp"

using namespace kronecker;

namespace {

Scalar q(long p, long d = 1) { return Scalar(Rational(p, d)); }
Scalar dec(const char* s) { return Real::parse(s).at(128); }

}  // namespace

TEST_CASE("gamma") {
  CHECK(gamma(2) == Rational(1, 8));
  CHECK(gamma(3) == Rational(1, 54));
  CHECK(gamma(4) == Rational(1, 576));
  CHECK_THROWS_AS(gamma(1), DomainError);
}

TEST_CASE("gamma1") {
  CHECK(gamma1(2, TransferencePart::A) == 2);
  CHECK(gamma1(2, TransferencePart::B) == Rational(1, 2));
  CHECK(gamma1(3, TransferencePart::B) == Rational(1, 9));
  CHECK_THROWS_AS(gamma1(1, TransferencePart::B), DomainError);
  for (int N = 2; N <= 12; ++N) CHECK(gamma1(N, TransferencePart::B) == 2 * N * gamma(N));
}

TEST_CASE("box_theorem1") {
  const Scalar quarter[] = {q(1, 4), q(1, 4)};
  auto b = box_theorem1(2, quarter);
  CHECK(b.m_star[0].exact() == 32);
  CHECK(b.box.bounds == std::vector<Integer>{32, 32});

  const Scalar twentieth[] = {q(1, 20), q(1, 20)};
  b = box_theorem1(2, twentieth);
  CHECK(b.box.bounds == std::vector<Integer>{160, 160});

  const Scalar edge(Rational(1, 2) - Rational(1, 1000000000));
  const Scalar near_half[] = {edge, edge, edge};
  b = box_theorem1(3, near_half);
  CHECK(b.box.bounds == std::vector<Integer>{108, 108, 108});
  CHECK(b.m_star[0].exact() > 108);

  const Scalar bad[] = {q(1, 2), q(1, 4)};
  CHECK_THROWS_AS(box_theorem1(2, bad), EpsilonOutOfRange);
  const Scalar neg[] = {q(-1, 4), q(1, 4)};
  CHECK_THROWS_AS(box_theorem1(2, neg), EpsilonOutOfRange);
}

TEST_CASE("property: M*_j eps_j = 1/gamma exactly") {
  for (int N = 2; N <= 6; ++N) {
    for (long d = 3; d < 60; d += 7) {
      std::vector<Scalar> eps(static_cast<std::size_t>(N), q(1, d));
      const auto b = box_theorem1(N, eps);
      for (const Scalar& m : b.m_star) CHECK((m * q(1, d)).exact() == 1 / gamma(N));
    }
  }
}

TEST_CASE("box_gm") {
  const Scalar a[] = {dec("0.1")};
  CHECK(box_gm(2, a) == std::vector<Integer>{30});
  const Scalar b[] = {dec("5e-4")};
  CHECK(box_gm(2, b) == std::vector<Integer>{16589});
  const Scalar c[] = {dec("0.01")};
  CHECK(box_gm(2, c) == std::vector<Integer>{530});
}

TEST_CASE("windows") {
  CHECK(window_theorem1(2, q(1)).exact() == 8);
  CHECK(window_theorem1(2, q(1, 2)).exact() == 16);
  CHECK(window_theorem1(3, q(1, 54)).exact() == 2916);
  CHECK_THROWS_AS(window_theorem1(2, q(0)), DomainError);
  CHECK(window_gm(q(1)).exact() == 4);
  CHECK(window_gm(q(1, 2)).exact() == 8);
  // 4 / 0.005050 = 792.0792...
  const Scalar w = window_gm(dec("0.005050"));
  CHECK(w.exact() > Rational(7920792, 10000));
  CHECK(w.exact() < Rational(7920793, 10000));
  CHECK_THROWS_AS(window_gm(q(-1)), DomainError);
  for (int N = 2; N <= 6; ++N) {
    const Scalar delta = q(3, 1000);
    CHECK((window_theorem1(N, delta) * Scalar(gamma(N)) * delta).exact() == 1);
  }
}

TEST_CASE("corollary boxes expose both readings") {
  const Rational g1 = gamma1(2, TransferencePart::B);
  CHECK(corollary_box(q(1, 4), g1).exact() == 4);
  CHECK(corollary_box_proof_variant(q(1, 4), g1).exact() == 2);
  CHECK(corollary_window(g1, q(1, 4)).exact() == 16);
}

TEST_CASE("compare_bounds rows") {
  const Scalar grid[] = {dec("0.01"), dec("5e-4")};
  const auto rows = compare_bounds(2, grid);
  CHECK(rows[0].m_star.exact() == 800);
  CHECK(rows[0].m_gm == 530);
  CHECK_FALSE(rows[0].star_is_smaller);
  CHECK(rows[1].m_star.exact() == 16000);
  CHECK(rows[1].m_gm == 16589);
  CHECK(rows[1].star_is_smaller);
  const std::string csv = bounds_csv(rows);
  CHECK(csv.rfind("eps,M_star,M_gm,star_is_smaller\n", 0) == 0);
  CHECK(csv.find("0.01,800,530,false") != std::string::npos);
  CHECK(csv.find("0.0005,16000,16589,true") != std::string::npos);
}

TEST_CASE("crossover epsilon") {
  const Scalar e2 = crossover_epsilon(2);
  // 2 e^-8 = 6.70925...e-4
  CHECK(e2.lower() > Rational(670925, 1000000000));
  CHECK(e2.upper() < Rational(670926, 1000000000));
  const Scalar e3 = crossover_epsilon(3);
  // 3 e^-54 = 1.0597885...e-23
  CHECK(e3.lower() > Rational(105978, Integer("10000000000000000000000000000")));
  CHECK(e3.upper() < Rational(105979, Integer("10000000000000000000000000000")));
  const Scalar below[] = {Scalar(Rational(9, 10)) * e2};
  CHECK(compare_bounds(2, below)[0].star_is_smaller);
}

TEST_CASE("property: compare_bounds is monotone on a geometric grid") {
  for (int N = 2; N <= 3; ++N) {
    std::vector<Scalar> grid;
    Rational eps(49, 100);
    while (grid.size() < 40) {
      grid.emplace_back(eps);
      eps *= Rational(7, 10);
    }
    if (N == 3) grid.resize(12);  // the N = 3 flip sits near 1e-23
    const auto rows = compare_bounds(N, grid);
    bool flipped = false;
    for (const auto& r : rows) {
      if (flipped) CHECK(r.star_is_smaller);
      flipped = flipped || r.star_is_smaller;
    }
    if (N == 2) CHECK(flipped);
  }
}

TEST_CASE("compute_bound_set") {
  const Scalar eps[] = {q(1, 4), q(1, 4)};
  const BoundSet b = compute_bound_set(2, eps, q(1));
  CHECK(b.gamma == Rational(1, 8));
  CHECK(b.gamma1_A == 2);
  CHECK(b.gamma1_B == Rational(1, 2));
  CHECK(b.M_star[0].exact() == 32);
  CHECK(b.M_cor[0].exact() == 4);
  CHECK(b.T_star->exact() == 8);
  CHECK(b.T_gm->exact() == 4);
  CHECK(b.T_cor->exact() == 4);
}
