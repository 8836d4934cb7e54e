#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kronecker/forms.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker {

// gamma(N) = 2^(N-2) / (N (N!)^2). Throws DomainError for N < 2.
Rational gamma(int N);

enum class TransferencePart { A, B };

// Constant of the transference condition for d = m + n variables:
// d for the necessity direction (A), 2^(d-1) / (d!)^2 for sufficiency (B).
Rational gamma1(int d, TransferencePart part);

struct TheoremOneBox {
  std::vector<Scalar> m_star;  // 1 / (gamma eps_j)
  IntBox box;                  // floor(m_star)
};

// Throws EpsilonOutOfRange unless 0 < eps_j < 1/2, DomainError when some
// M*_j < 1.
TheoremOneBox box_theorem1(int N, std::span<const Scalar> eps);

// ceil((1/eps_j) ln(N / eps_j)) with the logarithm enclosed rigorously;
// the precision is doubled up to max_bits when a ceiling is undecided.
std::vector<Integer> box_gm(int N, std::span<const Scalar> eps, int bits = kDefaultPrecisionBits,
                            int max_bits = 4096);

// T* = 1 / (gamma(N) delta).
Scalar window_theorem1(int N, const Scalar& delta);
// T = 4 / delta.
Scalar window_gm(const Scalar& delta);

// 1 / (2 eps gamma1): the box of the linear-form corollary as stated.
Scalar corollary_box(const Scalar& eps, const Rational& gamma1);
// 1 / (4 gamma1 eps): the value used inside the reduction argument. Half of
// corollary_box; exposed for comparison only.
Scalar corollary_box_proof_variant(const Scalar& eps, const Rational& gamma1);
// 2 / (gamma1 delta).
Scalar corollary_window(const Rational& gamma1, const Scalar& delta);

struct BoundComparisonRow {
  Scalar eps;
  Scalar m_star;
  Integer m_gm;
  bool star_is_smaller = false;
};

std::vector<BoundComparisonRow> compare_bounds(int N, std::span<const Scalar> eps_grid);

// eps0 = N exp(-1/gamma(N)), below which the M* box is the smaller one.
Scalar crossover_epsilon(int N, int bits = kDefaultPrecisionBits);

// "eps,M_star,M_gm,star_is_smaller" with one decimal-string row per entry.
std::string bounds_csv(std::span<const BoundComparisonRow> rows);

// Every constant for one dimension and tolerance vector.
struct BoundSet {
  int N = 0;
  Rational gamma;
  Rational gamma1_A;
  Rational gamma1_B;
  std::vector<Scalar> M_star;
  IntBox box;
  std::vector<Integer> M_gm;
  std::vector<Scalar> M_cor;
  std::optional<Scalar> T_star;
  std::optional<Scalar> T_gm;
  std::optional<Scalar> T_cor;
};

BoundSet compute_bound_set(int N, std::span<const Scalar> eps, const std::optional<Scalar>& delta = {});

}  // namespace kronecker
