#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kronecker/scalar.hpp"

namespace kronecker {

using IntVector = std::vector<Integer>;

IntVector make_int_vector(std::initializer_list<long> values);

// Lexicographic order on integer vectors of equal length.
bool lex_less(std::span<const Integer> a, std::span<const Integer> b);

// Flip the sign so the first nonzero entry is positive; m and -m give equal
// values in every symmetric quantity minimized over boxes.
IntVector canonicalize(IntVector v);
bool is_canonical(std::span<const Integer> v);
bool is_zero_vector(std::span<const Integer> v);

// The integer box |m_j| <= bounds[j].
struct IntBox {
  std::vector<Integer> bounds;

  IntBox() = default;
  explicit IntBox(std::vector<Integer> b);
  static IntBox uniform(std::size_t dim, long bound);

  std::size_t dim() const { return bounds.size(); }
  // prod (2 B_j + 1), exact.
  Integer point_count() const;
  bool contains(std::span<const Integer> v) const;
  bool operator==(const IntBox&) const = default;
};

// The system L_j(x) = sum_i theta(i, j) x_i  (1 <= j <= n) in m variables,
// together with its transpose R_i(u) = sum_j theta(i, j) u_j (1 <= i <= m).
//
// theta is stored once, row-major by variable index i; both evaluations read
// the same matrix.
class LinearFormSystem {
 public:
  LinearFormSystem(std::size_t m, std::size_t n, std::vector<Scalar> theta);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t d() const { return m_ + n_; }

  const Scalar& theta(std::size_t i, std::size_t j) const { return theta_[i * n_ + j]; }
  const std::vector<Scalar>& coefficients() const { return theta_; }
  bool is_exact() const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Scalar> theta_;
};

// (L_1(a), ..., L_n(a)); throws DimensionMismatch unless |a| = m.
std::vector<Scalar> eval_forms(const LinearFormSystem& sys, std::span<const Integer> a);

// (R_1(u), ..., R_m(u)); throws DimensionMismatch unless |u| = n.
std::vector<Scalar> eval_transposed(const LinearFormSystem& sys, std::span<const Integer> u);

}  // namespace kronecker
