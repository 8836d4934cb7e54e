#include "kronecker/forms.hpp"

#include <algorithm>
#include <string>

#include "kronecker/errors.hpp"

namespace kronecker {

IntVector make_int_vector(std::initializer_list<long> values) {
  IntVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

bool lex_less(std::span<const Integer> a, std::span<const Integer> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool is_zero_vector(std::span<const Integer> v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

bool is_canonical(std::span<const Integer> v) {
  for (const Integer& x : v) {
    if (x != 0) return x > 0;
  }
  return true;
}

IntVector canonicalize(IntVector v) {
  if (!is_canonical(v)) {
    for (Integer& x : v) x = -x;
  }
  return v;
}

IntBox::IntBox(std::vector<Integer> b) : bounds(std::move(b)) {
  for (const Integer& x : bounds) {
    if (x < 0) throw DomainError("box bounds must be non-negative");
  }
}

IntBox IntBox::uniform(std::size_t dim, long bound) {
  return IntBox(std::vector<Integer>(dim, Integer(bound)));
}

Integer IntBox::point_count() const {
  Integer count = 1;
  for (const Integer& b : bounds) count *= 2 * b + 1;
  return count;
}

bool IntBox::contains(std::span<const Integer> v) const {
  if (v.size() != bounds.size()) return false;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (::abs(v[j]) > bounds[j]) return false;
  }
  return true;
}

LinearFormSystem::LinearFormSystem(std::size_t m, std::size_t n, std::vector<Scalar> theta)
    : m_(m), n_(n), theta_(std::move(theta)) {
  if (m_ == 0 || n_ == 0) throw DimensionMismatch("a linear form system needs m >= 1 and n >= 1");
  if (theta_.size() != m_ * n_) {
    throw DimensionMismatch("theta has " + std::to_string(theta_.size()) + " entries, expected " +
                            std::to_string(m_ * n_));
  }
}

bool LinearFormSystem::is_exact() const {
  return std::all_of(theta_.begin(), theta_.end(), [](const Scalar& s) { return s.is_exact(); });
}

std::vector<Scalar> eval_forms(const LinearFormSystem& sys, std::span<const Integer> a) {
  if (a.size() != sys.m()) {
    throw DimensionMismatch("eval_forms: vector has length " + std::to_string(a.size()) +
                            ", expected m = " + std::to_string(sys.m()));
  }
  std::vector<Scalar> out(sys.n());
  for (std::size_t j = 0; j < sys.n(); ++j) {
    for (std::size_t i = 0; i < sys.m(); ++i) {
      if (a[i] != 0) out[j] += sys.theta(i, j) * Scalar(a[i]);
    }
  }
  return out;
}

std::vector<Scalar> eval_transposed(const LinearFormSystem& sys, std::span<const Integer> u) {
  if (u.size() != sys.n()) {
    throw DimensionMismatch("eval_transposed: vector has length " + std::to_string(u.size()) +
                            ", expected n = " + std::to_string(sys.n()));
  }
  std::vector<Scalar> out(sys.m());
  for (std::size_t i = 0; i < sys.m(); ++i) {
    for (std::size_t j = 0; j < sys.n(); ++j) {
      if (u[j] != 0) out[i] += sys.theta(i, j) * Scalar(u[j]);
    }
  }
  return out;
}

}  // namespace kronecker
