#include "oracle.hpp"

#include "kronecker/errors.hpp"

namespace kronecker::oracle {

namespace {

constexpr long kMaxPoints = 1'000'000;

// Odometer over lo[i] <= v[i] <= hi[i], last coordinate fastest.
bool next_point(IntVector& v, const IntVector& lo, const IntVector& hi) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] < hi[i]) {
      ++v[i];
      return true;
    }
    v[i] = lo[i];
  }
  return false;
}

bool first_nonzero_positive(const IntVector& v) {
  for (const Integer& x : v) {
    if (x != 0) return x > 0;
  }
  return false;
}

template <class Value>
std::pair<Scalar, IntVector> exhaustive_min(std::span<const Scalar> coeffs, const IntBox& box, Value value) {
  if (coeffs.size() != box.dim()) throw DimensionMismatch("oracle: box and coefficients differ in length");
  if (box.point_count() > kMaxPoints) throw BudgetExceeded("oracle: box too large");
  IntVector lo, hi;
  for (const Integer& b : box.bounds) {
    lo.push_back(-b);
    hi.push_back(b);
  }
  IntVector m = lo;
  std::optional<Scalar> best;
  IntVector best_m;
  do {
    if (!first_nonzero_positive(m)) continue;
    Scalar s;
    for (std::size_t j = 0; j < m.size(); ++j) s = s + Scalar(m[j]) * coeffs[j];
    const Scalar v = value(s);
    // Strict improvement only, so the first (lexicographically smallest)
    // minimizer is kept.
    if (!best || v.upper() < best->upper()) {
      best = v;
      best_m = m;
    }
  } while (next_point(m, lo, hi));
  if (!best) throw DomainError("oracle: no nonzero point in the box");
  return {*best, best_m};
}

}  // namespace

std::optional<Scalar> grid_witness_oracle(const KroneckerInstance& inst, const Scalar& T, const Rational& step) {
  const Rational start = inst.tau.upper();
  const Rational end = (inst.tau + T).lower();
  for (Rational t = start; t <= end; t += step) {
    const Scalar ts(t);
    bool ok = true;
    for (std::size_t j = 0; j < inst.dim() && ok; ++j) {
      ok = certainly_le(dist_to_nearest_int(inst.lambda[j] * ts - inst.alpha[j]), inst.eps[j]);
    }
    if (ok) return ts;
  }
  return std::nullopt;
}

std::pair<Scalar, IntVector> exhaustive_min_oracle(std::span<const Scalar> lambda, const IntBox& box) {
  return exhaustive_min(lambda, box, [](const Scalar& s) { return abs(s); });
}

std::pair<Scalar, IntVector> exhaustive_min_dist_oracle(std::span<const Scalar> theta, const IntBox& box) {
  return exhaustive_min(theta, box, [](const Scalar& s) { return dist_to_nearest_int(s); });
}

std::optional<IntVector> exhaustive_solution_oracle(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                                    std::span<const Scalar> eps, std::span<const Scalar> X) {
  IntVector lo, hi;
  Integer count = 1;
  for (const Scalar& x : X) {
    const Integer b = floor_of(x);
    lo.push_back(-b);
    hi.push_back(b);
    count *= 2 * b + 1;
  }
  if (count > kMaxPoints * 10) throw BudgetExceeded("oracle: box too large");
  IntVector a = lo;
  do {
    bool ok = true;
    for (std::size_t j = 0; j < sys.n() && ok; ++j) {
      Scalar L;
      for (std::size_t i = 0; i < sys.m(); ++i) L = L + sys.theta(i, j) * Scalar(a[i]);
      ok = certainly_le(dist_to_nearest_int(L - alpha[j]), eps[j]);
    }
    if (ok) return a;
  } while (next_point(a, lo, hi));
  return std::nullopt;
}

}  // namespace kronecker::oracle
