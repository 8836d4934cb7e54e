#include "kronecker/witness.hpp"

#include <algorithm>
#include <numeric>

#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"

namespace kronecker {

namespace {

// a <= b, or PrecisionExhausted when the enclosures overlap.
bool le(const Scalar& a, const Scalar& b) {
  if (certainly_le(a, b)) return true;
  if (certainly_gt(a, b)) return false;
  if (a.identical(b)) return true;
  throw PrecisionExhausted("cannot order " + a.to_string() + " and " + b.to_string());
}

const Scalar& smaller(const Scalar& a, const Scalar& b) { return le(a, b) ? a : b; }
const Scalar& larger(const Scalar& a, const Scalar& b) { return le(a, b) ? b : a; }

void require_nonnegative_length(const Scalar& T) {
  if (certainly_lt(T, Scalar(0))) throw DomainError("window length must be non-negative");
  if (!certainly_ge(T, Scalar(0))) throw PrecisionExhausted("cannot decide the sign of the window length");
}

// ||alpha|| <= eps for a coordinate with lambda = 0.
bool constant_constraint_holds(const Scalar& alpha, const Scalar& eps) {
  const Scalar d = dist_to_nearest_int(alpha);
  if (certainly_le(d, eps)) return true;
  if (certainly_gt(d, eps)) return false;
  throw PrecisionExhausted("cannot decide a constant constraint");
}

}  // namespace

FeasibleSet coordinate_feasible_set(const Scalar& lambda, const Scalar& alpha, const Scalar& eps, const Scalar& tau,
                                    const Scalar& T, std::uint64_t max_intervals) {
  require_nonnegative_length(T);
  FeasibleSet out{tau, tau + T, {}};
  const int s = lambda.sign();
  if (s == 2) throw PrecisionExhausted("cannot decide the sign of lambda");
  if (s == 0) {
    if (constant_constraint_holds(alpha, eps)) out.intervals.push_back({out.window_lo, out.window_hi});
    return out;
  }
  const Scalar lam = s > 0 ? lambda : -lambda;
  const Scalar a = s > 0 ? alpha : -alpha;
  const Integer k0 = ceil_of((lam * out.window_lo - a - eps).lower());
  const Integer k1 = floor_of((lam * out.window_hi - a + eps).upper());
  if (k1 >= k0 && Integer(k1 - k0) >= Integer(std::to_string(max_intervals))) {
    throw BudgetExceeded("window holds more than " + std::to_string(max_intervals) + " intervals");
  }
  for (Integer k = k0; k <= k1; ++k) {
    const Scalar lo = (Scalar(k) + a - eps) / lam;
    const Scalar hi = (Scalar(k) + a + eps) / lam;
    if (certainly_gt(lo, out.window_hi) || certainly_lt(hi, out.window_lo)) continue;
    if (!certainly_le(lo, out.window_hi) || !certainly_ge(hi, out.window_lo)) {
      throw PrecisionExhausted("cannot place an interval relative to the window");
    }
    out.intervals.push_back({larger(lo, out.window_lo), smaller(hi, out.window_hi)});
  }
  return out;
}

FeasibleSet normalize(FeasibleSet set) {
  std::vector<ClosedInterval> pieces;
  for (ClosedInterval& iv : set.intervals) {
    ClosedInterval c{larger(iv.lo, set.window_lo), smaller(iv.hi, set.window_hi)};
    if (le(c.lo, c.hi)) pieces.push_back(std::move(c));
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const ClosedInterval& x, const ClosedInterval& y) { return !le(y.lo, x.lo); });
  set.intervals.clear();
  for (ClosedInterval& c : pieces) {
    if (!set.intervals.empty() && le(c.lo, set.intervals.back().hi)) {
      Scalar& hi = set.intervals.back().hi;
      if (!le(c.hi, hi)) hi = c.hi;
    } else {
      set.intervals.push_back(std::move(c));
    }
  }
  return set;
}

FeasibleSet intersect(const FeasibleSet& a, const FeasibleSet& b) {
  FeasibleSet out{a.window_lo, a.window_hi, {}};
  std::size_t i = 0, j = 0;
  while (i < a.intervals.size() && j < b.intervals.size()) {
    const ClosedInterval& x = a.intervals[i];
    const ClosedInterval& y = b.intervals[j];
    const Scalar& lo = larger(x.lo, y.lo);
    const Scalar& hi = smaller(x.hi, y.hi);
    if (le(lo, hi)) out.intervals.push_back({lo, hi});
    if (le(x.hi, y.hi)) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

FeasibleSet feasible_set(const KroneckerInstance& inst, const Scalar& T, std::uint64_t max_intervals) {
  inst.validate();
  std::vector<FeasibleSet> sets;
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    sets.push_back(coordinate_feasible_set(inst.lambda[j], inst.alpha[j], inst.eps[j], inst.tau, T, max_intervals));
  }
  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sets[x].intervals.size() < sets[y].intervals.size();
  });
  FeasibleSet acc = sets[order[0]];
  for (std::size_t k = 1; k < order.size() && !acc.empty(); ++k) acc = intersect(acc, sets[order[k]]);
  return normalize(std::move(acc));
}

WitnessCheck verify_witness(const KroneckerInstance& inst, const Scalar& t) {
  WitnessCheck out;
  out.ok = true;
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    out.residuals.push_back(dist_to_nearest_int(inst.lambda[j] * t - inst.alpha[j]));
    if (!certainly_le(out.residuals.back(), inst.eps[j])) out.ok = false;
  }
  return out;
}

std::optional<Witness> find_t(const KroneckerInstance& inst, const Scalar& T) {
  inst.validate();
  require_nonnegative_length(T);
  const Scalar end = inst.tau + T;
  const bool exact_window = inst.tau.is_exact() && end.is_exact();
  const Rational end_lo = end.lower();

  struct Cursor {
    Scalar lambda, alpha, eps;
  };
  std::vector<Cursor> cursors;
  for (std::size_t j = 0; j < inst.dim(); ++j) {
    const int s = inst.lambda[j].sign();
    if (s == 2) throw PrecisionExhausted("cannot decide the sign of lambda");
    if (s == 0) {
      if (!constant_constraint_holds(inst.alpha[j], inst.eps[j])) return std::nullopt;
      continue;
    }
    cursors.push_back({s > 0 ? inst.lambda[j] : -inst.lambda[j], s > 0 ? inst.alpha[j] : -inst.alpha[j], inst.eps[j]});
  }

  auto accept = [&](const Rational& t) -> std::optional<Witness> {
    const Scalar ts(t);
    WitnessCheck check = verify_witness(inst, ts);
    if (!check.ok || !certainly_ge(ts, inst.tau) || !certainly_le(ts, end)) {
      throw PrecisionExhausted("sweep point failed independent verification");
    }
    return Witness{ts, std::move(check.residuals), inst.tau, T};
  };
  auto nothing_left = [&]() -> std::optional<Witness> {
    if (!exact_window) throw PrecisionExhausted("window ends are enclosures; cannot certify an empty intersection");
    return std::nullopt;
  };

  Rational pos = inst.tau.upper();
  if (pos > end_lo) return nothing_left();
  if (cursors.empty()) return accept((pos + end_lo) / 2);

  std::vector<Integer> k(cursors.size());
  for (;;) {
    if (pos > end_lo) return nothing_left();
    Rational l_lo = pos, l_hi = pos;
    std::optional<Rational> r_lo, r_hi;
    const Scalar p(pos);
    for (std::size_t j = 0; j < cursors.size(); ++j) {
      const Cursor& c = cursors[j];
      // First piece [(k + alpha - eps) / lambda, (k + alpha + eps) / lambda]
      // that does not end before pos.
      k[j] = ceil_of((c.lambda * p - c.alpha - c.eps).lower());
      Scalar a, b;
      for (;;) {
        a = (Scalar(k[j]) + c.alpha - c.eps) / c.lambda;
        b = (Scalar(k[j]) + c.alpha + c.eps) / c.lambda;
        if (!certainly_lt(b, p)) break;
        ++k[j];
      }
      l_lo = std::max(l_lo, a.lower());
      l_hi = std::max(l_hi, a.upper());
      if (!r_lo || b.lower() < *r_lo) r_lo = b.lower();
      if (!r_hi || b.upper() < *r_hi) r_hi = b.upper();
    }
    if (l_lo > *r_hi) {
      pos = l_lo;
      continue;
    }
    if (l_hi > *r_lo) throw PrecisionExhausted("cannot order interval endpoints during the sweep");
    const Rational hi = std::min(*r_lo, end_lo);
    if (l_hi <= hi) return accept((l_hi + hi) / 2);
    if (l_lo > end_lo) return nothing_left();
    throw PrecisionExhausted("feasible piece straddles the window end");
  }
}

std::optional<IntVector> find_integer_point(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                            std::span<const Scalar> eps, std::span<const Scalar> tau,
                                            std::span<const Scalar> T, std::uint64_t budget) {
  if (alpha.size() != sys.n() || eps.size() != sys.n()) throw DimensionMismatch("need one alpha and eps per form");
  if (tau.size() != sys.m() || T.size() != sys.m()) throw DimensionMismatch("need one window per variable");
  const std::size_t m = sys.m();
  IntVector lo(m), hi(m);
  Integer count = 1;
  for (std::size_t i = 0; i < m; ++i) {
    require_nonnegative_length(T[i]);
    lo[i] = ceil_of(tau[i]);
    hi[i] = floor_of(tau[i] + T[i]);
    if (lo[i] > hi[i]) return std::nullopt;
    count *= hi[i] - lo[i] + 1;
  }
  if (count > Integer(std::to_string(budget))) {
    throw BudgetExceeded("integer box has " + count.get_str() + " points, budget is " + std::to_string(budget));
  }
  IntVector q = lo;
  for (;;) {
    const std::vector<Scalar> values = eval_forms(sys, q);
    bool ok = true;
    for (std::size_t j = 0; j < values.size() && ok; ++j) {
      const Scalar r = dist_to_nearest_int(values[j] - alpha[j]);
      if (certainly_gt(r, eps[j])) {
        ok = false;
      } else if (!certainly_le(r, eps[j])) {
        throw PrecisionExhausted("cannot decide a residual against its tolerance");
      }
    }
    if (ok) return q;
    std::size_t i = m;
    while (i-- > 0) {
      if (q[i] < hi[i]) {
        ++q[i];
        break;
      }
      q[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) return std::nullopt;
  }
}

LinearFormSystem ReductionRecord::system() const { return LinearFormSystem(1, theta.size(), theta); }

Scalar ReductionRecord::lift(const Integer& q) const { return (alpha_pivot + Scalar(q)) / lambda_pivot; }

ReductionRecord reduce_theorem1(const KroneckerInstance& inst) {
  inst.validate();
  if (!inst.delta) throw DomainError("the reduction needs delta");
  const std::size_t N = inst.dim();
  const Rational g = gamma(static_cast<int>(N));
  for (std::size_t j = 0; j < N; ++j) {
    const int s = inst.lambda[j].sign();
    if (s == 0) throw ZeroLambda("lambda_" + std::to_string(j + 1) + " is zero");
    if (s == 2) throw PrecisionExhausted("cannot decide the sign of lambda_" + std::to_string(j + 1));
  }

  ReductionRecord r;
  Scalar best = abs(inst.lambda[0]) / inst.eps[0];
  for (std::size_t j = 1; j < N; ++j) {
    const Scalar ratio = abs(inst.lambda[j]) / inst.eps[j];
    const auto c = compare(ratio, best);
    if (c == std::partial_ordering::unordered) throw PrecisionExhausted("cannot rank |lambda_j| / eps_j");
    if (c == std::partial_ordering::greater) {
      best = ratio;
      r.pivot = j;
    }
  }
  r.lambda_pivot = inst.lambda[r.pivot];
  r.alpha_pivot = inst.alpha[r.pivot];
  for (std::size_t i = 0; i < N; ++i) {
    if (i == r.pivot) continue;
    r.others.push_back(i);
    r.theta.push_back(inst.lambda[i] / r.lambda_pivot);
    r.beta.push_back(inst.alpha[i] - inst.lambda[i] * r.alpha_pivot / r.lambda_pivot);
    r.eps.push_back(inst.eps[i]);
  }
  const Scalar abs_pivot = abs(r.lambda_pivot);
  const Scalar half(Rational(1, 2));
  const Scalar ratio = *inst.delta / abs_pivot;
  r.delta0 = certainly_le(ratio, half) ? ratio : certainly_ge(ratio, half) ? half : min(ratio, half);
  r.gamma1 = Rational(2 * static_cast<long>(N)) * g;
  r.T1 = Scalar(2) / (Scalar(r.gamma1) * r.delta0);
  r.tau_prime = r.lambda_pivot * inst.tau - r.alpha_pivot;
  if (r.lambda_pivot.sign() < 0) r.tau_prime = r.tau_prime - r.T1;
  r.X = r.T1 / Scalar(4);
  r.shift = ceil_of(r.tau_prime + r.X);
  return r;
}

std::optional<Witness> find_t_by_reduction(const KroneckerInstance& inst, std::uint64_t budget) {
  const ReductionRecord r = reduce_theorem1(inst);
  const Scalar tau[] = {r.tau_prime};
  const Scalar T[] = {r.T1};
  const auto q = find_integer_point(r.system(), r.beta, r.eps, tau, T, budget);
  if (!q) return std::nullopt;
  const Scalar t = r.lift((*q)[0]);
  WitnessCheck check = verify_witness(inst, t);
  if (!check.ok) throw PrecisionExhausted("lifted point failed verification");
  return Witness{t, std::move(check.residuals), inst.tau,
                 window_theorem1(static_cast<int>(inst.dim()), *inst.delta)};
}

}  // namespace kronecker
