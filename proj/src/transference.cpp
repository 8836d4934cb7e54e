#include "kronecker/transference.hpp"

#include <algorithm>

#include "box_search.hpp"
#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/witness.hpp"

namespace kronecker {

using detail::i128;

std::string to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::SolutionAndConditionHold:
      return "solution_and_condition_hold";
    case ProbeOutcome::NoSolution:
      return "no_solution";
    case ProbeOutcome::CounterexampleToPartA:
      return "counterexample_to_part_a";
    case ProbeOutcome::ConditionFails:
      return "condition_fails";
    case ProbeOutcome::ConditionHoldsSolutionFound:
      return "condition_holds_solution_found";
    case ProbeOutcome::CounterexampleToPartB:
      return "counterexample_to_part_b";
  }
  return "unknown";
}

namespace {

void require_positive(std::span<const Scalar> xs, const char* what) {
  for (const Scalar& x : xs) {
    if (certainly_le(x, Scalar(0))) throw DomainError(std::string(what) + " must be positive");
    if (!certainly_gt(x, Scalar(0))) throw PrecisionExhausted(std::string("cannot decide the sign of ") + what);
  }
}

void check_dimensions(const LinearFormSystem& sys, std::span<const Scalar> eps, std::span<const Scalar> X) {
  if (eps.size() != sys.n()) throw DimensionMismatch("need one epsilon per form");
  if (X.size() != sys.m()) throw DimensionMismatch("need one X per variable");
}

// Visits nonzero u in the box whose first nonzero entry is positive, in
// lexicographic order, until visit returns false.
template <class Visit>
void for_each_canonical(const std::vector<std::int64_t>& bounds, Visit&& visit) {
  const std::size_t n = bounds.size();
  std::vector<std::int64_t> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = -bounds[j];
  for (;;) {
    std::size_t first = 0;
    while (first < n && u[first] == 0) ++first;
    if (first < n && u[first] > 0 && !visit(u)) return;
    std::size_t j = n;
    while (j-- > 0) {
      if (u[j] < bounds[j]) {
        ++u[j];
        break;
      }
      u[j] = -bounds[j];
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

IntVector to_int_vector(const std::vector<std::int64_t>& u) {
  IntVector out;
  for (std::int64_t v : u) out.emplace_back(static_cast<long>(v));
  return out;
}

Integer lcm_of_denominators(const LinearFormSystem& sys, std::span<const Scalar> alpha) {
  Integer d = 1;
  for (const Scalar& s : sys.coefficients()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), s.exact().get_den_mpz_t());
  for (const Scalar& s : alpha) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), s.exact().get_den_mpz_t());
  return d;
}

// The fractional part of q * D as an integer in [0, D), for q * D integral.
Integer scaled_residue(const Rational& q, const Integer& D) {
  Integer v = q.get_num() * (D / q.get_den());
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), D.get_mpz_t());
  return r;
}

i128 dist_mod(i128 s, i128 D) {
  i128 r = s % D;
  if (r < 0) r += D;
  return std::min(r, D - r);
}

// Everything scaled by the common denominator D of theta and alpha; the
// ratios gamma1 X_i = p_i / q_i and gamma1 eps_j = r_j / s_j are compared by
// cross-multiplication.
struct FixedPointCondition {
  i128 D;
  std::vector<i128> alpha;              // alpha_j D mod D
  std::vector<std::vector<i128>> theta;  // theta_ij D mod D
  std::vector<i128> p, q, r, s;

  bool satisfied(const std::vector<std::int64_t>& u) const {
    i128 a = 0;
    for (std::size_t j = 0; j < u.size(); ++j) a += static_cast<i128>(u[j]) * alpha[j];
    const i128 lhs = dist_mod(a, D);
    if (lhs == 0) return true;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const i128 uj = u[j] < 0 ? -static_cast<i128>(u[j]) : static_cast<i128>(u[j]);
      if (lhs * s[j] <= r[j] * uj * D) return true;
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      i128 t = 0;
      for (std::size_t j = 0; j < u.size(); ++j) t += static_cast<i128>(u[j]) * theta[i][j];
      if (lhs * q[i] <= p[i] * dist_mod(t, D)) return true;
    }
    return false;
  }
};

std::optional<FixedPointCondition> make_fixed_point_condition(const LinearFormSystem& sys,
                                                              std::span<const Scalar> alpha,
                                                              std::span<const Scalar> eps, std::span<const Scalar> X,
                                                              const Rational& gamma1,
                                                              const std::vector<std::int64_t>& bounds) {
  auto exact = [](std::span<const Scalar> xs) {
    return std::all_of(xs.begin(), xs.end(), [](const Scalar& x) { return x.is_exact(); });
  };
  if (!sys.is_exact() || !exact(alpha) || !exact(eps) || !exact(X)) return std::nullopt;
  const Integer limit = Integer(1) << 124;
  const Integer D = lcm_of_denominators(sys, alpha);
  Integer total_bound = 0;
  for (std::int64_t b : bounds) total_bound += b;
  // |sum u_j c_j| <= (sum B_j) D for residues c_j in [0, D).
  if (total_bound * D >= limit) return std::nullopt;

  FixedPointCondition c;
  c.D = detail::to_i128(D);
  for (const Scalar& a : alpha) c.alpha.push_back(detail::to_i128(scaled_residue(a.exact(), D)));
  c.theta.resize(sys.m());
  for (std::size_t i = 0; i < sys.m(); ++i) {
    for (std::size_t j = 0; j < sys.n(); ++j) {
      c.theta[i].push_back(detail::to_i128(scaled_residue(sys.theta(i, j).exact(), D)));
    }
  }
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Rational ratio = gamma1 * X[i].exact();
    if (ratio.get_den() * D >= limit || ratio.get_num() * D >= limit) return std::nullopt;
    c.p.push_back(detail::to_i128(ratio.get_num()));
    c.q.push_back(detail::to_i128(ratio.get_den()));
  }
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const Rational ratio = gamma1 * eps[j].exact();
    if (ratio.get_den() * D >= limit || ratio.get_num() * Integer(bounds[j]) * D >= limit) return std::nullopt;
    c.r.push_back(detail::to_i128(ratio.get_num()));
    c.s.push_back(detail::to_i128(ratio.get_den()));
  }
  return c;
}

// Generic route: true / false when decided, PrecisionExhausted otherwise.
bool condition_holds_at(const LinearFormSystem& sys, std::span<const Scalar> alpha, std::span<const Scalar> eps,
                        std::span<const Scalar> X, const Scalar& g1, const IntVector& u) {
  Scalar sum;
  for (std::size_t j = 0; j < u.size(); ++j) sum += Scalar(u[j]) * alpha[j];
  const Scalar lhs = dist_to_nearest_int(sum);
  bool undecided = false;
  auto consider = [&](const Scalar& term) {
    if (certainly_ge(term, lhs)) return true;
    if (!certainly_lt(term, lhs)) undecided = true;
    return false;
  };
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (consider(g1 * eps[j] * abs(Scalar(u[j])))) return true;
  }
  const std::vector<Scalar> r = eval_transposed(sys, u);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (consider(g1 * X[i] * dist_to_nearest_int(r[i]))) return true;
  }
  if (undecided) throw PrecisionExhausted("cannot decide the transference condition at some u");
  return false;
}

std::optional<IntVector> search_solution(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                         std::span<const Scalar> eps, std::span<const Scalar> X,
                                         std::uint64_t budget) {
  std::vector<Scalar> tau, T;
  for (const Scalar& x : X) {
    tau.push_back(-x);
    T.push_back(Scalar(2) * x);
  }
  return find_integer_point(sys, alpha, eps, tau, T, budget);
}

}  // namespace

DualPair build_dual_pair(const LinearFormSystem& sys, std::span<const Scalar> eps, std::span<const Scalar> X) {
  check_dimensions(sys, eps, X);
  require_positive(eps, "epsilon");
  require_positive(X, "X");
  const std::size_t m = sys.m(), n = sys.n(), d = sys.d();
  DualPair pair;
  pair.F.assign(d, std::vector<Scalar>(d));
  pair.G.assign(d, std::vector<Scalar>(d));
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar inv = Scalar(1) / eps[k];
    for (std::size_t i = 0; i < m; ++i) pair.F[k][i] = sys.theta(i, k) * inv;
    pair.F[k][m + k] = inv;
    pair.G[k][m + k] = eps[k];
  }
  for (std::size_t i = 0; i < m; ++i) {
    pair.F[n + i][i] = Scalar(1) / X[i];
    pair.G[n + i][i] = X[i];
    for (std::size_t j = 0; j < n; ++j) pair.G[n + i][m + j] = -(X[i] * sys.theta(i, j));
  }
  pair.eps.assign(eps.begin(), eps.end());
  pair.X.assign(X.begin(), X.end());
  return pair;
}

bool verify_duality_identity(const DualPair& pair) {
  const std::size_t d = pair.F.size();
  if (pair.G.size() != d) return false;
  for (std::size_t k = 0; k < d; ++k) {
    if (pair.F[k].size() != d || pair.G[k].size() != d) return false;
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      Scalar entry;
      for (std::size_t r = 0; r < d; ++r) entry += pair.F[r][k] * pair.G[r][l];
      if (!entry.is_exact() || entry.exact() != Rational(k == l ? 1 : 0)) return false;
    }
  }
  return true;
}

IntBox condition_cutoff_box(std::span<const Scalar> eps, const Rational& gamma1) {
  if (sgn(gamma1) <= 0) throw DomainError("gamma1 must be positive");
  require_positive(eps, "epsilon");
  IntBox box;
  for (const Scalar& e : eps) box.bounds.push_back(floor_of(Scalar(1) / (Scalar(2) * Scalar(gamma1) * e)));
  return box;
}

ConditionReport check_condition(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                std::span<const Scalar> eps, std::span<const Scalar> X, const Rational& gamma1,
                                std::uint64_t budget, ConditionRoute route) {
  check_dimensions(sys, eps, X);
  if (alpha.size() != sys.n()) throw DimensionMismatch("need one alpha per form");
  require_positive(X, "X");
  ConditionReport report;
  report.gamma1_used = gamma1;
  report.checked_box = condition_cutoff_box(eps, gamma1);
  if (report.checked_box.point_count() > Integer(std::to_string(budget))) {
    throw BudgetExceeded("cutoff box has " + report.checked_box.point_count().get_str() + " points");
  }
  std::vector<std::int64_t> bounds;
  for (const Integer& b : report.checked_box.bounds) bounds.push_back(b.get_si());

  std::optional<FixedPointCondition> fast;
  if (route != ConditionRoute::Generic) {
    fast = make_fixed_point_condition(sys, alpha, eps, X, gamma1, bounds);
    if (!fast && route == ConditionRoute::FixedPoint) {
      throw DomainError("the fixed-point route needs small exact rational data");
    }
  }
  const Scalar g1(gamma1);
  for_each_canonical(bounds, [&](const std::vector<std::int64_t>& u) {
    const bool ok = fast ? fast->satisfied(u) : condition_holds_at(sys, alpha, eps, X, g1, to_int_vector(u));
    if (ok) return true;
    report.holds = false;
    report.violator = to_int_vector(u);
    return false;
  });
  return report;
}

ProbeResult necessity_probe(const LinearFormSystem& sys, std::span<const Scalar> alpha, std::span<const Scalar> eps,
                            std::span<const Scalar> X, std::uint64_t budget) {
  check_dimensions(sys, eps, X);
  ProbeResult out{ProbeOutcome::NoSolution, search_solution(sys, alpha, eps, X, budget), {}};
  out.condition = check_condition(sys, alpha, eps, X, gamma1(static_cast<int>(sys.d()), TransferencePart::A));
  if (out.solution) {
    out.outcome = out.condition.holds ? ProbeOutcome::SolutionAndConditionHold : ProbeOutcome::CounterexampleToPartA;
  }
  return out;
}

ProbeResult sufficiency_probe(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                              std::span<const Scalar> eps, std::span<const Scalar> X, std::uint64_t budget) {
  check_dimensions(sys, eps, X);
  ProbeResult out{ProbeOutcome::ConditionFails, std::nullopt, {}};
  out.condition = check_condition(sys, alpha, eps, X, gamma1(static_cast<int>(sys.d()), TransferencePart::B));
  if (!out.condition.holds) return out;
  out.solution = search_solution(sys, alpha, eps, X, budget);
  out.outcome = out.solution ? ProbeOutcome::ConditionHoldsSolutionFound : ProbeOutcome::CounterexampleToPartB;
  return out;
}

}  // namespace kronecker
