#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kronecker/forms.hpp"
#include "kronecker/instance.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker {

struct ClosedInterval {
  Scalar lo;
  Scalar hi;
};

// Sorted, pairwise disjoint closed intervals inside [window_lo, window_hi].
struct FeasibleSet {
  Scalar window_lo;
  Scalar window_hi;
  std::vector<ClosedInterval> intervals;

  bool empty() const { return intervals.empty(); }
};

// Endpoint comparisons that enclosures cannot decide throw PrecisionExhausted
// throughout this header.

// Solutions of ||lambda t - alpha|| <= eps with t in [tau, tau + T].
// Throws BudgetExceeded beyond max_intervals pieces.
FeasibleSet coordinate_feasible_set(const Scalar& lambda, const Scalar& alpha, const Scalar& eps, const Scalar& tau,
                                    const Scalar& T, std::uint64_t max_intervals = 10'000'000);

// Sorts, clips to the window, merges overlapping or touching pieces.
FeasibleSet normalize(FeasibleSet set);

// Linear merge of two sorted lists over the same window.
FeasibleSet intersect(const FeasibleSet& a, const FeasibleSet& b);

// Full solution set of the instance over [tau, tau + T]; coordinates are
// intersected starting from the one with the fewest pieces.
FeasibleSet feasible_set(const KroneckerInstance& inst, const Scalar& T,
                         std::uint64_t max_intervals = 10'000'000);

struct WitnessCheck {
  std::vector<Scalar> residuals;  // ||lambda_j t - alpha_j||
  bool ok = false;                // every residual provably <= eps_j
};

WitnessCheck verify_witness(const KroneckerInstance& inst, const Scalar& t);

struct Witness {
  Scalar t;
  std::vector<Scalar> residuals;
  Scalar tau;
  Scalar T;
};

// Sweeps [tau, tau + T] left to right, one cursor per coordinate, and stops
// at the first point common to all constraints; t is the midpoint of that
// piece. Returns nullopt iff the instance has no solution in the window.
std::optional<Witness> find_t(const KroneckerInstance& inst, const Scalar& T);

// Lexicographically smallest q with ceil(tau_i) <= q_i <= floor(tau_i + T_i)
// and ||L_j(q) - alpha_j|| <= eps_j. Throws BudgetExceeded when the box has
// more than `budget` points.
std::optional<IntVector> find_integer_point(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                            std::span<const Scalar> eps, std::span<const Scalar> tau,
                                            std::span<const Scalar> T, std::uint64_t budget = 10'000'000);

// Reduction of the real-t problem to the single-variable integer problem by
// dividing through by a pivot coordinate p.
//   theta_i = lambda_i / lambda_p,  beta_i = alpha_i - lambda_i alpha_p / lambda_p   (i != p)
//   delta0 = min(delta / |lambda_p|, 1/2),  gamma1 = 2 N gamma(N),  T1 = 2 / (gamma1 delta0)
// and an integer q in [tau', tau' + T1] lifts to t = (alpha_p + q) / lambda_p
// in [tau, tau + T*] with zero residual at the pivot.
struct ReductionRecord {
  std::size_t pivot = 0;
  std::vector<std::size_t> others;  // original indices of theta/beta entries
  std::vector<Scalar> theta;
  std::vector<Scalar> beta;
  std::vector<Scalar> eps;
  Scalar lambda_pivot;
  Scalar alpha_pivot;
  Scalar delta0;
  Rational gamma1;
  Scalar T1;
  Scalar tau_prime;
  Scalar X;         // T1 / 4
  Integer shift;    // ceil(tau' + X)

  LinearFormSystem system() const;  // one variable, N - 1 forms
  Scalar lift(const Integer& q) const;
};

// Pivot: argmax |lambda_i| / eps_i, lowest index on ties. Uses inst.delta,
// which must be set (pass the achieved minimum when no delta was given).
// Throws ZeroLambda when some lambda_j is zero.
ReductionRecord reduce_theorem1(const KroneckerInstance& inst);

// Reduce, search q in [tau', tau' + T1], lift and verify.
std::optional<Witness> find_t_by_reduction(const KroneckerInstance& inst, std::uint64_t budget = 10'000'000);

}  // namespace kronecker
