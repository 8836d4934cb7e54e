#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "kronecker/forms.hpp"
#include "kronecker/instance.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker {

enum class Verdict { Holds, Fails, Undecided };
enum class Rigor { Proven, FloatOnly };
enum class SearchStrategy { Auto, Pruned, MeetInTheMiddle };

std::string to_string(Verdict v);
std::string to_string(Rigor r);

struct EnumerationOptions {
  unsigned threads = 1;
  // Largest admissible prod (2 B_j + 1).
  std::uint64_t budget = 1'000'000'000;
  SearchStrategy strategy = SearchStrategy::Auto;
  // Auto switches to meet in the middle above this many points.
  std::uint64_t mitm_threshold = 1'000'000;
  // Near-minimal candidates kept when enclosures have to be separated.
  std::size_t candidate_cap = 1u << 16;
};

struct BoxMinimum {
  Scalar value;
  IntVector minimizer;  // canonical, lexicographically first among minimizers
  // False only for min_max_transposed_over_box in enclosure mode, where the
  // value is rigorous but the argmin is chosen by upper bound.
  bool minimizer_certified = true;
};

// min |sum m_j lambda_j| over nonzero m in the box.
// Throws BudgetExceeded, PrecisionExhausted, DimensionMismatch, and
// DomainError when the box has no nonzero point.
BoxMinimum min_abs_form_over_box(std::span<const Scalar> lambda, const IntBox& box,
                                 const EnumerationOptions& options = {});

// min ||sum m_j theta_j|| over nonzero m in the box.
BoxMinimum min_dist_form_over_box(std::span<const Scalar> theta, const IntBox& box,
                                  const EnumerationOptions& options = {});

// min over nonzero u in the box (n coordinates) of max_i ||R_i(u)|| / delta_i.
BoxMinimum min_max_transposed_over_box(const LinearFormSystem& sys, std::span<const Scalar> deltas,
                                       const IntBox& box, const EnumerationOptions& options = {});

struct HypothesisCertificate {
  Scalar delta_hat;
  // Empty when the box has no nonzero point; the hypothesis then holds
  // vacuously and delta_hat repeats the threshold.
  IntVector minimizer;
  IntBox box;
  Verdict verdict = Verdict::Undecided;
  Scalar threshold;
  Rigor rigor = Rigor::Proven;
  int precision_bits = 0;  // working precision of the inputs; 0 when all exact
};

// Holds iff value >= threshold provably, Fails iff value < threshold provably.
Verdict decide(const Scalar& value, const Scalar& threshold);

// min |m . lambda| >= delta over |m_j| <= floor(M*_j). Without delta the
// threshold is the achieved minimum itself, and the verdict records whether
// that minimum is positive.
HypothesisCertificate check_theorem1_hypothesis(const KroneckerInstance& inst, const EnumerationOptions& options = {});

struct EscalationOptions {
  int max_bits = 4096;
  // At the precision cap, settle an Undecided verdict by comparing midpoints
  // (marked FloatOnly) instead of throwing PrecisionExhausted.
  bool allow_float_verdict = false;
};

// Re-evaluates the problem at doubling precision until the verdict is
// decided or max_bits is reached.
HypothesisCertificate check_theorem1_hypothesis(const KroneckerProblem& problem, const EnumerationOptions& options,
                                                const EscalationOptions& escalation = {});

// Hypothesis of the integer-point corollary: for nonzero u with
// |u_j| <= floor(1 / (2 eps_j gamma1)), max_i ||R_i(u)|| / delta_i >= 1,
// with gamma1 = gamma1(d, B).
HypothesisCertificate check_corollary1_hypothesis(const LinearFormSystem& sys, std::span<const Scalar> deltas,
                                                  std::span<const Scalar> eps,
                                                  const EnumerationOptions& options = {});

// Single-variable case: ||m . theta|| >= delta over |m_j| <= floor(1 / (2 eps_j gamma1)).
// gamma1 defaults to gamma1(n + 1, B).
HypothesisCertificate check_corollary2_hypothesis(std::span<const Scalar> theta, std::span<const Scalar> eps,
                                                  const Scalar& delta, const Rational& gamma1 = 0,
                                                  const EnumerationOptions& options = {});

}  // namespace kronecker
