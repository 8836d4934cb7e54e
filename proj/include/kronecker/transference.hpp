#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kronecker/forms.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker {

using ScalarMatrix = std::vector<std::vector<Scalar>>;

// The 2d forms f_k(z), g_k(w) attached to a linear form system, with
// z = (x, y), w = (v, u), x, v in R^m, y, u in R^n:
//   f_k = (L_k(x) + y_k) / eps_k,   g_k = eps_k u_k              (k < n)
//   f_k = x_i / X_i,                g_k = X_i (v_i - R_i(u))     (k = n + i)
// F[k][l] is the coefficient of z_l in f_k, G[k][l] that of w_l in g_k.
// sum_k f_k(z) g_k(w) = z . w identically iff F^T G = I.
struct DualPair {
  ScalarMatrix F;
  ScalarMatrix G;
  std::vector<Scalar> eps;
  std::vector<Scalar> X;
};

// Throws DimensionMismatch, or DomainError for non-positive eps / X.
DualPair build_dual_pair(const LinearFormSystem& sys, std::span<const Scalar> eps, std::span<const Scalar> X);

// True iff F^T G is exactly the identity. Enclosure entries never qualify.
bool verify_duality_identity(const DualPair& pair);

// |u_j| <= floor(1 / (2 gamma1 eps_j)). Outside this box the right side of
// the condition exceeds 1/2 and the condition holds automatically.
IntBox condition_cutoff_box(std::span<const Scalar> eps, const Rational& gamma1);

struct ConditionReport {
  Rational gamma1_used;
  IntBox checked_box;
  bool holds = true;
  std::optional<IntVector> violator;  // first canonical violator in lexicographic order
  bool complete = true;               // the cutoff box covers every u that could fail
};

enum class ConditionRoute { Auto, FixedPoint, Generic };

// Checks, for every nonzero u in the cutoff box,
//   ||u . alpha|| <= gamma1 max(max_i X_i ||R_i(u)||, max_j eps_j |u_j|).
// Auto takes a 128-bit integer route when all data are rational and small
// enough, and exact/enclosure Scalar arithmetic otherwise.
ConditionReport check_condition(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                                std::span<const Scalar> eps, std::span<const Scalar> X, const Rational& gamma1,
                                std::uint64_t budget = 1'000'000'000, ConditionRoute route = ConditionRoute::Auto);

enum class ProbeOutcome {
  SolutionAndConditionHold,
  NoSolution,
  CounterexampleToPartA,
  ConditionFails,
  ConditionHoldsSolutionFound,
  CounterexampleToPartB,
};

std::string to_string(ProbeOutcome o);

struct ProbeResult {
  ProbeOutcome outcome;
  std::optional<IntVector> solution;  // a with |a_i| <= X_i solving the system
  ConditionReport condition;
};

// Searches a with |a_i| <= X_i and ||L_j(a) - alpha_j|| <= eps_j, then tests
// the condition with gamma1 = d. A solution together with a failing
// condition is reported as CounterexampleToPartA.
ProbeResult necessity_probe(const LinearFormSystem& sys, std::span<const Scalar> alpha, std::span<const Scalar> eps,
                            std::span<const Scalar> X, std::uint64_t budget = 10'000'000);

// Tests the condition with gamma1 = 2^{d-1} / (d!)^2; when it holds, a
// solution must exist, otherwise CounterexampleToPartB.
ProbeResult sufficiency_probe(const LinearFormSystem& sys, std::span<const Scalar> alpha,
                              std::span<const Scalar> eps, std::span<const Scalar> X,
                              std::uint64_t budget = 10'000'000);

}  // namespace kronecker
