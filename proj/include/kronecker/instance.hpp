#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kronecker/errors.hpp"
#include "kronecker/real.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker {

// Inputs of the simultaneous approximation problem
//   || lambda_j t - alpha_j || <= eps_j,   t in [tau, tau + T],
// evaluated at a fixed working precision.
struct KroneckerInstance {
  std::vector<Scalar> lambda;
  std::vector<Scalar> alpha;
  std::vector<Scalar> eps;
  Scalar tau;
  std::optional<Scalar> delta;
  int precision_bits = kDefaultPrecisionBits;

  std::size_t dim() const { return lambda.size(); }

  // Throws DimensionMismatch / EpsilonOutOfRange.
  void validate() const;
};

// The same inputs kept as exact sources so that they can be re-evaluated
// at a higher precision.
struct KroneckerProblem {
  std::vector<Real> lambda;
  std::vector<Real> alpha;
  std::vector<Real> eps;
  Real tau;
  std::optional<Real> delta;
  int precision_bits = kDefaultPrecisionBits;

  std::size_t dim() const { return lambda.size(); }
  KroneckerInstance at(int bits) const;
  KroneckerInstance evaluate() const { return at(precision_bits); }
  bool operator==(const KroneckerProblem&) const = default;
};

// Runs f(bits) starting at `start_bits`, doubling on PrecisionExhausted up to
// `max_bits`; rethrows PrecisionExhausted once the cap has been tried.
template <class F>
auto with_precision_escalation(int start_bits, int max_bits, F&& f) -> decltype(f(start_bits)) {
  for (int bits = start_bits;; bits = std::min(bits * 2, max_bits)) {
    try {
      return f(bits);
    } catch (const PrecisionExhausted& e) {
      if (bits >= max_bits) {
        throw PrecisionExhausted(std::string(e.what()) + " (precision cap " + std::to_string(max_bits) +
                                 " bits reached)");
      }
    }
  }
}

}  // namespace kronecker
