#include "kronecker/instance.hpp"

namespace kronecker {

void KroneckerInstance::validate() const {
  const std::size_t n = lambda.size();
  if (n == 0) throw DimensionMismatch("instance has no coordinates");
  if (alpha.size() != n || eps.size() != n) {
    throw DimensionMismatch("lambda, alpha and epsilon must have equal lengths");
  }
  const Scalar half(Rational(1, 2));
  for (const Scalar& e : eps) {
    if (certainly_gt(e, Scalar(0)) && certainly_lt(e, half)) continue;
    if (certainly_le(e, Scalar(0)) || certainly_ge(e, half)) {
      throw EpsilonOutOfRange("epsilon " + e.to_string() + " is outside (0, 1/2)");
    }
    throw PrecisionExhausted("cannot place epsilon " + e.to_string() + " inside (0, 1/2)");
  }
  if (delta && !certainly_gt(*delta, Scalar(0))) {
    if (certainly_le(*delta, Scalar(0))) throw DomainError("delta must be positive");
    throw PrecisionExhausted("cannot decide the sign of delta");
  }
}

KroneckerInstance KroneckerProblem::at(int bits) const {
  KroneckerInstance inst;
  inst.precision_bits = bits;
  for (const Real& r : lambda) inst.lambda.push_back(r.at(bits));
  for (const Real& r : alpha) inst.alpha.push_back(r.at(bits));
  for (const Real& r : eps) inst.eps.push_back(r.at(bits));
  inst.tau = tau.at(bits);
  if (delta) inst.delta = delta->at(bits);
  return inst;
}

}  // namespace kronecker
