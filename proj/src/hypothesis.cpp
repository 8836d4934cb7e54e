#include "kronecker/hypothesis.hpp"

#include <algorithm>
#include <optional>

#include "box_search.hpp"
#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"

namespace kronecker {

using detail::FormKind;
using detail::i128;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

std::string to_string(Rigor r) { return r == Rigor::Proven ? "proven" : "float_only"; }

namespace {

std::vector<std::int64_t> checked_bounds(const IntBox& box, std::uint64_t budget) {
  for (const Integer& b : box.bounds) {
    if (b < 0) throw DomainError("box bounds must be non-negative");
  }
  const Integer count = box.point_count();
  if (count > Integer(std::to_string(budget))) {
    throw BudgetExceeded("box has " + count.get_str() + " points, budget is " + std::to_string(budget));
  }
  std::vector<std::int64_t> out;
  for (const Integer& b : box.bounds) out.push_back(b.get_si());
  return out;
}

bool has_nonzero_point(const IntBox& box) {
  return std::any_of(box.bounds.begin(), box.bounds.end(), [](const Integer& b) { return b > 0; });
}

IntVector to_int_vector(const std::vector<std::int64_t>& m) {
  IntVector out;
  out.reserve(m.size());
  for (std::int64_t v : m) out.emplace_back(static_cast<long>(v));
  return out;
}

Scalar form_value(std::span<const Scalar> values, const std::vector<std::int64_t>& m, FormKind kind) {
  Scalar s;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] != 0) s += Scalar(static_cast<long>(m[j])) * values[j];
  }
  return kind == FormKind::Abs ? abs(s) : dist_to_nearest_int(s);
}

// The two values agree because c -/+ other only involves exactly known
// coordinates and produces 0 (Abs) or an integer (Dist).
bool provably_equal(std::span<const Scalar> values, const std::vector<std::int64_t>& c,
                    const std::vector<std::int64_t>& other, FormKind kind) {
  for (int sigma : {1, -1}) {
    Rational s = 0;
    bool ok = true;
    for (std::size_t j = 0; j < c.size() && ok; ++j) {
      const std::int64_t w = c[j] - sigma * other[j];
      if (w == 0) continue;
      if (!values[j].is_exact()) {
        ok = false;
      } else {
        s += Rational(static_cast<long>(w)) * values[j].exact();
      }
    }
    if (!ok) continue;
    if (kind == FormKind::Abs ? sgn(s) == 0 : s.get_den() == 1) return true;
  }
  return false;
}

bool use_mitm(const IntBox& box, const EnumerationOptions& options) {
  switch (options.strategy) {
    case SearchStrategy::Pruned:
      return false;
    case SearchStrategy::MeetInTheMiddle:
      return true;
    case SearchStrategy::Auto:
      break;
  }
  return box.point_count() > Integer(std::to_string(options.mitm_threshold));
}

BoxMinimum min_form(std::span<const Scalar> values, const IntBox& box, FormKind kind,
                    const EnumerationOptions& options) {
  if (values.empty()) throw DimensionMismatch("no coefficients");
  if (values.size() != box.dim()) {
    throw DimensionMismatch("box has dimension " + std::to_string(box.dim()) + ", form has " +
                            std::to_string(values.size()) + " coefficients");
  }
  const auto bounds = checked_bounds(box, options.budget);
  if (!has_nonzero_point(box)) throw DomainError("the box contains no nonzero integer point");

  const detail::FixedPointForm form = detail::make_fixed_point(values, bounds);
  const detail::SearchConfig config{options.threads, use_mitm(box, options), options.candidate_cap};
  const detail::SearchHit hit = detail::search_min(form, bounds, kind, config);
  if (form.exact) {
    return {Scalar(Rational(detail::to_integer(hit.key), detail::to_integer(form.modulus))), to_int_vector(hit.m)};
  }

  // Every vector whose true value is at most the true minimum has a key
  // within 2E of the best key, E = sum B_j.
  i128 slack = 0;
  for (std::int64_t b : bounds) slack += b;
  const auto candidates = detail::search_collect(form, bounds, kind, hit.key + 2 * slack, config);

  std::vector<Scalar> evaluated;
  evaluated.reserve(candidates.size());
  std::size_t chosen = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    evaluated.push_back(form_value(values, candidates[c], kind));
    if (evaluated[c].upper() < evaluated[chosen].upper()) chosen = c;
  }
  std::size_t reported = chosen;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (c == chosen || certainly_gt(evaluated[c], evaluated[chosen])) continue;
    if (!provably_equal(values, candidates[c], candidates[chosen], kind)) {
      throw PrecisionExhausted("cannot separate the box minimum from a competing vector");
    }
    reported = std::min(reported, c);  // candidates are sorted lexicographically
  }
  return {evaluated[chosen], to_int_vector(candidates[reported])};
}

int working_bits(std::span<const Scalar> a, std::span<const Scalar> b = {}) {
  int bits = 0;
  for (const Scalar& s : a) bits = std::max(bits, s.bits());
  for (const Scalar& s : b) bits = std::max(bits, s.bits());
  return bits == 0 ? kDefaultPrecisionBits : bits;
}

void require_open_unit_half(const Scalar& x, const char* what) {
  const Scalar half(Rational(1, 2));
  if (certainly_gt(x, Scalar(0)) && certainly_lt(x, half)) return;
  if (certainly_le(x, Scalar(0)) || certainly_ge(x, half)) {
    throw EpsilonOutOfRange(std::string(what) + " " + x.to_string() + " is outside (0, 1/2)");
  }
  throw PrecisionExhausted(std::string("cannot place ") + what + " inside (0, 1/2)");
}

HypothesisCertificate vacuous(IntBox box, const Scalar& threshold) {
  HypothesisCertificate cert;
  cert.delta_hat = threshold;
  cert.box = std::move(box);
  cert.threshold = threshold;
  cert.verdict = Verdict::Holds;
  return cert;
}

}  // namespace

BoxMinimum min_abs_form_over_box(std::span<const Scalar> lambda, const IntBox& box,
                                 const EnumerationOptions& options) {
  return min_form(lambda, box, FormKind::Abs, options);
}

BoxMinimum min_dist_form_over_box(std::span<const Scalar> theta, const IntBox& box,
                                  const EnumerationOptions& options) {
  return min_form(theta, box, FormKind::Dist, options);
}

BoxMinimum min_max_transposed_over_box(const LinearFormSystem& sys, std::span<const Scalar> deltas,
                                       const IntBox& box, const EnumerationOptions& options) {
  if (box.dim() != sys.n()) throw DimensionMismatch("box must have one bound per form");
  if (deltas.size() != sys.m()) throw DimensionMismatch("need one delta per variable");
  for (const Scalar& d : deltas) {
    if (certainly_le(d, Scalar(0))) throw DomainError("delta must be positive");
    if (!certainly_gt(d, Scalar(0))) throw PrecisionExhausted("cannot decide the sign of delta");
  }
  const auto bounds = checked_bounds(box, options.budget);
  if (!has_nonzero_point(box)) throw DomainError("the box contains no nonzero integer point");

  const bool exact = sys.is_exact() &&
                     std::all_of(deltas.begin(), deltas.end(), [](const Scalar& d) { return d.is_exact(); });
  const std::size_t n = sys.n();
  std::vector<std::int64_t> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = -bounds[j];

  std::optional<Scalar> best;
  std::optional<Rational> lowest;
  std::vector<std::int64_t> best_u;
  IntVector ui(n);
  for (;;) {
    bool canonical = false;
    for (std::int64_t v : u) {
      if (v != 0) {
        canonical = v > 0;
        break;
      }
    }
    if (canonical) {
      for (std::size_t j = 0; j < n; ++j) ui[j] = static_cast<long>(u[j]);
      const std::vector<Scalar> r = eval_transposed(sys, ui);
      Scalar value = dist_to_nearest_int(r[0]) / deltas[0];
      for (std::size_t i = 1; i < r.size(); ++i) value = max(value, dist_to_nearest_int(r[i]) / deltas[i]);
      if (!lowest || value.lower() < *lowest) lowest = value.lower();
      const bool better = exact ? (!best || value.exact() < best->exact()) : (!best || value.upper() < best->upper());
      if (better) {
        best = value;
        best_u = u;
      }
    }
    std::size_t j = n;
    while (j-- > 0) {
      if (u[j] < bounds[j]) {
        ++u[j];
        break;
      }
      u[j] = -bounds[j];
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  if (exact) return {*best, to_int_vector(best_u), true};
  return {Scalar::enclose(*lowest, best->upper(), working_bits(sys.coefficients(), deltas)), to_int_vector(best_u),
          false};
}

Verdict decide(const Scalar& value, const Scalar& threshold) {
  if (certainly_ge(value, threshold)) return Verdict::Holds;
  if (certainly_lt(value, threshold)) return Verdict::Fails;
  return Verdict::Undecided;
}

HypothesisCertificate check_theorem1_hypothesis(const KroneckerInstance& inst, const EnumerationOptions& options) {
  inst.validate();
  TheoremOneBox box = box_theorem1(static_cast<int>(inst.dim()), inst.eps);
  BoxMinimum bm = min_abs_form_over_box(inst.lambda, box.box, options);
  HypothesisCertificate cert;
  cert.delta_hat = bm.value;
  cert.minimizer = std::move(bm.minimizer);
  cert.box = std::move(box.box);
  cert.threshold = inst.delta ? *inst.delta : cert.delta_hat;
  if (inst.delta) {
    cert.verdict = decide(cert.delta_hat, *inst.delta);
  } else {
    const int s = cert.delta_hat.sign();
    cert.verdict = s == 1 ? Verdict::Holds : s == 0 ? Verdict::Fails : Verdict::Undecided;
  }
  const bool exact = std::all_of(inst.lambda.begin(), inst.lambda.end(), [](const Scalar& x) { return x.is_exact(); });
  cert.precision_bits = exact ? 0 : inst.precision_bits;
  return cert;
}

HypothesisCertificate check_theorem1_hypothesis(const KroneckerProblem& problem, const EnumerationOptions& options,
                                                const EscalationOptions& escalation) {
  const int max_bits = std::max(escalation.max_bits, problem.precision_bits);
  for (int bits = problem.precision_bits;; bits = std::min(2 * bits, max_bits)) {
    try {
      HypothesisCertificate cert = check_theorem1_hypothesis(problem.at(bits), options);
      if (cert.verdict != Verdict::Undecided) return cert;
      if (bits >= max_bits) {
        if (!escalation.allow_float_verdict) {
          throw PrecisionExhausted("hypothesis verdict undecided at " + std::to_string(bits) + " bits");
        }
        const bool above = problem.delta ? cert.delta_hat.midpoint() >= cert.threshold.midpoint()
                                         : sgn(cert.delta_hat.midpoint()) > 0;
        cert.verdict = above ? Verdict::Holds : Verdict::Fails;
        cert.rigor = Rigor::FloatOnly;
        return cert;
      }
    } catch (const PrecisionExhausted& e) {
      if (bits >= max_bits) {
        throw PrecisionExhausted(std::string(e.what()) + " (precision cap " + std::to_string(max_bits) +
                                 " bits reached)");
      }
    }
  }
}

HypothesisCertificate check_corollary1_hypothesis(const LinearFormSystem& sys, std::span<const Scalar> deltas,
                                                  std::span<const Scalar> eps, const EnumerationOptions& options) {
  if (eps.size() != sys.n()) throw DimensionMismatch("need one epsilon per form");
  if (deltas.size() != sys.m()) throw DimensionMismatch("need one delta per variable");
  for (const Scalar& e : eps) require_open_unit_half(e, "epsilon");
  for (const Scalar& d : deltas) require_open_unit_half(d, "delta");
  const Rational g1 = gamma1(static_cast<int>(sys.d()), TransferencePart::B);
  IntBox box;
  for (const Scalar& e : eps) box.bounds.push_back(floor_of(corollary_box(e, g1)));
  const Scalar one(1);
  if (!has_nonzero_point(box)) return vacuous(std::move(box), one);
  BoxMinimum bm = min_max_transposed_over_box(sys, deltas, box, options);
  HypothesisCertificate cert;
  cert.delta_hat = bm.value;
  cert.minimizer = std::move(bm.minimizer);
  cert.box = std::move(box);
  cert.threshold = one;
  cert.verdict = decide(cert.delta_hat, one);
  return cert;
}

HypothesisCertificate check_corollary2_hypothesis(std::span<const Scalar> theta, std::span<const Scalar> eps,
                                                  const Scalar& delta, const Rational& gamma1_value,
                                                  const EnumerationOptions& options) {
  if (theta.empty() || eps.size() != theta.size()) throw DimensionMismatch("need one epsilon per theta");
  for (const Scalar& e : eps) require_open_unit_half(e, "epsilon");
  if (certainly_le(delta, Scalar(0))) throw DomainError("delta must be positive");
  if (!certainly_gt(delta, Scalar(0))) throw PrecisionExhausted("cannot decide the sign of delta");
  const Rational g1 = sgn(gamma1_value) > 0 ? gamma1_value
                                            : gamma1(static_cast<int>(theta.size()) + 1, TransferencePart::B);
  IntBox box;
  for (const Scalar& e : eps) box.bounds.push_back(floor_of(corollary_box(e, g1)));
  if (!has_nonzero_point(box)) return vacuous(std::move(box), delta);
  BoxMinimum bm = min_dist_form_over_box(theta, box, options);
  HypothesisCertificate cert;
  cert.delta_hat = bm.value;
  cert.minimizer = std::move(bm.minimizer);
  cert.box = std::move(box);
  cert.threshold = delta;
  cert.verdict = decide(cert.delta_hat, delta);
  return cert;
}

}  // namespace kronecker
