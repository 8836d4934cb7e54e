#include "kronecker/bounds.hpp"

#include <sstream>

#include "kronecker/errors.hpp"
#include "kronecker/real.hpp"

namespace kronecker {

namespace {

Integer factorial(int n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

Integer pow2(int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

void require_dimension(int N, const char* what) {
  if (N < 2) throw DomainError(std::string(what) + " needs dimension >= 2, got " + std::to_string(N));
}

void require_eps(const Scalar& eps) {
  const Scalar half(Rational(1, 2));
  if (certainly_gt(eps, Scalar(0)) && certainly_lt(eps, half)) return;
  if (certainly_le(eps, Scalar(0)) || certainly_ge(eps, half)) {
    throw EpsilonOutOfRange("epsilon " + eps.to_string() + " is outside (0, 1/2)");
  }
  throw PrecisionExhausted("cannot decide whether epsilon " + eps.to_string() + " lies in (0, 1/2)");
}

void require_positive(const Scalar& x, const char* what) {
  if (certainly_gt(x, Scalar(0))) return;
  if (certainly_le(x, Scalar(0))) throw DomainError(std::string(what) + " must be positive");
  throw PrecisionExhausted(std::string("cannot decide the sign of ") + what);
}

}  // namespace

Rational gamma(int N) {
  require_dimension(N, "gamma");
  const Integer f = factorial(N);
  Rational g(pow2(N - 2), Integer(N) * f * f);
  g.canonicalize();
  return g;
}

Rational gamma1(int d, TransferencePart part) {
  require_dimension(d, "gamma1");
  if (part == TransferencePart::A) return Rational(d);
  const Integer f = factorial(d);
  Rational g(pow2(d - 1), f * f);
  g.canonicalize();
  return g;
}

TheoremOneBox box_theorem1(int N, std::span<const Scalar> eps) {
  const Rational g = gamma(N);
  if (eps.size() != static_cast<std::size_t>(N)) {
    throw DimensionMismatch("expected " + std::to_string(N) + " tolerances, got " + std::to_string(eps.size()));
  }
  TheoremOneBox out;
  for (const Scalar& e : eps) {
    require_eps(e);
    Scalar m = Scalar(1) / (Scalar(g) * e);
    if (!certainly_ge(m, Scalar(1))) throw DomainError("M* = " + m.to_string() + " is below 1");
    out.box.bounds.push_back(floor_of(m));
    out.m_star.push_back(std::move(m));
  }
  return out;
}

std::vector<Integer> box_gm(int N, std::span<const Scalar> eps, int bits, int max_bits) {
  require_dimension(N, "box_gm");
  std::vector<Integer> out;
  for (const Scalar& e : eps) {
    require_eps(e);
    for (int b = bits;; b = std::min(2 * b, max_bits)) {
      try {
        const Scalar value = (Scalar(1) / e) * log_of(Scalar(N) / e, b);
        out.push_back(ceil_of(value));
        break;
      } catch (const PrecisionExhausted&) {
        if (b >= max_bits) throw PrecisionExhausted("GM box ceiling undecided at " + std::to_string(b) + " bits");
      }
    }
  }
  return out;
}

Scalar window_theorem1(int N, const Scalar& delta) {
  require_positive(delta, "delta");
  return Scalar(1) / (Scalar(gamma(N)) * delta);
}

Scalar window_gm(const Scalar& delta) {
  require_positive(delta, "delta");
  return Scalar(4) / delta;
}

Scalar corollary_box(const Scalar& eps, const Rational& g1) {
  require_positive(eps, "epsilon");
  return Scalar(1) / (Scalar(2) * eps * Scalar(g1));
}

Scalar corollary_box_proof_variant(const Scalar& eps, const Rational& g1) {
  require_positive(eps, "epsilon");
  return Scalar(1) / (Scalar(4) * Scalar(g1) * eps);
}

Scalar corollary_window(const Rational& g1, const Scalar& delta) {
  require_positive(delta, "delta");
  return Scalar(2) / (Scalar(g1) * delta);
}

std::vector<BoundComparisonRow> compare_bounds(int N, std::span<const Scalar> eps_grid) {
  const Rational g = gamma(N);
  std::vector<BoundComparisonRow> rows;
  rows.reserve(eps_grid.size());
  for (const Scalar& e : eps_grid) {
    require_eps(e);
    BoundComparisonRow row;
    row.eps = e;
    row.m_star = Scalar(1) / (Scalar(g) * e);
    const Scalar single[] = {e};
    row.m_gm = box_gm(N, single).front();
    const Scalar gm(row.m_gm);
    if (certainly_lt(row.m_star, gm)) {
      row.star_is_smaller = true;
    } else if (!certainly_ge(row.m_star, gm)) {
      throw PrecisionExhausted("cannot compare M* with the GM box at eps = " + e.to_string());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Scalar crossover_epsilon(int N, int bits) {
  const Rational g = gamma(N);
  return Scalar(N) * exp_of(Scalar(Rational(-1 / g)), bits);
}

std::string bounds_csv(std::span<const BoundComparisonRow> rows) {
  // Terminating decimals verbatim, anything else to 30 significant digits.
  auto cell = [](const Scalar& s) {
    if (s.is_exact()) {
      std::string t = exact_token(s.exact());
      return t.find('/') == std::string::npos ? t : to_decimal(s.exact(), 30);
    }
    return to_decimal(s.midpoint(), 30);
  };
  std::ostringstream out;
  out << "eps,M_star,M_gm,star_is_smaller\n";
  for (const auto& r : rows) {
    out << cell(r.eps) << ',' << cell(r.m_star) << ',' << r.m_gm.get_str() << ','
        << (r.star_is_smaller ? "true" : "false") << '\n';
  }
  return out.str();
}

BoundSet compute_bound_set(int N, std::span<const Scalar> eps, const std::optional<Scalar>& delta) {
  BoundSet b;
  b.N = N;
  b.gamma = gamma(N);
  b.gamma1_A = gamma1(N, TransferencePart::A);
  b.gamma1_B = gamma1(N, TransferencePart::B);
  TheoremOneBox box = box_theorem1(N, eps);
  b.M_star = std::move(box.m_star);
  b.box = std::move(box.box);
  b.M_gm = box_gm(N, eps);
  for (const Scalar& e : eps) b.M_cor.push_back(corollary_box(e, b.gamma1_B));
  if (delta) {
    b.T_star = window_theorem1(N, *delta);
    b.T_gm = window_gm(*delta);
    b.T_cor = corollary_window(b.gamma1_B, *delta);
  }
  return b;
}

}  // namespace kronecker
