// Acceptance run: one PASS/FAIL line per criterion, each under its time limit.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/hypothesis.hpp"
#include "kronecker/pipeline.hpp"
#include "kronecker/transference.hpp"
#include "kronecker/witness.hpp"
#include "oracle.hpp"

using namespace kronecker;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed expectation; later ones only count.
class Expect {
 public:
  void operator()(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  Outcome outcome(std::string detail) const {
    if (failures_ == 0) return {true, std::move(detail)};
    return {false, std::to_string(failures_) + " failed check(s), first: " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

Scalar q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return Scalar(r);
}

std::string str(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

EnumerationOptions strategy(SearchStrategy s, unsigned threads = 1) {
  EnumerationOptions o;
  o.strategy = s;
  o.threads = threads;
  return o;
}

// ---------------------------------------------------------------------------

Outcome constants() {
  Expect expect;
  expect(gamma(2) == Rational(1, 8), "gamma(2) = 1/8");
  expect(gamma(3) == Rational(1, 54), "gamma(3) = 1/54");
  expect(gamma1(3, TransferencePart::B) == Rational(1, 9), "gamma1(3, B) = 1/9");
  for (int N = 2; N <= 8; ++N) {
    expect(gamma1(N, TransferencePart::B) == Rational(2 * N) * gamma(N), "gamma1(N, B) = 2 N gamma(N), N=" + std::to_string(N));
  }
  return expect.outcome("gamma(2)=1/8, gamma(3)=1/54, gamma1(3,B)=1/9, identity for N=2..8");
}

Outcome duality() {
  Expect expect;
  gen::Rng rng(20001);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = static_cast<std::size_t>(gen::uniform_int(rng, 1, 4));
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 4));
    const auto sys = gen::system(rng, m, n, 12);
    std::vector<Scalar> eps, X;
    for (std::size_t j = 0; j < n; ++j) eps.push_back(Scalar(gen::rational_in(rng, Rational(1, 64), Rational(31, 64), 64)));
    for (std::size_t i = 0; i < m; ++i) X.push_back(Scalar(gen::rational_in(rng, Rational(9, 8), Rational(20), 8)));
    expect(verify_duality_identity(build_dual_pair(sys, eps, X)), "F^T G = I, trial " + std::to_string(trial));
  }
  return expect.outcome("F^T G = I exactly on 100 systems, m,n in 1..4");
}

// Instances of criterion 3; shared with the determinism check.
struct MinInstance {
  std::vector<Scalar> lambda;
  IntBox box;
};

std::vector<MinInstance> oracle_instances() {
  gen::Rng rng(20003);
  std::vector<MinInstance> out;
  for (int trial = 0; trial < 100; ++trial) {
    const auto N = static_cast<std::size_t>(gen::uniform_int(rng, 1, 4));
    out.push_back({gen::rationals(rng, N, gen::uniform_int(rng, 1, 60), 3), gen::box(rng, N, 6)});
  }
  return out;
}

Json minima_json(const std::vector<MinInstance>& cases, unsigned threads) {
  Json rows = Json::array();
  for (const auto& c : cases) {
    for (auto s : {SearchStrategy::Pruned, SearchStrategy::MeetInTheMiddle}) {
      const auto r = min_abs_form_over_box(c.lambda, c.box, strategy(s, threads));
      rows.push_back(Json{{"delta_hat", scalar_json(r.value)}, {"minimizer", int_vector_json(r.minimizer)}});
    }
  }
  return rows;
}

Outcome oracle_equivalence() {
  Expect expect;
  int k = 0;
  for (const auto& c : oracle_instances()) {
    const auto want = oracle::exhaustive_min_oracle(c.lambda, c.box);
    for (auto s : {SearchStrategy::Pruned, SearchStrategy::MeetInTheMiddle}) {
      const auto got = min_abs_form_over_box(c.lambda, c.box, strategy(s));
      const std::string tag = " instance " + std::to_string(k) + (s == SearchStrategy::Pruned ? " pruned" : " mitm");
      expect(got.value.exact() == want.first.exact(), "delta_hat" + tag);
      expect(got.minimizer == want.second, "minimizer" + tag + ": " + str(got.minimizer) + " vs " + str(want.second));
    }
    ++k;
  }
  return expect.outcome("pruned and meet-in-the-middle match the oracle on 100 instances");
}

Json named_json(unsigned threads) {
  const Scalar lam[] = {q(1), Real::parse("sqrt(2)").at(128)};
  Json rows = Json::array();
  for (long b : {3L, 160L}) {
    const auto r = min_abs_form_over_box(lam, IntBox::uniform(2, b), strategy(SearchStrategy::Auto, threads));
    rows.push_back(Json{{"box", b}, {"delta_hat", scalar_json(r.value)}, {"minimizer", int_vector_json(r.minimizer)}});
  }
  return rows;
}

Outcome named_values() {
  Expect expect;
  const Scalar root = Real::parse("sqrt(2)").at(128);
  const Scalar lam[] = {q(1), root};
  auto r = min_abs_form_over_box(lam, IntBox::uniform(2, 3));
  expect(r.value.contains(Rational(0)) == false, "box 3 value is positive");
  expect(abs(r.value.midpoint() - Rational(1715729, 10000000)) < Rational(1, 1000000), "box 3: |mid - 0.1715729| < 1e-6");
  const Scalar three = q(3) - q(2) * root;
  expect(!certainly_lt(r.value, three) && !certainly_gt(r.value, three), "box 3 encloses 3 - 2 sqrt 2");
  expect(r.minimizer == make_int_vector({3, -2}), "box 3 minimizer (3,-2), got " + str(r.minimizer));
  const std::string first = r.value.to_string(10);
  r = min_abs_form_over_box(lam, IntBox::uniform(2, 160));
  const Scalar conv = q(99) - q(70) * root;
  expect(!certainly_lt(r.value, conv) && !certainly_gt(r.value, conv), "box 160 encloses 99 - 70 sqrt 2");
  expect(abs(r.value.midpoint() - Rational(50506, 10000000)) < Rational(1, 10000000), "box 160 ~ 5.0506e-3");
  expect(r.minimizer == make_int_vector({99, -70}), "box 160 minimizer (99,-70), got " + str(r.minimizer));
  return expect.outcome("3-2sqrt2 at (3,-2) = " + first + "; 99-70sqrt2 at (99,-70) = " + r.value.to_string(10));
}

InstanceFile root_two_instance() {
  return parse_instance_text(
      R"J({"kind":"kronecker","lambda":["1","sqrt(2)"],"alpha":["0","0"],"epsilon":["1/20","1/20"],"tau":"0"})J");
}

RunSettings theorem1_settings(unsigned threads) {
  RunSettings s;
  s.threads = threads;
  s.trials = 200;
  s.seed = 42;
  return s;
}

Outcome theorem1_end_to_end() {
  Expect expect;
  const InstanceFile inst = root_two_instance();
  const PipelineResult r = run_theorem1_pipeline(inst.kronecker, theorem1_settings(1));
  expect(r.hypothesis.verdict == Verdict::Holds, "hypothesis holds");
  expect(r.T_star.has_value(), "T* computed");
  if (!r.T_star) return expect.outcome("");
  // T* = 1 / (gamma delta_hat) with delta_hat the certified minimum.
  const Scalar expected = Scalar(Rational(8)) / r.hypothesis.delta_hat;
  expect(!certainly_lt(*r.T_star, expected) && !certainly_gt(*r.T_star, expected), "T* = 8 / delta_hat");
  std::size_t ok = 0;
  const Rational span = 10 * r.T_window;
  for (const auto& t : r.trials) {
    expect(t.tau >= 0 && t.tau <= span, "tau in [0, 10 T*]");
    if (!t.witness) {
      expect(false, "find_t failed at tau = " + exact_token(t.tau));
      continue;
    }
    KroneckerInstance k = inst.kronecker.at(t.precision_bits);
    k.tau = Scalar(t.tau);
    const WitnessCheck check = verify_witness(k, t.witness->t);
    bool within = check.ok;
    for (std::size_t j = 0; j < check.residuals.size(); ++j) within = within && check.residuals[j].upper() <= Rational(1, 20);
    expect(within, "residual upper bounds <= eps at tau = " + exact_token(t.tau));
    expect(t.witness->t.exact() >= t.tau && t.witness->t.exact() <= t.tau + r.T_window, "t in [tau, tau + T*]");
    ok += within;
  }
  expect(r.trials.size() == 200, "200 trials");
  return expect.outcome(std::to_string(ok) + "/200 windows solved, T* ~ " + to_decimal(r.T_window, 10));
}

Outcome gm_comparison() {
  Expect expect;
  const Scalar e1[] = {q(5, 10000)};
  auto rows = compare_bounds(2, e1);
  expect(rows[0].m_star.is_exact() && rows[0].m_star.exact() == 16000, "M*(5e-4) = 16000");
  expect(rows[0].m_gm == 16589, "M_gm(5e-4) = 16589");
  expect(rows[0].star_is_smaller, "16000 < 16589");
  const Scalar e2[] = {q(1, 100)};
  rows = compare_bounds(2, e2);
  expect(rows[0].m_star.exact() == 800 && rows[0].m_gm == 530 && !rows[0].star_is_smaller, "800 > 530 at eps = 0.01");

  // Geometric grid 1e-5 .. 1e-1, 20 points, six significant digits.
  std::vector<Scalar> grid;
  for (int i = 0; i < 20; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", 1e-5 * std::pow(1e4, i / 19.0));
    grid.push_back(Scalar(parse_rational(buf)));
  }
  rows = compare_bounds(2, grid);
  const Scalar eps0 = crossover_epsilon(2);
  std::size_t flips = 0;
  std::string where;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].star_is_smaller == rows[i].star_is_smaller) continue;
    ++flips;
    expect(rows[i - 1].star_is_smaller, "M* smaller below the flip");
    expect(certainly_ge(rows[i - 1].eps * Scalar(2), eps0) && certainly_le(rows[i].eps, Scalar(2) * eps0),
           "flip within a factor 2 of eps0");
    where = to_decimal(rows[i - 1].eps.exact(), 6) + " .. " + to_decimal(rows[i].eps.exact(), 6);
  }
  expect(flips == 1, "exactly one flip on the grid");
  return expect.outcome("16000 < 16589, 800 > 530, flip in " + where + " around eps0 = " +
                        to_decimal(eps0.midpoint(), 6));
}

Outcome sweep_vs_grid() {
  Expect expect;
  gen::Rng rng(20007);
  int accepted = 0, some = 0, none = 0, drawn = 0;
  while (accepted < 100) {
    ++drawn;
    const auto N = static_cast<std::size_t>(gen::uniform_int(rng, 1, 3));
    KroneckerInstance inst;
    Rational max_lambda = 0, min_eps = 1;
    for (std::size_t j = 0; j < N; ++j) {
      Rational l = gen::rational(rng, 6, 3);
      if (l == 0) l = 1;
      const Rational e = gen::rational_in(rng, Rational(1, 20), Rational(9, 20), 20);
      inst.lambda.push_back(Scalar(l));
      inst.alpha.push_back(Scalar(gen::rational(rng, 8)));
      inst.eps.push_back(Scalar(e));
      max_lambda = std::max(max_lambda, Rational(abs(l)));
      min_eps = std::min(min_eps, e);
    }
    inst.tau = Scalar(gen::rational(rng, 4, 5));
    const Scalar T(gen::rational_in(rng, Rational(1, 4), Rational(3), 4));
    const Rational step = min_eps / (4 * max_lambda);
    // Admit only instances whose feasible pieces are all at least 2 * step long.
    bool wide = true;
    for (const auto& piece : feasible_set(inst, T).intervals) wide = wide && (piece.hi - piece.lo).exact() >= 2 * step;
    if (!wide) continue;
    ++accepted;
    const bool sweep = find_t(inst, T).has_value();
    const bool grid = oracle::grid_witness_oracle(inst, T, step).has_value();
    expect(sweep == grid, "verdicts differ on accepted instance " + std::to_string(accepted));
    (sweep ? some : none) += 1;
  }
  KroneckerInstance bad;
  bad.lambda = {q(1), q(1)};
  bad.alpha = {q(0), q(1, 2)};
  bad.eps = {q(1, 5), q(1, 5)};
  bad.tau = q(0);
  for (long len : {1L, 10L, 100L}) expect(!find_t(bad, q(len)).has_value(), "infeasible instance, window " + std::to_string(len));
  expect(some > 0 && none > 0, "both verdicts exercised");
  return expect.outcome("100 instances agree (" + std::to_string(some) + " some, " + std::to_string(none) +
                        " none; " + std::to_string(drawn) + " drawn); infeasible for T = 1, 10, 100");
}

Outcome transference_probes() {
  Expect expect;
  gen::Rng rng(20008);
  int counts[6] = {};
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = static_cast<std::size_t>(gen::uniform_int(rng, 1, 2));
    const auto n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 2));
    const auto sys = gen::system(rng, m, n, 9);
    std::vector<Scalar> alpha, eps, X;
    for (std::size_t j = 0; j < n; ++j) {
      alpha.push_back(Scalar(gen::rational(rng, 10)));
      eps.push_back(Scalar(gen::rational_in(rng, Rational(1, 8), Rational(15, 32), 32)));
    }
    for (std::size_t i = 0; i < m; ++i) X.push_back(Scalar(gen::rational_in(rng, Rational(5, 4), Rational(8), 4)));
    const auto a = necessity_probe(sys, alpha, eps, X);
    const auto b = sufficiency_probe(sys, alpha, eps, X);
    expect(a.outcome != ProbeOutcome::CounterexampleToPartA, "part A counterexample at trial " + std::to_string(trial));
    expect(b.outcome != ProbeOutcome::CounterexampleToPartB, "part B counterexample at trial " + std::to_string(trial));
    ++counts[static_cast<int>(a.outcome)];
    ++counts[static_cast<int>(b.outcome)];
  }
  const int no_solution = counts[static_cast<int>(ProbeOutcome::NoSolution)];
  const int cond_fails = counts[static_cast<int>(ProbeOutcome::ConditionFails)];
  expect(no_solution >= 10, "at least 10 no_solution, got " + std::to_string(no_solution));
  expect(cond_fails >= 10, "at least 10 condition_fails, got " + std::to_string(cond_fails));
  std::ostringstream d;
  d << "no counterexamples; no_solution " << no_solution << ", condition_fails " << cond_fails
    << ", solution_and_condition_hold " << counts[static_cast<int>(ProbeOutcome::SolutionAndConditionHold)]
    << ", condition_holds_solution_found " << counts[static_cast<int>(ProbeOutcome::ConditionHoldsSolutionFound)];
  return expect.outcome(d.str());
}

Outcome reduction_soundness() {
  Expect expect;
  gen::Rng rng(20009);
  static const long dens[] = {211, 223, 227, 229, 233, 239, 241, 251, 257, 263};
  int lifted = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // Rational lambda with large prime denominators keeps the box minimum
    // positive; delta is the certified minimum itself.
    const auto N = static_cast<std::size_t>(trial % 5 == 4 ? 3 : 2);
    KroneckerInstance inst;
    for (std::size_t j = 0; j < N; ++j) {
      const long den = dens[gen::uniform_int(rng, 0, 9)];
      Rational l(gen::uniform_int(rng, 1, 3 * den), den);
      l.canonicalize();
      if (gen::uniform_int(rng, 0, 1)) l = -l;
      inst.lambda.push_back(Scalar(l));
      inst.alpha.push_back(Scalar(gen::rational(rng, 16)));
      inst.eps.push_back(Scalar(N == 2 ? gen::rational_in(rng, Rational(1, 8), Rational(3, 8), 16)
                                       : gen::rational_in(rng, Rational(3, 8), Rational(7, 16), 16)));
    }
    inst.tau = Scalar(gen::rational(rng, 16, 100));
    const auto cert = check_theorem1_hypothesis(inst);
    if (cert.verdict != Verdict::Holds) {
      expect(false, "hypothesis failed on reduction instance " + std::to_string(trial));
      continue;
    }
    inst.delta = cert.delta_hat;
    const ReductionRecord r = reduce_theorem1(inst);
    const Scalar tau[] = {r.tau_prime}, T[] = {r.T1};
    const auto qv = find_integer_point(r.system(), r.beta, r.eps, tau, T, RunSettings{}.budget);
    if (!qv) {
      expect(false, "no integer point in [tau', tau' + T1] on instance " + std::to_string(trial));
      continue;
    }
    const Scalar t = r.lift((*qv)[0]);
    const WitnessCheck check = verify_witness(inst, t);
    expect(check.ok, "lifted t fails verify_witness on instance " + std::to_string(trial));
    expect(check.residuals[r.pivot].is_exact() && check.residuals[r.pivot].exact() == 0,
           "pivot residual not exactly 0 on instance " + std::to_string(trial));
    const Scalar t_star = window_theorem1(static_cast<int>(N), *inst.delta);
    expect(certainly_le(inst.tau, t) && certainly_le(t, inst.tau + t_star), "lifted t outside [tau, tau + T*]");
    lifted += check.ok;
  }
  return expect.outcome(std::to_string(lifted) + "/50 lifted witnesses verified with zero pivot residual");
}

Outcome determinism() {
  Expect expect;
  const auto cases = oracle_instances();
  expect(minima_json(cases, 1).dump() == minima_json(cases, 8).dump(), "criterion 3 results differ with 8 threads");
  expect(named_json(1).dump() == named_json(8).dump(), "criterion 4 results differ with 8 threads");
  const InstanceFile inst = root_two_instance();
  const std::string a = strip_volatile(theorem1_command(inst, theorem1_settings(1))).dump();
  const std::string b = strip_volatile(theorem1_command(inst, theorem1_settings(8))).dump();
  expect(a == b, "criterion 5 certificate differs with 8 threads");
  const std::string h1 = strip_volatile(hypothesis_command(inst, theorem1_settings(1))).dump();
  const std::string h8 = strip_volatile(hypothesis_command(inst, theorem1_settings(8))).dump();
  expect(h1 == h8, "hypothesis certificate differs with 8 threads");
  return expect.outcome("criteria 3-5 byte-identical at 1 and 8 threads (" + std::to_string(a.size()) +
                        "-byte theorem 1 certificate)");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "constants", 1, constants},
      {2, "duality identity", 5, duality},
      {3, "oracle equivalence", 30, oracle_equivalence},
      {4, "named enumeration values", 10, named_values},
      {5, "theorem 1 end to end", 60, theorem1_end_to_end},
      {6, "GM comparison", 1, gm_comparison},
      {7, "sweep vs grid", 60, sweep_vs_grid},
      {8, "transference probes", 120, transference_probes},
      {9, "reduction soundness", 60, reduction_soundness},
      {10, "determinism", 240, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    failed += !o.pass;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (o.pass ? "PASS" : "FAIL") << " (" << timing
              << ") " << o.detail << std::endl;
  }
  return failed;
}
