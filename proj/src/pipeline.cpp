#include "kronecker/pipeline.hpp"

#include <chrono>
#include <random>

#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "parallel.hpp"

namespace kronecker {

namespace {

const KroneckerProblem& kronecker_of(const InstanceFile& inst, const char* command) {
  if (inst.kind != InstanceFile::Kind::Kronecker) {
    throw InvalidInput(std::string(command) + " needs a kronecker instance");
  }
  return inst.kronecker;
}

const LinearSystemProblem& linear_of(const InstanceFile& inst, const char* command) {
  if (inst.kind != InstanceFile::Kind::LinearSystem) {
    throw InvalidInput(std::string(command) + " needs a linear_system instance");
  }
  return inst.linear;
}

EnumerationOptions enumeration(const RunSettings& s) {
  EnumerationOptions o;
  o.threads = s.threads;
  o.budget = s.budget;
  return o;
}

EscalationOptions escalation(const RunSettings& s) {
  EscalationOptions e;
  e.max_bits = s.max_bits;
  e.allow_float_verdict = s.allow_float_verdict;
  return e;
}

Json header(const char* command, const InstanceFile& inst, const RunSettings& s) {
  Json j;
  j["tool"] = "kronecker";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["instance"] = to_json(inst);
  j["settings"] = s.to_json();
  return j;
}

Json scalars_json(const std::vector<Scalar>& v) {
  Json a = Json::array();
  for (const Scalar& x : v) a.push_back(scalar_json(x));
  return a;
}

Json constants_json(const KroneckerProblem& p, int bits) {
  const int N = static_cast<int>(p.dim());
  std::vector<Scalar> eps;
  for (const Real& e : p.eps) eps.push_back(e.at(bits));
  const TheoremOneBox box = box_theorem1(N, eps);
  Json b = Json::array();
  for (const Integer& x : box.box.bounds) b.push_back(x.get_str());
  return Json{{"N", N}, {"gamma", exact_token(gamma(N))}, {"M_star", scalars_json(box.m_star)}, {"box", b}};
}

// Runs f at the problem precision, doubling on PrecisionExhausted.
template <class F>
auto escalate(int start, int max_bits, F&& f) {
  return with_precision_escalation(std::min(start, max_bits), max_bits, std::forward<F>(f));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

Json RunSettings::to_json() const {
  return Json{{"budget", budget},
              {"max_bits", max_bits},
              {"allow_float_verdict", allow_float_verdict},
              {"trials", trials},
              {"seed", seed},
              {"window", window ? Json(window->token()) : Json(nullptr)},
              {"by_reduction", by_reduction}};
}

RunSettings RunSettings::from_json(const Json& j) {
  RunSettings s;
  try {
    s.budget = j.at("budget").get<std::uint64_t>();
    s.max_bits = j.at("max_bits").get<int>();
    s.allow_float_verdict = j.at("allow_float_verdict").get<bool>();
    s.trials = j.at("trials").get<unsigned>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("window").is_null()) s.window = Real::parse(j.at("window").get<std::string>());
    s.by_reduction = j.at("by_reduction").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad settings block: ") + e.what());
  }
  return s;
}

std::vector<Rational> sample_taus(std::uint64_t seed, unsigned count, const Rational& span) {
  std::mt19937_64 rng(seed);
  Rational scale = span;
  scale /= Rational(Integer(1) << 64);
  std::vector<Rational> out;
  out.reserve(count);
  for (unsigned k = 0; k < count; ++k) {
    Rational tau = Rational(Integer(static_cast<unsigned long>(rng()))) * scale;
    tau.canonicalize();
    out.push_back(tau);
  }
  return out;
}

PipelineResult run_theorem1_pipeline(const KroneckerProblem& problem, const RunSettings& settings) {
  PipelineResult r;
  const int N = static_cast<int>(problem.dim());
  r.gamma = gamma(N);
  r.hypothesis = check_theorem1_hypothesis(problem, enumeration(settings), escalation(settings));
  if (r.hypothesis.verdict != Verdict::Holds) {
    r.failure_class = "hypothesis";
    return r;
  }
  const int bits = std::max(problem.precision_bits, r.hypothesis.precision_bits);
  r.delta_used = problem.delta ? problem.delta->at(bits) : r.hypothesis.delta_hat;
  r.T_star = window_theorem1(N, *r.delta_used);
  r.T_window = r.T_star->lower();
  const auto taus = sample_taus(settings.seed, settings.trials, Rational(10) * r.T_window);
  r.trials.resize(taus.size());
  const Scalar T(r.T_window);
  detail::parallel_for(taus.size(), settings.threads, [&](std::size_t k) {
    TrialRecord& rec = r.trials[k];
    rec.tau = taus[k];
    rec.witness = escalate(problem.precision_bits, settings.max_bits, [&](int b) {
      KroneckerInstance inst = problem.at(b);
      inst.tau = Scalar(rec.tau);
      rec.precision_bits = b;
      return find_t(inst, T);
    });
  });
  for (const TrialRecord& rec : r.trials) {
    if (!rec.witness) r.failure_class = "witness";
  }
  return r;
}

Json hypothesis_command(const InstanceFile& inst, const RunSettings& s) {
  const Stopwatch clock;
  const KroneckerProblem& p = kronecker_of(inst, "hypothesis");
  const auto cert = check_theorem1_hypothesis(p, enumeration(s), escalation(s));
  Json j = header("hypothesis", inst, s);
  j["constants"] = constants_json(p, std::max(p.precision_bits, cert.precision_bits));
  j["hypothesis"] = hypothesis_json(cert);
  j["exit_code"] = cert.verdict == Verdict::Holds ? 0 : 1;
  j["wall_clock_seconds"] = clock.seconds();
  return j;
}

Json witness_command(const InstanceFile& inst, const RunSettings& s) {
  const Stopwatch clock;
  Json j = header("witness", inst, s);
  if (inst.kind == InstanceFile::Kind::LinearSystem) {
    const LinearSystemProblem& p = inst.linear;
    if (!p.tau) throw InvalidInput("witness on a linear_system needs tau and T windows");
    const auto q = escalate(p.precision_bits, s.max_bits, [&](int b) {
      std::vector<Scalar> tau, T;
      for (const Real& x : *p.tau) tau.push_back(x.at(b));
      for (const Real& x : *p.T) T.push_back(x.at(b));
      return find_integer_point(p.system(b), p.alpha_at(b), p.eps_at(b), tau, T, s.budget);
    });
    j["integer_point"] = q ? int_vector_json(*q) : Json(nullptr);
    j["exit_code"] = q ? 0 : 1;
    j["wall_clock_seconds"] = clock.seconds();
    return j;
  }

  const KroneckerProblem& p = inst.kronecker;
  const int N = static_cast<int>(p.dim());
  std::optional<HypothesisCertificate> cert;
  if (!s.window || (s.by_reduction && !p.delta)) {
    cert = check_theorem1_hypothesis(p, enumeration(s), escalation(s));
    j["hypothesis"] = hypothesis_json(*cert);
  }
  std::optional<Witness> w;
  if (s.by_reduction) {
    w = escalate(p.precision_bits, s.max_bits, [&](int b) {
      KroneckerInstance k = p.at(b);
      if (!k.delta) k.delta = cert->delta_hat;
      return find_t_by_reduction(k, s.budget);
    });
  } else {
    Rational T;
    if (s.window) {
      T = s.window->at(p.precision_bits).lower();
    } else {
      if (!p.delta && cert->verdict != Verdict::Holds) throw DomainError("achieved minimum is zero; pass --T");
      const Scalar delta = p.delta ? p.delta->at(p.precision_bits) : cert->delta_hat;
      T = window_theorem1(N, delta).lower();
    }
    j["window_length"] = exact_token(T);
    w = escalate(p.precision_bits, s.max_bits, [&](int b) { return find_t(p.at(b), Scalar(T)); });
  }
  j["witness"] = w ? witness_json(*w) : Json(nullptr);
  j["exit_code"] = w ? 0 : 1;
  j["wall_clock_seconds"] = clock.seconds();
  return j;
}

Json transference_command(const InstanceFile& inst, const RunSettings& s) {
  const Stopwatch clock;
  const LinearSystemProblem& p = linear_of(inst, "transference");
  if (!p.X) throw InvalidInput("transference needs X");
  Json j = header("transference", inst, s);
  const int bits = p.precision_bits;
  const auto sys = p.system(bits);
  const auto alpha = p.alpha_at(bits), eps = p.eps_at(bits), X = p.X_at(bits);
  const auto pair = build_dual_pair(sys, eps, X);
  const auto necessity = necessity_probe(sys, alpha, eps, X, s.budget);
  const auto sufficiency = sufficiency_probe(sys, alpha, eps, X, s.budget);
  j["duality_identity"] = verify_duality_identity(pair);
  j["solution"] = necessity.solution ? int_vector_json(*necessity.solution) : Json(nullptr);
  j["necessity"] = Json{{"outcome", to_string(necessity.outcome)}, {"condition", condition_json(necessity.condition)}};
  j["sufficiency"] = Json{{"outcome", to_string(sufficiency.outcome)},
                          {"condition", condition_json(sufficiency.condition)}};
  const bool counterexample = necessity.outcome == ProbeOutcome::CounterexampleToPartA ||
                              sufficiency.outcome == ProbeOutcome::CounterexampleToPartB;
  j["exit_code"] = (counterexample || !necessity.solution) ? 1 : 0;
  j["wall_clock_seconds"] = clock.seconds();
  return j;
}

Json theorem1_command(const InstanceFile& inst, const RunSettings& s) {
  const Stopwatch clock;
  const KroneckerProblem& p = kronecker_of(inst, "verify-theorem1");
  const PipelineResult r = run_theorem1_pipeline(p, s);
  Json j = header("verify-theorem1", inst, s);
  j["constants"] = constants_json(p, std::max(p.precision_bits, r.hypothesis.precision_bits));
  j["hypothesis"] = hypothesis_json(r.hypothesis);
  if (r.T_star) {
    j["delta_used"] = scalar_json(*r.delta_used);
    j["T_star"] = scalar_json(*r.T_star);
    j["window_length"] = exact_token(r.T_window);
  }
  Json trials = Json::array();
  std::size_t found = 0;
  for (const TrialRecord& t : r.trials) {
    Json row{{"tau", exact_token(t.tau)}, {"precision_bits", t.precision_bits}};
    row["witness"] = t.witness ? witness_json(*t.witness) : Json(nullptr);
    found += t.witness.has_value();
    trials.push_back(std::move(row));
  }
  j["trials"] = trials;
  j["summary"] = Json{{"trials", r.trials.size()}, {"found", found}, {"failure_class", r.failure_class}};
  j["exit_code"] = r.ok() ? 0 : 1;
  j["wall_clock_seconds"] = clock.seconds();
  return j;
}

Json run_command(const std::string& command, const InstanceFile& inst, const RunSettings& s) {
  if (command == "hypothesis") return hypothesis_command(inst, s);
  if (command == "witness") return witness_command(inst, s);
  if (command == "transference") return transference_command(inst, s);
  if (command == "verify-theorem1") return theorem1_command(inst, s);
  throw InvalidInput("unknown command '" + command + "'");
}

Json strip_volatile(Json certificate) {
  certificate.erase("wall_clock_seconds");
  return certificate;
}

namespace {

Scalar scalar_from_json(const Json& j, int bits) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  return Scalar::enclose(parse_rational(j.at("lo").get<std::string>()), parse_rational(j.at("hi").get<std::string>()),
                         bits);
}

// Independent re-check of one recorded witness against the instance.
bool recheck_witness(const KroneckerProblem& p, const Json& w, int bits) {
  const Scalar t = scalar_from_json(w.at("t"), bits);
  const Scalar tau = scalar_from_json(w.at("tau"), bits);
  const Scalar T = scalar_from_json(w.at("T"), bits);
  if (!certainly_le(tau, t) || !certainly_le(t, tau + T)) return false;
  KroneckerInstance inst = p.at(bits);
  inst.tau = tau;
  return verify_witness(inst, t).ok;
}

}  // namespace

VerifyReport verify_certificate(const Json& certificate, unsigned threads) {
  VerifyReport report;
  try {
    const std::string command = certificate.at("command").get<std::string>();
    const InstanceFile inst = parse_instance(certificate.at("instance"));
    RunSettings s = RunSettings::from_json(certificate.at("settings"));
    s.threads = threads;
    const Json fresh = strip_volatile(run_command(command, inst, s));
    const Json recorded = strip_volatile(certificate);
    for (const auto& [key, value] : recorded.items()) {
      if (!fresh.contains(key) || fresh.at(key) != value) report.mismatches.push_back(key);
    }
    for (const auto& [key, _] : fresh.items()) {
      if (!recorded.contains(key)) report.mismatches.push_back(key);
    }
    if (command == "verify-theorem1" && recorded.contains("trials")) {
      for (const Json& row : recorded.at("trials")) {
        if (row.at("witness").is_null()) continue;
        if (!recheck_witness(inst.kronecker, row.at("witness"), row.at("precision_bits").get<int>())) {
          report.mismatches.push_back("trial witness at tau=" + row.at("tau").get<std::string>());
        }
      }
    }
    if (command == "witness" && recorded.contains("witness") && !recorded.at("witness").is_null()) {
      if (!recheck_witness(inst.kronecker, recorded.at("witness"), inst.kronecker.precision_bits)) {
        report.mismatches.push_back("witness");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed certificate: ") + e.what());
  }
  report.ok = report.mismatches.empty();
  return report;
}

}  // namespace kronecker
