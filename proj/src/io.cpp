#include "kronecker/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kronecker/errors.hpp"

namespace kronecker {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
  return j.at(name);
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw InvalidInput("unknown field '" + key + "'");
  }
}

Real number(const Json& v, const std::string& where) {
  if (!v.is_string()) throw InvalidInput(where + ": numbers must be strings, not JSON numbers");
  try {
    return Real::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

std::vector<Real> numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw InvalidInput(where + " must be an array of strings");
  std::vector<Real> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

long integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InvalidInput(where + " must be an integer");
  return v.get<long>();
}

int precision(const Json& j) {
  if (!j.contains("precision_bits")) return kDefaultPrecisionBits;
  const long bits = integer(j.at("precision_bits"), "precision_bits");
  if (bits < 16 || bits > 1 << 20) throw InvalidInput("precision_bits must lie in [16, 2^20]");
  return static_cast<int>(bits);
}

Json tokens(const std::vector<Real>& v) {
  Json a = Json::array();
  for (const Real& r : v) a.push_back(r.token());
  return a;
}

std::vector<Scalar> evaluate(const std::vector<Real>& v, int bits) {
  std::vector<Scalar> out;
  for (const Real& r : v) out.push_back(r.at(bits));
  return out;
}

// Sign of a real input, raising precision until it is decided.
int sign_of(const Real& r, int bits) {
  return with_precision_escalation(bits, 4096, [&](int b) {
    const int s = r.at(b).sign();
    if (s == 2) throw PrecisionExhausted("cannot decide the sign of " + r.token());
    return s;
  });
}

KroneckerProblem parse_kronecker(const Json& j) {
  reject_unknown(j, {"kind", "lambda", "alpha", "epsilon", "tau", "delta", "precision_bits"});
  KroneckerProblem p;
  p.lambda = numbers(field(j, "lambda"), "lambda");
  p.alpha = numbers(field(j, "alpha"), "alpha");
  p.eps = numbers(field(j, "epsilon"), "epsilon");
  p.tau = j.contains("tau") ? number(j.at("tau"), "tau") : Real(0);
  if (j.contains("delta")) p.delta = number(j.at("delta"), "delta");
  p.precision_bits = precision(j);
  if (p.lambda.size() < 2) throw DimensionMismatch("a kronecker instance needs N >= 2 coordinates");
  with_precision_escalation(p.precision_bits, 4096, [&](int bits) {
    p.at(bits).validate();
    return 0;
  });
  for (const Real& l : p.lambda) {
    if (sign_of(l, p.precision_bits) == 0) throw ZeroLambda("lambda entries must be nonzero");
  }
  return p;
}

LinearSystemProblem parse_linear(const Json& j) {
  reject_unknown(j, {"kind", "m", "n", "theta", "alpha", "epsilon", "X", "tau", "T", "precision_bits"});
  LinearSystemProblem p;
  const long m = integer(field(j, "m"), "m");
  const long n = integer(field(j, "n"), "n");
  if (m < 1 || n < 1) throw DimensionMismatch("m and n must be positive");
  p.m = static_cast<std::size_t>(m);
  p.n = static_cast<std::size_t>(n);
  p.theta = numbers(field(j, "theta"), "theta");
  p.alpha = numbers(field(j, "alpha"), "alpha");
  p.eps = numbers(field(j, "epsilon"), "epsilon");
  if (j.contains("X")) p.X = numbers(j.at("X"), "X");
  if (j.contains("tau")) p.tau = numbers(j.at("tau"), "tau");
  if (j.contains("T")) p.T = numbers(j.at("T"), "T");
  p.precision_bits = precision(j);
  p.validate();
  return p;
}

}  // namespace

LinearFormSystem LinearSystemProblem::system(int bits) const { return LinearFormSystem(m, n, evaluate(theta, bits)); }
std::vector<Scalar> LinearSystemProblem::alpha_at(int bits) const { return evaluate(alpha, bits); }
std::vector<Scalar> LinearSystemProblem::eps_at(int bits) const { return evaluate(eps, bits); }

std::vector<Scalar> LinearSystemProblem::X_at(int bits) const {
  if (!X) throw InvalidInput("instance has no X window");
  return evaluate(*X, bits);
}

void LinearSystemProblem::validate() const {
  if (theta.size() != m * n) throw DimensionMismatch("theta must have m * n entries");
  if (alpha.size() != n || eps.size() != n) throw DimensionMismatch("alpha and epsilon need n entries");
  if (!X && !(tau && T)) throw InvalidInput("give X or both tau and T");
  if (X && X->size() != m) throw DimensionMismatch("X needs m entries");
  if (tau.has_value() != T.has_value()) throw InvalidInput("tau and T come together");
  if (tau && (tau->size() != m || T->size() != m)) throw DimensionMismatch("tau and T need m entries");
  const Scalar half(Rational(1, 2));
  with_precision_escalation(precision_bits, 4096, [&](int bits) {
    for (const Real& e : eps) {
      const Scalar v = e.at(bits);
      if (certainly_gt(v, Scalar(0)) && certainly_lt(v, half)) continue;
      if (certainly_le(v, Scalar(0)) || certainly_ge(v, half)) throw EpsilonOutOfRange("epsilon outside (0, 1/2)");
      throw PrecisionExhausted("cannot place epsilon inside (0, 1/2)");
    }
    if (X) {
      for (const Real& x : *X) {
        const Scalar v = x.at(bits);
        if (certainly_gt(v, Scalar(1))) continue;
        if (certainly_le(v, Scalar(1))) throw DomainError("X entries must exceed 1");
        throw PrecisionExhausted("cannot compare X with 1");
      }
    }
    if (T) {
      for (const Real& t : *T) {
        const Scalar v = t.at(bits);
        if (certainly_ge(v, Scalar(0))) continue;
        if (certainly_lt(v, Scalar(0))) throw DomainError("window lengths must be non-negative");
        throw PrecisionExhausted("cannot decide the sign of a window length");
      }
    }
    return 0;
  });
}

InstanceFile parse_instance(const Json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw InvalidInput("kind must be a string");
  InstanceFile f;
  if (kind == "kronecker") {
    f.kind = InstanceFile::Kind::Kronecker;
    f.kronecker = parse_kronecker(j);
  } else if (kind == "linear_system") {
    f.kind = InstanceFile::Kind::LinearSystem;
    f.linear = parse_linear(j);
  } else {
    throw InvalidInput("kind must be \"kronecker\" or \"linear_system\"");
  }
  return f;
}

InstanceFile parse_instance_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(j);
}

InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_instance_text(text.str());
}

Json to_json(const InstanceFile& f) {
  Json j;
  if (f.kind == InstanceFile::Kind::Kronecker) {
    const KroneckerProblem& p = f.kronecker;
    j["kind"] = "kronecker";
    j["lambda"] = tokens(p.lambda);
    j["alpha"] = tokens(p.alpha);
    j["epsilon"] = tokens(p.eps);
    j["tau"] = p.tau.token();
    if (p.delta) j["delta"] = p.delta->token();
    j["precision_bits"] = p.precision_bits;
  } else {
    const LinearSystemProblem& p = f.linear;
    j["kind"] = "linear_system";
    j["m"] = p.m;
    j["n"] = p.n;
    j["theta"] = tokens(p.theta);
    j["alpha"] = tokens(p.alpha);
    j["epsilon"] = tokens(p.eps);
    if (p.X) j["X"] = tokens(*p.X);
    if (p.tau) j["tau"] = tokens(*p.tau);
    if (p.T) j["T"] = tokens(*p.T);
    j["precision_bits"] = p.precision_bits;
  }
  return j;
}

Json scalar_json(const Scalar& s, int digits) {
  if (s.is_exact()) return exact_token(s.exact());
  return Json{{"lo", to_decimal_bound(s.enclosure().lo(), false, digits)},
              {"hi", to_decimal_bound(s.enclosure().hi(), true, digits)}};
}

Json int_vector_json(const IntVector& v) {
  Json a = Json::array();
  for (const Integer& x : v) a.push_back(x.get_str());
  return a;
}

Json hypothesis_json(const HypothesisCertificate& c) {
  Json box = Json::array();
  for (const Integer& b : c.box.bounds) box.push_back(b.get_str());
  return Json{{"delta_hat", scalar_json(c.delta_hat)},
              {"minimizer", c.minimizer.empty() ? Json(nullptr) : int_vector_json(c.minimizer)},
              {"box", box},
              {"threshold", scalar_json(c.threshold)},
              {"verdict", to_string(c.verdict)},
              {"rigor", to_string(c.rigor)},
              {"precision_bits", c.precision_bits}};
}

Json witness_json(const Witness& w) {
  Json res = Json::array();
  for (const Scalar& r : w.residuals) res.push_back(scalar_json(r));
  return Json{{"t", scalar_json(w.t)}, {"tau", scalar_json(w.tau)}, {"T", scalar_json(w.T)}, {"residuals", res}};
}

Json condition_json(const ConditionReport& r) {
  Json box = Json::array();
  for (const Integer& b : r.checked_box.bounds) box.push_back(b.get_str());
  return Json{{"gamma1", exact_token(r.gamma1_used)},
              {"checked_box", box},
              {"holds", r.holds},
              {"violator", r.violator ? int_vector_json(*r.violator) : Json(nullptr)},
              {"complete", r.complete}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

}  // namespace kronecker
