// Command-line front end. Exit codes: 0 success / holds / found, 1 negative
// result, 2 invalid input, 3 budget or precision exhausted.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/pipeline.hpp"

using namespace kronecker;

namespace {

struct Globals {
  unsigned threads = 1;
  std::uint64_t budget = 1'000'000'000;
  int max_bits = 4096;
  std::uint64_t seed = 42;
  bool allow_float = false;
  std::string json_out;
  std::string csv_out;
};

RunSettings settings_from(const Globals& g) {
  RunSettings s;
  s.threads = g.threads;
  s.budget = g.budget;
  s.max_bits = g.max_bits;
  s.seed = g.seed;
  s.allow_float_verdict = g.allow_float;
  return s;
}

std::string show(const Scalar& s) {
  if (s.is_exact()) return exact_token(s.exact());
  return "~" + to_decimal(s.midpoint(), 12) + " in " + s.to_string(16);
}

std::vector<Scalar> parse_list(const std::string& text, std::size_t n) {
  std::vector<Scalar> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(Real::parse(item).at(kDefaultPrecisionBits));
  if (out.size() == 1 && n > 1) out.resize(n, out[0]);
  if (out.size() != n) throw DimensionMismatch("expected " + std::to_string(n) + " epsilon values");
  return out;
}

void emit_json(const Globals& g, const Json& j) {
  if (!g.json_out.empty()) write_text_file(g.json_out, j.dump(2) + "\n");
}

int cmd_bounds(const Globals& g, int N, const std::string& eps_text, const std::string& delta_text) {
  const auto eps = parse_list(eps_text, static_cast<std::size_t>(std::max(N, 1)));
  std::optional<Scalar> delta;
  if (!delta_text.empty()) delta = Real::parse(delta_text).at(kDefaultPrecisionBits);
  const BoundSet b = compute_bound_set(N, eps, delta);
  std::cout << "N = " << N << "\n"
            << "gamma = " << exact_token(b.gamma) << "\n"
            << "gamma1 (necessity) = " << exact_token(b.gamma1_A) << "\n"
            << "gamma1 (sufficiency) = " << exact_token(b.gamma1_B) << "\n";
  Json j{{"N", N}, {"gamma", exact_token(b.gamma)}, {"gamma1_A", exact_token(b.gamma1_A)},
         {"gamma1_B", exact_token(b.gamma1_B)}};
  Json ms = Json::array(), box = Json::array(), gm = Json::array(), cor = Json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::cout << "eps_" << i + 1 << " = " << show(eps[i]) << ": M* = " << show(b.M_star[i])
              << ", box = " << b.box.bounds[i] << ", M_gm = " << b.M_gm[i] << ", M_cor = " << show(b.M_cor[i])
              << "\n";
    ms.push_back(scalar_json(b.M_star[i]));
    box.push_back(b.box.bounds[i].get_str());
    gm.push_back(b.M_gm[i].get_str());
    cor.push_back(scalar_json(b.M_cor[i]));
  }
  j["M_star"] = ms;
  j["box"] = box;
  j["M_gm"] = gm;
  j["M_cor"] = cor;
  if (b.T_star) {
    std::cout << "T* = " << show(*b.T_star) << "\nT_gm = " << show(*b.T_gm) << "\nT_cor = " << show(*b.T_cor)
              << "\n";
    j["T_star"] = scalar_json(*b.T_star);
    j["T_gm"] = scalar_json(*b.T_gm);
    j["T_cor"] = scalar_json(*b.T_cor);
  }
  emit_json(g, j);
  return 0;
}

// "a:b:geometric:k" or "a:b:linear:k". Geometric points are rounded to six
// significant digits so that every grid value is an exact decimal.
std::vector<Scalar> parse_grid(const std::string& grid) {
  std::vector<std::string> parts;
  std::stringstream in(grid);
  for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw ParseError("grid must look like a:b:geometric:k");
  const Rational a = parse_rational(parts[0]), b = parse_rational(parts[1]);
  const long k = std::stol(parts[3]);
  if (k < 2 || a <= 0 || b <= a) throw InvalidInput("grid needs 0 < a < b and k >= 2");
  std::vector<Scalar> out;
  for (long i = 0; i < k; ++i) {
    if (parts[2] == "linear") {
      out.push_back(Scalar(Rational(a + (b - a) * Rational(i, k - 1))));
    } else if (parts[2] == "geometric") {
      const double x = a.get_d() * std::pow(b.get_d() / a.get_d(), static_cast<double>(i) / static_cast<double>(k - 1));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.5e", x);
      out.push_back(Scalar(parse_rational(buf)));
    } else {
      throw ParseError("grid kind must be geometric or linear");
    }
  }
  return out;
}

int cmd_compare_gm(const Globals& g, int N, const std::string& grid) {
  const auto eps = parse_grid(grid);
  const auto rows = compare_bounds(N, eps);
  const Scalar eps0 = crossover_epsilon(N);
  std::cout << "eps0 = N exp(-1/gamma) = " << to_decimal(eps0.midpoint(), 6) << "\n";
  std::cout << "eps            M*             M_gm      M* smaller\n";
  std::optional<std::size_t> flip;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::cout << to_decimal(r.eps.exact(), 6) << "  " << to_decimal(r.m_star.midpoint(), 6) << "  " << r.m_gm
              << "  " << (r.star_is_smaller ? "yes" : "no") << "\n";
    if (i > 0 && rows[i - 1].star_is_smaller != r.star_is_smaller && !flip) flip = i;
  }
  Json j{{"N", N}, {"eps0", scalar_json(eps0)}, {"rows", Json::array()}};
  for (const auto& r : rows) {
    j["rows"].push_back(Json{{"eps", scalar_json(r.eps)}, {"M_star", scalar_json(r.m_star)},
                             {"M_gm", r.m_gm.get_str()}, {"star_is_smaller", r.star_is_smaller}});
  }
  if (flip) {
    std::cout << "flip between eps = " << to_decimal(rows[*flip - 1].eps.exact(), 6) << " and "
              << to_decimal(rows[*flip].eps.exact(), 6) << "\n";
    j["flip_between"] = Json::array({scalar_json(rows[*flip - 1].eps), scalar_json(rows[*flip].eps)});
  }
  if (!g.csv_out.empty()) write_text_file(g.csv_out, bounds_csv(rows));
  emit_json(g, j);
  return 0;
}

int report(const Globals& g, const Json& cert) {
  emit_json(g, cert);
  return cert.at("exit_code").get<int>();
}

int cmd_hypothesis(const Globals& g, const std::string& path) {
  const Json c = hypothesis_command(load_instance_file(path), settings_from(g));
  const Json& h = c.at("hypothesis");
  std::cout << "box = " << c.at("constants").at("box").dump() << "\n"
            << "delta_hat = " << h.at("delta_hat").dump() << "\n"
            << "minimizer = " << h.at("minimizer").dump() << "\n"
            << "threshold = " << h.at("threshold").dump() << "\n"
            << "verdict = " << h.at("verdict").get<std::string>() << " (" << h.at("rigor").get<std::string>()
            << ")\n";
  return report(g, c);
}

int cmd_witness(const Globals& g, const std::string& path, const std::string& window, bool reduction) {
  RunSettings s = settings_from(g);
  if (!window.empty()) s.window = Real::parse(window);
  s.by_reduction = reduction;
  const Json c = witness_command(load_instance_file(path), s);
  if (c.contains("integer_point")) {
    std::cout << "q = " << c.at("integer_point").dump() << "\n";
  } else if (c.at("witness").is_null()) {
    std::cout << "no t in the window\n";
  } else {
    const Json& w = c.at("witness");
    std::cout << "t = " << w.at("t").dump() << "\nresiduals = " << w.at("residuals").dump() << "\n";
  }
  return report(g, c);
}

int cmd_transference(const Globals& g, const std::string& path) {
  const Json c = transference_command(load_instance_file(path), settings_from(g));
  std::cout << "duality identity: " << (c.at("duality_identity").get<bool>() ? "exact" : "FAILED") << "\n"
            << "solution: " << c.at("solution").dump() << "\n"
            << "necessity (gamma1 = d): " << c.at("necessity").at("outcome").get<std::string>() << "\n"
            << "sufficiency (gamma1 = 2^(d-1)/(d!)^2): " << c.at("sufficiency").at("outcome").get<std::string>()
            << "\n";
  return report(g, c);
}

int cmd_verify_theorem1(const Globals& g, const std::string& path, unsigned trials) {
  RunSettings s = settings_from(g);
  s.trials = trials;
  const Json c = theorem1_command(load_instance_file(path), s);
  const Json& sum = c.at("summary");
  std::cout << "hypothesis: " << c.at("hypothesis").at("verdict").get<std::string>()
            << ", delta_hat = " << c.at("hypothesis").at("delta_hat").dump() << "\n";
  if (c.contains("T_star")) std::cout << "T* = " << c.at("T_star").dump() << "\n";
  std::cout << "witnesses found: " << sum.at("found") << " / " << sum.at("trials") << "\n";
  const std::string failure = sum.at("failure_class").get<std::string>();
  if (failure == "witness") {
    std::cerr << "FAILURE (witness): some window [tau, tau + T*] has no t although the hypothesis holds.\n"
              << "This contradicts the theorem and points to a bug or a counterexample.\n";
  } else if (failure == "hypothesis") {
    std::cerr << "FAILURE (hypothesis): the Diophantine hypothesis does not hold; pipeline stopped.\n";
  }
  return report(g, c);
}

int cmd_verify(const Globals& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  Json cert;
  try {
    cert = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  const VerifyReport r = verify_certificate(cert, g.threads);
  if (r.ok) {
    std::cout << "certificate reproduced\n";
    return 0;
  }
  for (const auto& m : r.mismatches) std::cout << "mismatch: " << m << "\n";
  return 1;
}

int cmd_gen_preset(const Globals& g, const std::string& kind, int n, const std::string& eps, const std::string& out) {
  if (n < 1) throw InvalidInput("--n must be positive");
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  std::mt19937_64 rng(g.seed);
  auto random_rational = [&](long den, long bound) {
    Rational q(static_cast<long>(rng() % static_cast<unsigned long>(2 * bound * den + 1)) - bound * den, den);
    q.canonicalize();
    return Real(q);
  };
  Json j;
  if (kind == "sqrt-primes" || kind == "log-primes" || kind == "random-rational") {
    if (n < 2) throw InvalidInput("a kronecker instance needs --n >= 2");
    if (n > 15 && kind != "random-rational") throw InvalidInput("at most 15 primes");
    j["kind"] = "kronecker";
    Json lambda = Json::array(), alpha = Json::array(), epsilon = Json::array();
    for (int i = 0; i < n; ++i) {
      if (kind == "sqrt-primes") {
        lambda.push_back("sqrt(" + std::to_string(primes[i]) + ")");
      } else if (kind == "log-primes") {
        lambda.push_back("log(" + std::to_string(primes[i]) + ")");
      } else {
        Real l = random_rational(997, 3);
        while (l.exact() == 0) l = random_rational(997, 3);
        lambda.push_back(l.token());
      }
      alpha.push_back(kind == "random-rational" ? random_rational(16, 1).token() : "0");
      epsilon.push_back(eps);
    }
    j["lambda"] = lambda;
    j["alpha"] = alpha;
    j["epsilon"] = epsilon;
    j["tau"] = "0";
  } else if (kind == "random-linear") {
    const int m = n, k = n;
    j["kind"] = "linear_system";
    j["m"] = m;
    j["n"] = k;
    Json theta = Json::array(), alpha = Json::array(), epsilon = Json::array(), X = Json::array();
    for (int i = 0; i < m * k; ++i) theta.push_back(random_rational(12, 2).token());
    for (int i = 0; i < k; ++i) {
      alpha.push_back(random_rational(12, 1).token());
      epsilon.push_back(eps);
    }
    for (int i = 0; i < m; ++i) X.push_back(std::to_string(2 + rng() % 4));
    j["theta"] = theta;
    j["alpha"] = alpha;
    j["epsilon"] = epsilon;
    j["X"] = X;
  } else {
    throw InvalidInput("unknown preset kind '" + kind + "' (sqrt-primes, log-primes, random-rational, random-linear)");
  }
  // Round-trip through the loader so that a written file is always valid.
  const InstanceFile inst = parse_instance(j);
  const std::string text = to_json(inst).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative Kronecker approximation: bounds, hypothesis checks, witnesses, transference"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads for enumeration")->check(CLI::Range(1u, 1024u));
  app.add_option("--budget", g.budget, "largest admissible enumeration box (points)");
  app.add_option("--max-bits", g.max_bits, "precision cap for escalation")->check(CLI::Range(16, 1 << 20));
  app.add_option("--seed", g.seed, "seed for tau sampling and presets");
  app.add_flag("--allow-float-verdict", g.allow_float, "settle undecided verdicts by midpoints at the cap");
  app.add_option("--json", g.json_out, "write a JSON report/certificate");
  app.add_option("--csv", g.csv_out, "write CSV (compare-gm)");

  int N = 0;
  std::string eps = "0.05", delta, grid, path, window, kind, out;
  bool reduction = false;
  unsigned trials = 200;

  auto* bounds = app.add_subcommand("bounds", "all explicit constants for N and eps");
  bounds->add_option("--n", N, "dimension N >= 2")->required();
  bounds->add_option("--eps", eps, "comma-separated tolerances (one value is repeated)");
  bounds->add_option("--delta", delta, "delta for the window lengths");

  auto* compare = app.add_subcommand("compare-gm", "M* against the Gonek-Montgomery box over an eps grid");
  compare->add_option("--n", N, "dimension N >= 2")->required();
  compare->add_option("--eps-grid", grid, "a:b:geometric:k or a:b:linear:k")->required();

  auto* hyp = app.add_subcommand("hypothesis", "check min |m . lambda| >= delta over the M* box");
  hyp->add_option("instance", path)->required();

  auto* wit = app.add_subcommand("witness", "find t (kronecker) or an integer point (linear_system)");
  wit->add_option("instance", path)->required();
  wit->add_option("--T", window, "window length (default T* from the hypothesis)");
  wit->add_flag("--reduction", reduction, "route through the single-variable reduction");

  auto* tr = app.add_subcommand("transference", "duality identity, condition checks and probes");
  tr->add_option("instance", path)->required();

  auto* v1 = app.add_subcommand("verify-theorem1", "hypothesis, T*, and find_t over sampled windows");
  v1->add_option("instance", path)->required();
  v1->add_option("--trials", trials, "number of sampled tau")->check(CLI::Range(0u, 1000000u));

  auto* ver = app.add_subcommand("verify", "re-run a certificate and compare");
  ver->add_option("certificate", path)->required();

  auto* gen = app.add_subcommand("gen-preset", "write a preset instance file");
  gen->add_option("--kind", kind, "sqrt-primes, log-primes, random-rational, random-linear")->required();
  gen->add_option("--n", N, "dimension")->required();
  gen->add_option("--eps", eps, "tolerance for every coordinate");
  gen->add_option("--out", out, "output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bounds) return cmd_bounds(g, N, eps, delta);
    if (*compare) return cmd_compare_gm(g, N, grid);
    if (*hyp) return cmd_hypothesis(g, path);
    if (*wit) return cmd_witness(g, path, window, reduction);
    if (*tr) return cmd_transference(g, path);
    if (*v1) return cmd_verify_theorem1(g, path, trials);
    if (*ver) return cmd_verify(g, path);
    if (*gen) return cmd_gen_preset(g, kind, N, eps, out);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
