// Python bindings. Numbers cross the boundary as strings ("1/3", "sqrt(2)",
// "0.05"); structured results cross as JSON text and are decoded in
// kronecker_approx/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kronecker/bounds.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/hypothesis.hpp"
#include "kronecker/io.hpp"
#include "kronecker/pipeline.hpp"
#include "kronecker/witness.hpp"

namespace py = pybind11;
using namespace kronecker;

namespace {

std::vector<Scalar> scalars(const std::vector<std::string>& items, int bits) {
  std::vector<Scalar> out;
  for (const auto& s : items) out.push_back(Real::parse(s).at(bits));
  return out;
}

TransferencePart part_of(const std::string& p) {
  if (p == "A") return TransferencePart::A;
  if (p == "B") return TransferencePart::B;
  throw InvalidInput("part must be \"A\" or \"B\"");
}

RunSettings settings(unsigned threads, std::uint64_t budget, int max_bits, bool allow_float, unsigned trials,
                     std::uint64_t seed, const std::optional<std::string>& window, bool by_reduction) {
  RunSettings s;
  s.threads = threads;
  s.budget = budget;
  s.max_bits = max_bits;
  s.allow_float_verdict = allow_float;
  s.trials = trials;
  s.seed = seed;
  if (window) s.window = Real::parse(*window);
  s.by_reduction = by_reduction;
  return s;
}

std::string bounds(int N, const std::vector<std::string>& eps_text, const std::optional<std::string>& delta_text) {
  const auto eps = scalars(eps_text, kDefaultPrecisionBits);
  std::optional<Scalar> delta;
  if (delta_text) delta = Real::parse(*delta_text).at(kDefaultPrecisionBits);
  const BoundSet b = compute_bound_set(N, eps, delta);
  Json j{{"N", N}, {"gamma", exact_token(b.gamma)}, {"gamma1_A", exact_token(b.gamma1_A)},
         {"gamma1_B", exact_token(b.gamma1_B)}};
  Json ms = Json::array(), box = Json::array(), gm = Json::array(), cor = Json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    ms.push_back(scalar_json(b.M_star[i]));
    box.push_back(b.box.bounds[i].get_str());
    gm.push_back(b.M_gm[i].get_str());
    cor.push_back(scalar_json(b.M_cor[i]));
  }
  j["M_star"] = ms;
  j["box"] = box;
  j["M_gm"] = gm;
  j["M_cor"] = cor;
  j["T_star"] = b.T_star ? scalar_json(*b.T_star) : Json(nullptr);
  j["T_gm"] = b.T_gm ? scalar_json(*b.T_gm) : Json(nullptr);
  j["T_cor"] = b.T_cor ? scalar_json(*b.T_cor) : Json(nullptr);
  return j.dump();
}

std::string min_abs_form(const std::vector<std::string>& lambda, const std::vector<long>& box, unsigned threads,
                         int bits) {
  IntBox b;
  for (long x : box) b.bounds.emplace_back(x);
  EnumerationOptions o;
  o.threads = threads;
  const auto r = min_abs_form_over_box(scalars(lambda, bits), b, o);
  return Json{{"value", scalar_json(r.value)}, {"minimizer", int_vector_json(r.minimizer)}}.dump();
}

KroneckerInstance kronecker_instance(const std::string& instance_json) {
  const InstanceFile f = parse_instance_text(instance_json);
  if (f.kind != InstanceFile::Kind::Kronecker) throw InvalidInput("expected a kronecker instance");
  return f.kronecker.at(f.kronecker.precision_bits);
}

std::optional<std::string> find_t_json(const std::string& instance_json, const std::string& T) {
  const KroneckerInstance inst = kronecker_instance(instance_json);
  const auto w = find_t(inst, Real::parse(T).at(inst.precision_bits));
  if (!w) return std::nullopt;
  return witness_json(*w).dump();
}

std::string verify_witness_json(const std::string& instance_json, const std::string& t) {
  const KroneckerInstance inst = kronecker_instance(instance_json);
  const WitnessCheck c = verify_witness(inst, Real::parse(t).at(inst.precision_bits));
  Json res = Json::array();
  for (const Scalar& r : c.residuals) res.push_back(scalar_json(r));
  return Json{{"ok", c.ok}, {"residuals", res}}.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantitative Kronecker approximation";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("gamma", [](int N) { return exact_token(gamma(N)); }, py::arg("N"));
  m.def("gamma1", [](int d, const std::string& part) { return exact_token(gamma1(d, part_of(part))); },
        py::arg("d"), py::arg("part") = "B");
  m.def("_bounds", &bounds, py::arg("N"), py::arg("eps"), py::arg("delta") = std::nullopt);
  m.def("_min_abs_form", &min_abs_form, py::arg("lam"), py::arg("box"), py::arg("threads") = 1,
        py::arg("bits") = kDefaultPrecisionBits, py::call_guard<py::gil_scoped_release>());
  m.def("_find_t", &find_t_json, py::arg("instance"), py::arg("T"), py::call_guard<py::gil_scoped_release>());
  m.def("_verify_witness", &verify_witness_json, py::arg("instance"), py::arg("t"));
  m.def(
      "_run",
      [](const std::string& command, const std::string& instance_json, unsigned threads, std::uint64_t budget,
         int max_bits, bool allow_float, unsigned trials, std::uint64_t seed, const std::optional<std::string>& window,
         bool by_reduction) {
        const InstanceFile inst = parse_instance_text(instance_json);
        const RunSettings s = settings(threads, budget, max_bits, allow_float, trials, seed, window, by_reduction);
        py::gil_scoped_release release;
        return run_command(command, inst, s).dump();
      },
      py::arg("command"), py::arg("instance"), py::arg("threads") = 1, py::arg("budget") = RunSettings{}.budget,
      py::arg("max_bits") = RunSettings{}.max_bits, py::arg("allow_float_verdict") = false,
      py::arg("trials") = RunSettings{}.trials, py::arg("seed") = RunSettings{}.seed,
      py::arg("window") = std::nullopt, py::arg("by_reduction") = false);
  m.def(
      "_verify",
      [](const std::string& certificate, unsigned threads) {
        Json cert;
        try {
          cert = Json::parse(certificate);
        } catch (const nlohmann::json::parse_error& e) {
          throw ParseError(std::string("malformed certificate: ") + e.what());
        }
        py::gil_scoped_release release;
        const VerifyReport r = verify_certificate(cert, threads);
        return std::make_pair(r.ok, r.mismatches);
      },
      py::arg("certificate"), py::arg("threads") = 1);
}
