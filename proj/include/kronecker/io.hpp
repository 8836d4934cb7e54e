#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kronecker/forms.hpp"
#include "kronecker/hypothesis.hpp"
#include "kronecker/instance.hpp"
#include "kronecker/transference.hpp"
#include "kronecker/witness.hpp"

namespace kronecker {

using Json = nlohmann::ordered_json;

// Theorem 2 data: theta is m x n, row-major by variable. Windows are either
// symmetric (X, |a_i| <= X_i) or shifted (tau_i <= q_i <= tau_i + T_i).
struct LinearSystemProblem {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<Real> theta;
  std::vector<Real> alpha;
  std::vector<Real> eps;
  std::optional<std::vector<Real>> X;
  std::optional<std::vector<Real>> tau;
  std::optional<std::vector<Real>> T;
  int precision_bits = kDefaultPrecisionBits;

  LinearFormSystem system(int bits) const;
  std::vector<Scalar> alpha_at(int bits) const;
  std::vector<Scalar> eps_at(int bits) const;
  std::vector<Scalar> X_at(int bits) const;
  void validate() const;
  bool operator==(const LinearSystemProblem&) const = default;
};

struct InstanceFile {
  enum class Kind { Kronecker, LinearSystem };
  Kind kind = Kind::Kronecker;
  KroneckerProblem kronecker;
  LinearSystemProblem linear;

  bool operator==(const InstanceFile&) const = default;
};

// Numbers are strings ("0.05", "7/3", "sqrt(2)", ...). Unknown fields, binary
// floats and range violations throw InvalidInput subclasses.
InstanceFile parse_instance(const Json& j);
InstanceFile parse_instance_text(std::string_view text);
InstanceFile load_instance_file(const std::string& path);
Json to_json(const InstanceFile& inst);

// Exact values as strings; enclosures as {"lo", "hi"} with directed rounding.
Json scalar_json(const Scalar& s, int digits = 40);
Json int_vector_json(const IntVector& v);
Json hypothesis_json(const HypothesisCertificate& c);
Json witness_json(const Witness& w);
Json condition_json(const ConditionReport& r);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace kronecker
