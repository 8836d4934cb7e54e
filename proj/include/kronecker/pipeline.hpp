#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kronecker/hypothesis.hpp"
#include "kronecker/io.hpp"
#include "kronecker/witness.hpp"

namespace kronecker {

inline constexpr const char* kToolVersion = "0.1.0";

// Shared knobs of every command. threads never changes a result and is
// left out of certificates.
struct RunSettings {
  unsigned threads = 1;
  std::uint64_t budget = 1'000'000'000;
  int max_bits = 4096;
  bool allow_float_verdict = false;
  unsigned trials = 200;
  std::uint64_t seed = 42;
  // Window length for `witness`; T* from the hypothesis when absent.
  std::optional<Real> window;
  bool by_reduction = false;

  Json to_json() const;
  static RunSettings from_json(const Json& j);
};

// tau_k = (r_k / 2^64) * span, r_k the k-th output of mt19937_64(seed).
std::vector<Rational> sample_taus(std::uint64_t seed, unsigned count, const Rational& span);

struct TrialRecord {
  Rational tau;
  std::optional<Witness> witness;
  int precision_bits = 0;
};

struct PipelineResult {
  HypothesisCertificate hypothesis;
  Rational gamma;
  std::optional<Scalar> delta_used;
  std::optional<Scalar> T_star;
  Rational T_window;  // exact lower bound of T*; every window has this length
  std::vector<TrialRecord> trials;
  std::string failure_class;  // "", "hypothesis" or "witness"

  bool ok() const { return failure_class.empty(); }
};

// Hypothesis check (with precision escalation), T* from delta or the
// achieved minimum, then find_t on [tau_k, tau_k + T*] for each sampled tau_k
// in [0, 10 T*].
PipelineResult run_theorem1_pipeline(const KroneckerProblem& problem, const RunSettings& settings);

// Each command returns a certificate with "exit_code" set per the CLI
// contract: 0 holds/found, 1 negative.
Json hypothesis_command(const InstanceFile& inst, const RunSettings& s);
Json witness_command(const InstanceFile& inst, const RunSettings& s);
Json transference_command(const InstanceFile& inst, const RunSettings& s);
Json theorem1_command(const InstanceFile& inst, const RunSettings& s);

// Dispatch on "command"; used by `verify`.
Json run_command(const std::string& command, const InstanceFile& inst, const RunSettings& s);

// Removes the wall-clock field so certificates can be compared byte for byte.
Json strip_volatile(Json certificate);

struct VerifyReport {
  bool ok = false;
  std::vector<std::string> mismatches;
};

// Re-runs the recorded command on the echoed instance and settings, compares
// the results, and re-checks every recorded witness t from scratch.
VerifyReport verify_certificate(const Json& certificate, unsigned threads = 1);

}  // namespace kronecker
