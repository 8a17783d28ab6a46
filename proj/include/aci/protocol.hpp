#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aci/joint_pmf.hpp"

namespace aci {

enum class Party { Alice, Bob };

// One message round: the sender draws a message from its rule row keyed by
// the sender's current view ("<own symbol>|m1,m2,..").
struct ProtocolRound {
  Party sender = Party::Alice;
  int alphabet = 2;
  std::map<std::string, std::vector<double>> rule;
};

struct ProtocolSpec {
  std::optional<JointPMF> setup;  // none: both parties start with "-"
  std::vector<ProtocolRound> rounds;
  std::map<std::string, std::string> outputs_alice;  // final view -> output symbol
  std::map<std::string, std::string> outputs_bob;
  long state_cap = 100000;
};

struct ExecutionResult {
  JointPMF view_pmf;    // joint over (Alice view, Bob view) labels
  JointPMF output_pmf;  // joint over output symbols
  // Output index (into output_pmf labels) per view index (into view_pmf labels).
  std::vector<int> out_of_alice_view;
  std::vector<int> out_of_bob_view;
};

// Exact enumeration over setup values and message randomness.
ExecutionResult run_protocol(const ProtocolSpec& spec);

struct SecurityVerdict {
  bool secure = false;
  std::string reason;        // empty when secure
  double output_error = 0.0; // worst cell deviation from the target
  double leak_alice = 0.0;   // I(view_A ; out_B | out_A), bits
  double leak_bob = 0.0;     // I(out_A ; view_B | out_B), bits
};

// Secure iff the output distribution matches the target and both conditional
// leakage terms vanish within tol.
SecurityVerdict security_check(const ExecutionResult& res, const JointPMF& target, double tol);

ProtocolSpec protocol_from_json(const std::string& json_text);

struct SuiteOptions {
  int instances = 20;
  uint64_t seed = 0;
  int sweep_g = 6;
  int restarts = 8;
  int max_iters = 1200;
  int threads = 0;
};

struct SuiteCheck {
  int instance = 0;
  int property = 0;  // 1..4
  bool pass = false;
  bool rechecked = false;  // failed once, retried at doubled resolution
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  bool all_pass = false;
};

// Randomized validation of the four monotone-region properties on small
// alphabets: local computation, communication, secure derivation, and
// tensor additivity. Failures are retried at doubled sweep resolution
// before being reported.
SuiteReport monotonicity_suite(const SuiteOptions& opts);

std::string suite_report_to_json(const SuiteReport& report);

}  // namespace aci
