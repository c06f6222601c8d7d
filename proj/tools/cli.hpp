#pragma once

// Command-line front end. Exit codes:
//   0  success (for audit: every hard assertion passed)
//   1  audit found a failing hard assertion
//   2  invalid input
//   3  a computation exceeded its budget

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "padicsum/corpus.hpp"

namespace padicsum::cli {

struct AuditConfig {
  CorpusSpec corpus;
  /// Largest p^m (and p^alpha for congruence counts) a member may need.
  std::uint64_t budget_pm = std::uint64_t{1} << 16;
  /// Cap on (p^m - 1) p^m pairs in the witness search before sampling.
  std::uint64_t pair_budget = std::uint64_t{1} << 26;
  /// Candidate constants: bound name -> degree (0 for any) -> C.
  std::map<std::string, std::map<int, double>> constants;
  std::optional<std::string> out;
  unsigned threads = 0;

  nlohmann::json to_json() const;
};

/// Reads {"primes", "degrees": [lo, hi], "m": [lo, hi], "size", "seed", "families",
/// "require_p_above_degree", "budget_pm"}; absent keys keep their values in `base`.
AuditConfig config_from_json(const nlohmann::json& j, AuditConfig base = {});
/// {"thm11": 1.5, "lv": {"3": 2, "4": 3}, ...}.
std::map<std::string, std::map<int, double>> constants_from_json(const nlohmann::json& j);

struct AuditResult {
  std::string csv;
  nlohmann::json summary;
  bool passed = true;
};

AuditResult run_audit(const AuditConfig& config);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padicsum::cli
