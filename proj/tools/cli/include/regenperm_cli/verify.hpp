#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace regenperm::cli {

enum class Tier { quick, full };

Tier parse_tier(const std::string& s);
const char* to_string(Tier t) noexcept;

struct VerifyOptions {
  Tier tier = Tier::quick;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = true;
  /// One line per check; deterministic for a given seed.
  std::vector<std::string> lines;
  double seconds = 0.0;  // wall time, excluded from digests
};

constexpr int kCriteria = 10;

/// Runs criterion `id` (1..kCriteria).
CriterionResult run_criterion(int id, const VerifyOptions& opt);

/// Runs every criterion in order, calling `on_done` after each.
std::vector<CriterionResult> run_verify(const VerifyOptions& opt,
                                        const std::function<void(const CriterionResult&)>& on_done = {});

/// FNV-1a over titles, verdicts and check lines (not timings).
std::uint64_t digest(const std::vector<CriterionResult>& results);

}  // namespace regenperm::cli
