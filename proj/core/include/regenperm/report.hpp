#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regenperm/biased_formulas.hpp"
#include "regenperm/dist.hpp"

namespace regenperm {

struct StatRecord {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  std::optional<double> exact;
  /// (estimate - exact) / se; present iff `exact` is. A zero s.e. gives
  /// 0 on an exact match and ±inf otherwise.
  std::optional<double> z;
};

struct EstimateReport {
  std::string statistic;
  json model;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  unsigned workers = 1;
  std::optional<double> wall_seconds;  // only set when timing is requested
  std::vector<std::string> notes;
  /// Set when some realizations were dropped (e.g. draw budget exhausted).
  bool partial = false;
  std::uint64_t dropped = 0;
  std::vector<StatRecord> records;

  StatRecord& add(std::string name, Estimate e, std::optional<double> exact = std::nullopt);
  const StatRecord* find(const std::string& name) const;
  /// Largest |z| over records with an exact column (0 if none).
  double max_abs_z() const;
  std::vector<const StatRecord*> flagged(double threshold = 4.0) const;

  json to_json() const;
  static EstimateReport from_json(const json& j);
  /// One row per record: name,estimate,se,exact,z.
  std::string to_csv() const;
  std::string to_text() const;
};

}  // namespace regenperm
