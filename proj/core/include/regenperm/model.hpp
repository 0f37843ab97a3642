#pragma once

#include <cstdint>
#include <string>

#include "regenperm/dist.hpp"

namespace regenperm {

enum class Family { blocked, p_shifted, p_biased };
enum class BiasedMethod { ppy, sequential };

const char* to_string(Family f) noexcept;

/// A model family with its driver. JSON form:
///   {"family": "blocked" | "p-shifted" | "p-biased",
///    "driver": {...},                        // see driver_from_json
///    "block_law": "uniform",                 // blocked only, optional
///    "sampler": "ppy" | "sequential",        // p-biased only, optional
///    "draw_budget": 1000000}                 // sequential only, optional
struct ModelSpec {
  Family family = Family::p_shifted;
  Driver driver = DiscreteDist::point_mass(1);
  BiasedMethod biased_method = BiasedMethod::ppy;
  std::uint64_t draw_budget = 1'000'000;

  /// Throws ConfigError naming the offending field under `path`.
  void validate(const std::string& path = "model") const;

  json to_json() const;
  static ModelSpec from_json(const json& j, const std::string& path = "model");
  /// Named shortcuts: "gem1" is the GEM(1)-biased model.
  static ModelSpec preset(const std::string& name);
  /// Preset name or inline JSON text.
  static ModelSpec parse(const std::string& text);

  /// The fixed driver, or nullptr for random (stick-breaking) drivers.
  const DiscreteDist* fixed_driver() const noexcept { return std::get_if<DiscreteDist>(&driver); }
  const StickBreaking* stick_driver() const noexcept { return std::get_if<StickBreaking>(&driver); }

  /// Mean block length when finite and known in closed form, else +inf.
  double mean_block_length() const;
  bool positive_recurrent_known() const;
};

}  // namespace regenperm
