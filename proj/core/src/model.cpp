#include "regenperm/model.hpp"

#include <cmath>
#include <limits>

#include "regenperm/error.hpp"
#include "regenperm/qhat.hpp"

namespace regenperm {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::blocked: return "blocked";
    case Family::p_shifted: return "p-shifted";
    case Family::p_biased: return "p-biased";
  }
  return "?";
}

void ModelSpec::validate(const std::string& path) const {
  const auto* fixed = fixed_driver();
  switch (family) {
    case Family::blocked:
      if (!fixed) throw ConfigError("blocked models need a fixed block-length law", path + ".driver");
      if (fixed->p_inf() > 0.0)
        throw ConfigError("block-length law must be proper (p_inf = 0)", path + ".driver.p_inf");
      break;
    case Family::p_shifted:
      if (!fixed) throw ConfigError("p-shifted models need a fixed distribution", path + ".driver");
      if (!(fixed->mass(1) > 0.0)) throw ConfigError("p-shifted models need p_1 > 0", path + ".driver");
      break;
    case Family::p_biased:
      if (fixed) {
        if (fixed->p_inf() > 0.0)
          throw ConfigError("p-biased models need p_inf = 0", path + ".driver.p_inf");
        for (std::uint64_t i = 1; i <= fixed->support_max(); ++i)
          if (!(fixed->mass(i) > 0.0))
            throw ConfigError("p-biased models need every p_i > 0 on the support",
                              path + ".driver.p");
      }
      break;
  }
  if (draw_budget == 0) throw ConfigError("draw budget must be positive", path + ".draw_budget");
}

json ModelSpec::to_json() const {
  json j{{"family", to_string(family)}, {"driver", driver_to_json(driver)}};
  if (family == Family::blocked) j["block_law"] = "uniform";
  if (family == Family::p_biased) {
    j["sampler"] = biased_method == BiasedMethod::ppy ? "ppy" : "sequential";
    if (biased_method == BiasedMethod::sequential) j["draw_budget"] = draw_budget;
  }
  return j;
}

ModelSpec ModelSpec::from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  if (!j.contains("family")) throw ConfigError("missing required field", path + ".family");
  if (!j.at("family").is_string()) throw ConfigError("expected a string", path + ".family");
  ModelSpec m;
  const auto fam = j.at("family").get<std::string>();
  if (fam == "blocked") m.family = Family::blocked;
  else if (fam == "p-shifted") m.family = Family::p_shifted;
  else if (fam == "p-biased") m.family = Family::p_biased;
  else throw ConfigError("unknown family '" + fam + "'", path + ".family");
  if (!j.contains("driver")) throw ConfigError("missing required field", path + ".driver");
  m.driver = driver_from_json(j.at("driver"), path + ".driver");
  if (j.contains("block_law")) {
    if (m.family != Family::blocked)
      throw ConfigError("only blocked models take a block law", path + ".block_law");
    if (j.at("block_law") != "uniform")
      throw ConfigError("only the uniform block law is supported", path + ".block_law");
  }
  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    if (s == "ppy") m.biased_method = BiasedMethod::ppy;
    else if (s == "sequential") m.biased_method = BiasedMethod::sequential;
    else throw ConfigError("expected \"ppy\" or \"sequential\"", path + ".sampler");
  }
  if (j.contains("draw_budget")) {
    const auto& b = j.at("draw_budget");
    if (!b.is_number_integer() || b.get<std::int64_t>() <= 0)
      throw ConfigError("expected a positive integer", path + ".draw_budget");
    m.draw_budget = b.get<std::uint64_t>();
  }
  m.validate(path);
  return m;
}

ModelSpec ModelSpec::preset(const std::string& name) {
  ModelSpec m;
  if (name == "gem1") {
    m.family = Family::p_biased;
    m.driver = StickBreaking::gem(1.0);
    return m;
  }
  throw ConfigError("unknown model preset '" + name + "'", "model");
}

ModelSpec ModelSpec::parse(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), "model");
    }
    return from_json(j);
  }
  return preset(text);
}

double ModelSpec::mean_block_length() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto* fixed = fixed_driver();
  switch (family) {
    case Family::blocked:
      return fixed->mean();
    case Family::p_shifted: {
      if (fixed->p_inf() > 0.0) return inf;
      // 1/u_inf with u_inf = Π_j F(j).
      long double prod = 1.0L;
      for (std::uint64_t j = 1; j < 100000; ++j) {
        const double t = fixed->tail(j);
        prod *= 1.0L - t;
        if (t < 1e-18) break;
      }
      return static_cast<double>(1.0L / prod);
    }
    case Family::p_biased:
      if (const auto* s = stick_driver(); s && s->kind() == StickBreaking::Kind::beta)
        return 1.0 / gem_uinfty(s->theta());
      return std::numeric_limits<double>::quiet_NaN();
  }
  return inf;
}

bool ModelSpec::positive_recurrent_known() const {
  const auto* fixed = fixed_driver();
  switch (family) {
    case Family::blocked:
      return std::isfinite(fixed->mean());
    case Family::p_shifted:
      // Π F(j) > 0 iff Σ P(X > j) < ∞.
      return fixed->p_inf() == 0.0 && std::isfinite(fixed->mean());
    case Family::p_biased:
      if (fixed) return fixed->kind() == DiscreteDist::Kind::geometric;
      return stick_driver()->kind() != StickBreaking::Kind::custom;
  }
  return false;
}

}  // namespace regenperm
