#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "regenperm/rng.hpp"

namespace regenperm {

using json = nlohmann::json;

/// Outcome of a draw from a distribution on {1, 2, ...} ∪ {∞}.
class Draw {
 public:
  static Draw finite(std::uint64_t v) { return Draw(v); }
  static Draw infinity() { return Draw(0); }

  bool is_infinite() const noexcept { return value_ == 0; }
  /// Throws std::logic_error on the infinity sentinel.
  std::uint64_t value() const;

  friend bool operator==(const Draw&, const Draw&) = default;

 private:
  explicit Draw(std::uint64_t v) : value_(v) {}
  std::uint64_t value_;
};

/// Probability distribution on the positive integers, possibly defective
/// (mass `p_inf()` at infinity).
class DiscreteDist {
 public:
  enum class Kind { fixed, geometric };

  /// p_i = q^{i-1}(1-q), 0 < q < 1.
  static DiscreteDist geometric(double q);
  /// Finite mass vector p_1..p_K plus defect; must sum to 1 within 1e-12.
  static DiscreteDist fixed(std::vector<double> p, double p_inf = 0.0);
  static DiscreteDist point_mass(std::uint64_t at);

  Kind kind() const noexcept { return kind_; }
  /// Geometric parameter; only meaningful for Kind::geometric.
  double q() const noexcept { return q_; }
  double p_inf() const noexcept { return p_inf_; }

  double mass(std::uint64_t i) const;
  double cdf(std::uint64_t j) const;
  /// P(X > j), counting the defect.
  double tail(std::uint64_t j) const;
  /// Largest i with p_i > 0; 0 when unbounded.
  std::uint64_t support_max() const noexcept;
  /// Σ i p_i, or +inf when p_inf > 0.
  double mean() const;
  /// Σ_i g(i) p_i over the finite part; geometric sums until the tail is
  /// below 1e-18.
  double expect(const std::function<double(std::uint64_t)>& g) const;

  std::span<const double> masses() const noexcept { return p_; }

  Draw sample(Rng& rng) const;

  json to_json() const;
  static DiscreteDist from_json(const json& j, const std::string& path = "driver");

 private:
  DiscreteDist() = default;
  Kind kind_ = Kind::fixed;
  double q_ = 0.0;
  double p_inf_ = 0.0;
  std::vector<double> p_;     // p_[i-1] = p_i
  std::vector<double> cum_;   // cum_[i-1] = F(i)
  std::vector<double> tail_;  // tail_[j] = P(X > j), j = 0..K
};

/// Law of the i.i.d. factors W_i of a residual allocation model.
class StickBreaking {
 public:
  enum class Kind { constant, beta, custom };
  using FactorSampler = std::function<double(Rng&)>;

  /// W_i ≡ w; gives the geometric(q) masses with q = 1 - w.
  static StickBreaking constant(double w);
  /// W_i ~ beta(1, θ): the GEM(θ) model.
  static StickBreaking gem(double theta);
  /// User supplied sampler; every value must lie in (0, 1).
  static StickBreaking custom(FactorSampler sampler, std::string name);

  Kind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }
  double w() const noexcept { return w_; }
  const std::string& name() const noexcept { return name_; }

  double sample_factor(Rng& rng) const;

  json to_json() const;

 private:
  StickBreaking() = default;
  Kind kind_ = Kind::constant;
  double theta_ = 0.0;
  double w_ = 0.0;
  std::string name_;
  FactorSampler sampler_;
};

struct StickSample {
  std::vector<double> w;
  std::vector<double> p;  // P_i = T_{i-1} W_i
  std::vector<double> t;  // T_i, so T_{i-1} = P_i + T_i exactly
};

/// One step of the residual allocation: splits `t_prev` into (P, T) so that
/// t_prev = P + T holds exactly in floating point.
void stick_split(double t_prev, double w, double& p, double& t) noexcept;

StickSample stick_sample(const StickBreaking& s, std::size_t n, Rng& rng);

/// A model driver: a fixed distribution or a random one given by sticks.
using Driver = std::variant<DiscreteDist, StickBreaking>;

json driver_to_json(const Driver& d);
/// Accepts {"kind": "geometric" | "fixed" | "gem", ...}.
Driver driver_from_json(const json& j, const std::string& path = "driver");

}  // namespace regenperm
