#include "regenperm/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "regenperm/error.hpp"

namespace regenperm {

namespace {

constexpr double kSumTol = 1e-12;

double require_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError("missing required field", path + "." + key);
  if (!j.at(key).is_number()) throw ConfigError("expected a number", path + "." + key);
  return j.at(key).get<double>();
}

}  // namespace

std::uint64_t Draw::value() const {
  if (is_infinite()) throw std::logic_error("Draw::value on infinity");
  return value_;
}

DiscreteDist DiscreteDist::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("geometric q must lie in (0,1)");
  DiscreteDist d;
  d.kind_ = Kind::geometric;
  d.q_ = q;
  return d;
}

DiscreteDist DiscreteDist::fixed(std::vector<double> p, double p_inf) {
  if (!(p_inf >= 0.0 && p_inf <= 1.0)) throw ConfigError("p_inf must lie in [0,1]");
  double total = p_inf;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("masses must lie in [0,1]");
    total += x;
  }
  if (std::abs(total - 1.0) > kSumTol)
    throw ConfigError("masses plus p_inf must sum to 1 (got " + std::to_string(total) + ")");
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  DiscreteDist d;
  d.kind_ = Kind::fixed;
  d.p_inf_ = p_inf;
  d.p_ = std::move(p);
  d.cum_.resize(d.p_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.p_.size(); ++i) d.cum_[i] = (acc += d.p_[i]);
  // Suffix sums built from the back so small tails keep relative accuracy.
  d.tail_.assign(d.p_.size() + 1, 0.0);
  d.tail_[d.p_.size()] = p_inf;
  for (std::size_t j = d.p_.size(); j-- > 0;) d.tail_[j] = d.tail_[j + 1] + d.p_[j];
  return d;
}

DiscreteDist DiscreteDist::point_mass(std::uint64_t at) {
  if (at == 0) throw ConfigError("point mass must sit on a positive integer");
  std::vector<double> p(at, 0.0);
  p.back() = 1.0;
  return fixed(std::move(p));
}

double DiscreteDist::mass(std::uint64_t i) const {
  if (i == 0) return 0.0;
  if (kind_ == Kind::geometric) return std::pow(q_, static_cast<double>(i - 1)) * (1.0 - q_);
  return i <= p_.size() ? p_[i - 1] : 0.0;
}

double DiscreteDist::cdf(std::uint64_t j) const {
  if (j == 0) return 0.0;
  if (kind_ == Kind::geometric) return -std::expm1(static_cast<double>(j) * std::log(q_));
  return j <= cum_.size() ? cum_[j - 1] : (cum_.empty() ? 0.0 : cum_.back());
}

double DiscreteDist::tail(std::uint64_t j) const {
  if (kind_ == Kind::geometric) return std::pow(q_, static_cast<double>(j));
  return j < tail_.size() ? tail_[j] : p_inf_;
}

std::uint64_t DiscreteDist::support_max() const noexcept {
  return kind_ == Kind::geometric ? 0 : p_.size();
}

double DiscreteDist::mean() const {
  if (p_inf_ > 0.0) return std::numeric_limits<double>::infinity();
  if (kind_ == Kind::geometric) return 1.0 / (1.0 - q_);
  double m = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) m += static_cast<double>(i + 1) * p_[i];
  return m;
}

double DiscreteDist::expect(const std::function<double(std::uint64_t)>& g) const {
  double s = 0.0;
  if (kind_ == Kind::geometric) {
    for (std::uint64_t i = 1; tail(i - 1) > 1e-18; ++i) s += g(i) * mass(i);
    return s;
  }
  for (std::size_t i = 0; i < p_.size(); ++i)
    if (p_[i] > 0.0) s += g(i + 1) * p_[i];
  return s;
}

Draw DiscreteDist::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (kind_ == Kind::geometric) {
    const double x = std::floor(std::log(u) / std::log(q_));
    if (x >= 9.0e18) return Draw::finite(static_cast<std::uint64_t>(9.0e18));
    return Draw::finite(1 + static_cast<std::uint64_t>(x));
  }
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) {
    // u lies above the finite mass: infinity if defective, else rounding.
    if (p_inf_ > 0.0) return Draw::infinity();
    return Draw::finite(support_max());
  }
  std::size_t idx = static_cast<std::size_t>(it - cum_.begin());
  while (p_[idx] == 0.0) ++idx;  // never land on a zero-mass atom
  return Draw::finite(idx + 1);
}

json DiscreteDist::to_json() const {
  if (kind_ == Kind::geometric) return json{{"kind", "geometric"}, {"q", q_}};
  return json{{"kind", "fixed"}, {"p", p_}, {"p_inf", p_inf_}};
}

DiscreteDist DiscreteDist::from_json(const json& j, const std::string& path) {
  const Driver d = driver_from_json(j, path);
  if (!std::holds_alternative<DiscreteDist>(d))
    throw ConfigError("expected a fixed or geometric distribution", path + ".kind");
  return std::get<DiscreteDist>(d);
}

StickBreaking StickBreaking::constant(double w) {
  if (!(w > 0.0 && w < 1.0)) throw ConfigError("constant stick factor must lie in (0,1)");
  StickBreaking s;
  s.kind_ = Kind::constant;
  s.w_ = w;
  s.name_ = "constant";
  return s;
}

StickBreaking StickBreaking::gem(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("gem theta must be positive");
  StickBreaking s;
  s.kind_ = Kind::beta;
  s.theta_ = theta;
  s.name_ = "gem";
  return s;
}

StickBreaking StickBreaking::custom(FactorSampler sampler, std::string name) {
  if (!sampler) throw ConfigError("custom stick sampler is empty");
  StickBreaking s;
  s.kind_ = Kind::custom;
  s.sampler_ = std::move(sampler);
  s.name_ = std::move(name);
  return s;
}

double StickBreaking::sample_factor(Rng& rng) const {
  switch (kind_) {
    case Kind::constant:
      return w_;
    case Kind::beta: {
      // beta(1,θ) by inversion: W = 1 - U^{1/θ}, kept strictly inside (0,1).
      double w = -std::expm1(std::log(rng.uniform()) / theta_);
      if (w <= 0.0) w = std::numeric_limits<double>::denorm_min();
      if (w >= 1.0) w = std::nextafter(1.0, 0.0);
      return w;
    }
    case Kind::custom: {
      const double w = sampler_(rng);
      if (!(w > 0.0 && w < 1.0)) throw std::domain_error("custom stick factor outside (0,1)");
      return w;
    }
  }
  return w_;
}

json StickBreaking::to_json() const {
  switch (kind_) {
    case Kind::constant:
      return json{{"kind", "geometric"}, {"q", 1.0 - w_}};
    case Kind::beta:
      return json{{"kind", "gem"}, {"theta", theta_}};
    case Kind::custom:
      return json{{"kind", "custom"}, {"name", name_}};
  }
  return {};
}

void stick_split(double t_prev, double w, double& p, double& t) noexcept {
  // The larger piece is rounded; the smaller is the exact remainder
  // (Sterbenz), so t_prev == p + t without error.
  if (w <= 0.5) {
    t = t_prev * (1.0 - w);
    p = t_prev - t;
  } else {
    p = t_prev * w;
    t = t_prev - p;
  }
}

StickSample stick_sample(const StickBreaking& s, std::size_t n, Rng& rng) {
  if (n == 0) throw ConfigError("stick_sample needs n >= 1");
  StickSample out;
  out.w.reserve(n);
  out.p.reserve(n);
  out.t.reserve(n);
  double t_prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = s.sample_factor(rng);
    double p = 0.0, t = 0.0;
    stick_split(t_prev, w, p, t);
    out.w.push_back(w);
    out.p.push_back(p);
    out.t.push_back(t);
    t_prev = t;
  }
  return out;
}

json driver_to_json(const Driver& d) {
  return std::visit([](const auto& x) { return x.to_json(); }, d);
}

Driver driver_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  if (!j.contains("kind")) throw ConfigError("missing required field", path + ".kind");
  if (!j.at("kind").is_string()) throw ConfigError("expected a string", path + ".kind");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "geometric") return DiscreteDist::geometric(require_number(j, "q", path));
    if (kind == "gem") return StickBreaking::gem(require_number(j, "theta", path));
    if (kind == "fixed") {
      if (!j.contains("p")) throw ConfigError("missing required field", path + ".p");
      if (!j.at("p").is_array()) throw ConfigError("expected an array", path + ".p");
      std::vector<double> p;
      for (const auto& x : j.at("p")) {
        if (!x.is_number()) throw ConfigError("expected numbers", path + ".p");
        p.push_back(x.get<double>());
      }
      const double p_inf = j.contains("p_inf") ? require_number(j, "p_inf", path) : 0.0;
      return DiscreteDist::fixed(std::move(p), p_inf);
    }
  } catch (const ConfigError& e) {
    if (!e.path().empty()) throw;
    throw ConfigError(e.what(), path);
  }
  throw ConfigError("unknown kind '" + kind + "'", path + ".kind");
}

}  // namespace regenperm
