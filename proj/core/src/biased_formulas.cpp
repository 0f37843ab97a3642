#include "regenperm/biased_formulas.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <string>

#include "regenperm/error.hpp"

namespace regenperm {

namespace {

struct Masses {
  std::vector<double> p;  // P_1..P_n
  double t = 0.0;         // T_n
  std::vector<double> w;  // W_1..W_n
  std::vector<double> ti; // T_1..T_n
};

bool is_random(const Driver& d) {
  if (const auto* s = std::get_if<StickBreaking>(&d)) return s->kind() != StickBreaking::Kind::constant;
  return false;
}

Masses draw_masses(const Driver& d, std::size_t n, Rng& rng) {
  Masses m;
  if (const auto* dist = std::get_if<DiscreteDist>(&d)) {
    double t_prev = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      m.p.push_back(dist->mass(i));
      const double t = dist->tail(i);
      m.ti.push_back(t);
      m.w.push_back(t_prev > 0.0 ? dist->mass(i) / t_prev : 1.0);
      t_prev = t;
    }
    m.t = dist->tail(n);
    return m;
  }
  const auto& s = std::get<StickBreaking>(d);
  double t_prev = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = s.sample_factor(rng);
    double p = 0.0, t = 0.0;
    stick_split(t_prev, w, p, t);
    m.p.push_back(p);
    m.w.push_back(w);
    m.ti.push_back(t);
    t_prev = t;
  }
  m.t = t_prev;
  return m;
}

void check_n(std::size_t n) {
  if (n == 0) throw ConfigError("n must be >= 1");
  if (n > kSubsetEnumerationCap)
    throw ConfigError("subset enumeration is capped at n = " + std::to_string(kSubsetEnumerationCap));
}

/// Σ over subsets grouped by size: out[j] = Σ_{|S|=j} T/(T + P_S).
std::vector<long double> subset_sums(const Masses& m, std::size_t n) {
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> ps(count, 0.0);
  std::vector<long double> out(n + 1, 0.0L);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    ps[mask] = ps[mask & (mask - 1)] + m.p[low];
    const std::size_t j = static_cast<std::size_t>(std::popcount(mask));
    out[j] += m.t / (static_cast<long double>(m.t) + ps[mask]);
  }
  out[0] = 1.0L;
  return out;
}

template <class PerDraw>
Estimate average(const Driver& d, std::size_t n, std::uint64_t mc_draws, Rng& rng, PerDraw&& f) {
  if (!is_random(d)) return {static_cast<double>(f(draw_masses(d, n, rng))), 0.0};
  if (mc_draws < 2) throw ConfigError("Monte Carlo needs at least 2 draws");
  long double s = 0.0L, s2 = 0.0L;
  for (std::uint64_t k = 0; k < mc_draws; ++k) {
    const long double v = f(draw_masses(d, n, rng));
    s += v;
    s2 += v * v;
  }
  const long double nn = static_cast<long double>(mc_draws);
  const long double mean = s / nn;
  const long double var = std::max(0.0L, (s2 / nn - mean * mean) * nn / (nn - 1.0L));
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / nn))};
}

double simpson_adaptive(const std::function<double(double)>& g, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    err += std::abs(diff) / 15.0;
    return left + right + diff / 15.0;
  }
  return simpson_adaptive(g, a, m, fa, flm, fm, left, tol / 2, depth - 1, err) +
         simpson_adaptive(g, m, b, fm, frm, fb, right, tol / 2, depth - 1, err);
}

}  // namespace

Estimate sigma_nj(const Driver& d, std::size_t n, std::size_t j, std::uint64_t mc_draws, Rng& rng) {
  check_n(n);
  if (j == 0 || j > n) throw ConfigError("sigma_nj needs 1 <= j <= n");
  return average(d, n, mc_draws, rng, [&](const Masses& m) { return subset_sums(m, n)[j]; });
}

Estimate u_n_inclusion_exclusion(const Driver& d, std::size_t n, std::uint64_t mc_draws, Rng& rng) {
  check_n(n);
  return average(d, n, mc_draws, rng, [&](const Masses& m) {
    const auto s = subset_sums(m, n);
    long double u = 1.0L;
    for (std::size_t j = 1; j <= n; ++j) u += (j % 2 ? -1.0L : 1.0L) * s[j];
    return u;
  });
}

IntegralEstimate pta_integral(const Driver& d, std::size_t n, double quad_tol,
                              std::uint64_t mc_draws, Rng& rng) {
  if (n == 0) throw ConfigError("n must be >= 1");
  if (!(quad_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  double err_total = 0.0;
  std::uint64_t evaluations = 0;
  auto one = [&](const Masses& m) -> long double {
    std::vector<double> rate(n);
    for (std::size_t i = 0; i < n; ++i) rate[i] = m.w[i] / m.ti[i];
    auto g = [&](double t) {
      if (t <= 0.0) return 0.0;
      if (t >= 1.0) return 1.0;
      const double x = -std::log1p(-t);
      double prod = 1.0;
      for (double r : rate) prod *= -std::expm1(-x * r);
      return prod;
    };
    const double fa = g(0.0), fm = g(0.5), fb = g(1.0);
    double err = 0.0;
    const double whole = (fa + 4.0 * fm + fb) / 6.0;
    const double v = simpson_adaptive(g, 0.0, 1.0, fa, fm, fb, whole, quad_tol, 40, err);
    err_total += err;
    ++evaluations;
    return v;
  };
  const Estimate e = average(d, n, mc_draws, rng, one);
  return {e.value, evaluations ? err_total / static_cast<double>(evaluations) : 0.0, e.se};
}

}  // namespace regenperm
