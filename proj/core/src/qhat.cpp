#include "regenperm/qhat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "regenperm/error.hpp"
#include "regenperm/special.hpp"

namespace regenperm {

namespace {

constexpr std::uint64_t kStateCap = std::uint64_t{1} << 62;

long double lgam(long double x) { return std::lgamma(x); }

double log_binom(std::uint64_t n, std::uint64_t k) {
  return static_cast<double>(lgam(n + 1.0L) - lgam(k + 1.0L) - lgam(n - k + 1.0L));
}

/// Ā(N) = Σ_{n>N} A(n) = Γ(1+θ)Γ(N+1) / (θ Γ(N+1+θ)).
long double a_bar(long double theta, std::uint64_t N) {
  const long double nn = static_cast<long double>(N);
  return std::exp(lgam(1.0L + theta) + lgam(nn + 1.0L) - lgam(nn + 1.0L + theta)) / theta;
}

/// Failures before the m-th success with success probability 1 - w.
std::uint64_t negative_binomial(std::uint64_t m, double w, Rng& rng) {
  if (w <= 0.0) return 0;
  std::gamma_distribution<double> gamma(static_cast<double>(m), w / (1.0 - w));
  const double lambda = gamma(rng);
  if (lambda > 1e15) return static_cast<std::uint64_t>(std::min(lambda, 4.0e18));
  std::poisson_distribution<std::uint64_t> pois(lambda);
  return lambda > 0.0 ? pois(rng) : 0;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return (a > kStateCap || b > kStateCap - a) ? kStateCap : a + b;
}

/// Neville extrapolation of samples (h_i, y_i) to h = 0.
double extrapolate_to_zero(const std::vector<double>& h, std::vector<long double> y) {
  const std::size_t n = h.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      y[i] = (h[i] * y[i - 1] - h[i - level] * y[i]) / (h[i] - h[i - level]);
  return static_cast<double>(y[n - 1]);
}

}  // namespace

QhatKernel QhatKernel::gem(double theta) {
  if (!(theta > 0.0)) throw ConfigError("gem theta must be positive");
  QhatKernel k;
  k.kind_ = Kind::gem;
  k.theta_ = theta;
  return k;
}

QhatKernel QhatKernel::constant(double w) {
  if (!(w > 0.0 && w < 1.0)) throw ConfigError("constant factor must lie in (0,1)");
  QhatKernel k;
  k.kind_ = Kind::constant;
  k.w_ = w;
  return k;
}

QhatKernel QhatKernel::general(const StickBreaking& s, std::size_t draws, Rng& rng) {
  if (draws == 0) throw ConfigError("general kernel needs stored factor draws");
  QhatKernel k;
  k.kind_ = Kind::general;
  k.w_draws_.reserve(draws);
  for (std::size_t i = 0; i < draws; ++i) k.w_draws_.push_back(s.sample_factor(rng));
  return k;
}

QhatKernel QhatKernel::from_sticks(const StickBreaking& s, Rng& rng) {
  switch (s.kind()) {
    case StickBreaking::Kind::beta: return gem(s.theta());
    case StickBreaking::Kind::constant: return constant(s.w());
    case StickBreaking::Kind::custom: return general(s, 100000, rng);
  }
  return gem(1.0);
}

double QhatKernel::operator()(std::uint64_t m, std::uint64_t n) const {
  if (m == 0 || m > n) throw ConfigError("kernel needs 1 <= m <= n");
  switch (kind_) {
    case Kind::gem: {
      if (theta_ == 1.0) return static_cast<double>(m) / (static_cast<double>(n) * (n + 1.0));
      const long double t = theta_;
      // (m)_{n-m} (θ)_m / (1+θ)_n
      return static_cast<double>(std::exp(lgam(n) - lgam(m) + lgam(t + m) - lgam(t) -
                                          lgam(1.0L + t + n) + lgam(1.0L + t)));
    }
    case Kind::constant:
      return std::exp(log_binom(n - 1, m - 1) + static_cast<double>(n - m) * std::log(w_) +
                      static_cast<double>(m) * std::log1p(-w_));
    case Kind::general: {
      const double lb = log_binom(n - 1, m - 1);
      long double s = 0.0L;
      for (double w : w_draws_)
        s += std::exp(lb + static_cast<double>(n - m) * std::log(w) +
                      static_cast<double>(m) * std::log1p(-w));
      return static_cast<double>(s / w_draws_.size());
    }
  }
  return 0.0;
}

double QhatKernel::row_tail(std::uint64_t m, std::uint64_t N) const {
  if (m == 0 || N + 1 < m) throw ConfigError("row_tail needs N >= m - 1 >= 0");
  if (kind_ == Kind::gem) {
    const long double t = theta_;
    return static_cast<double>(
        std::exp(lgam(t + m) + lgam(N + 1.0L) - lgam(static_cast<long double>(m)) -
                 lgam(N + 1.0L + t)));
  }
  long double s = 0.0L;
  for (std::uint64_t n = m; n <= N; ++n) s += (*this)(m, n);
  return static_cast<double>(std::max(0.0L, 1.0L - s));
}

std::uint64_t QhatKernel::sample_next(std::uint64_t m, Rng& rng) const {
  switch (kind_) {
    case Kind::gem: {
      if (theta_ == 1.0) {
        // P(next >= n) = m/n for n >= m.
        const double x = std::floor(static_cast<double>(m) / rng.uniform());
        return x >= static_cast<double>(kStateCap) ? kStateCap : static_cast<std::uint64_t>(x);
      }
      const double w = -std::expm1(std::log(rng.uniform()) / theta_);
      return saturating_add(m, negative_binomial(m, w, rng));
    }
    case Kind::constant:
      return saturating_add(m, negative_binomial(m, w_, rng));
    case Kind::general: {
      const double w = w_draws_[rng.below(w_draws_.size())];
      return saturating_add(m, negative_binomial(m, w, rng));
    }
  }
  return m;
}

std::vector<RunProbability> gem_u_exact(double theta, std::size_t k_max, double tol,
                                        std::uint64_t n_cap) {
  if (!(theta > 0.0)) throw ConfigError("gem theta must be positive");
  std::vector<RunProbability> out(k_max + 1);
  out[0] = {1.0, 1.0, 1.0, 0};
  if (k_max == 0) return out;
  const long double th = theta;
  const std::size_t K = k_max;
  // e[j] = elementary symmetric sum of order j of c(2..n-1), c(n) = θ/(θ+n).
  std::vector<long double> e(K, 0.0L), inside(K + 1, 0.0L);
  e[0] = 1.0L;
  long double a = 1.0L / ((1.0L + th) * (2.0L + th));  // A(2)
  std::uint64_t checkpoint = std::min<std::uint64_t>(std::uint64_t{1} << 16, n_cap);
  for (std::uint64_t n = 2;; ++n) {
    for (std::size_t k = 1; k <= K; ++k) inside[k] += a * e[k - 1];
    const long double c = th / (th + static_cast<long double>(n));
    for (std::size_t j = K - 1; j >= 1; --j) e[j] += c * e[j - 1];
    if (n == checkpoint) {
      const long double abar = a_bar(th, n);
      const long double stay = th / (th + static_cast<long double>(n) + 1.0L);
      double worst = 0.0;
      for (std::size_t k = 1; k <= K; ++k) {
        long double lo = th * inside[k], hi = lo;
        for (std::size_t i = 1; i <= k; ++i) {
          const long double esc = th * e[i - 1] * abar;
          hi += esc;
          lo += esc * std::pow(1.0L - stay, static_cast<long double>(k - i));
        }
        out[k] = {static_cast<double>((lo + hi) / 2), static_cast<double>(lo),
                  static_cast<double>(hi), n};
        worst = std::max(worst, static_cast<double>((hi - lo) / 2));
      }
      if (worst <= tol || n >= n_cap) break;
      checkpoint = checkpoint < (std::uint64_t{1} << 22) ? checkpoint * 2
                                                          : checkpoint + (std::uint64_t{1} << 22);
      checkpoint = std::min(checkpoint, n_cap);
    }
    a *= static_cast<long double>(n) / (static_cast<long double>(n) + 1.0L + th);
  }
  return out;
}

std::vector<Estimate> u_k_via_increasing_runs(const QhatKernel& kernel, std::size_t k_max,
                                              std::uint64_t n_chains, Rng& rng) {
  if (n_chains == 0) throw ConfigError("need at least one chain");
  std::vector<std::uint64_t> ok(k_max + 1, 0);
  for (std::uint64_t c = 0; c < n_chains; ++c) {
    std::uint64_t m = 1;
    std::size_t k = 0;
    ++ok[0];
    for (k = 1; k <= k_max; ++k) {
      const std::uint64_t nx = kernel.sample_next(m, rng);
      if (nx == m) break;
      m = nx;
      ++ok[k];
    }
  }
  std::vector<Estimate> out;
  const double nn = static_cast<double>(n_chains);
  for (auto v : ok) {
    const double p = static_cast<double>(v) / nn;
    out.push_back({p, std::sqrt(p * (1.0 - p) / nn)});
  }
  return out;
}

std::vector<double> gem1_u_recursion(std::size_t k_max) {
  std::vector<double> u(k_max + 1);
  u[0] = 1.0;
  if (k_max >= 1) u[1] = 0.5;
  for (std::size_t k = 2; k <= k_max; ++k)
    u[k] = (2.0 * zeta(static_cast<int>(k)) - 3.0 * u[k - 1] - u[k - 2]) / 2.0;
  return u;
}

double gem1_u_series(std::size_t k) {
  // Telescoped tails for k = 0, 1; otherwise a direct sum whose remainder
  // Σ_{j>J} 2/j^{k+2} is below 1e-15 at J = 100000.
  if (k == 0) return 1.0;
  if (k == 1) return 0.5;
  constexpr std::uint64_t J = 100000;
  long double s = 0.0L;
  const long double kk = static_cast<long double>(k);
  for (std::uint64_t j = J; j >= 1; --j) {
    const long double jj = static_cast<long double>(j);
    s += 2.0L / (std::pow(jj, kk) * (jj + 1.0L) * (jj + 2.0L));
  }
  // Leading-order remainder ∫_{J+1/2}^∞ 2 x^{-k-2} dx.
  s += 2.0L / ((kk + 1.0L) * std::pow(J + 0.5L, kk + 1.0L));
  return static_cast<double>(s);
}

double gem1_U_closed_form(double z) {
  if (!(z > -1.0 && z < 1.0)) throw ConfigError("closed form needs -1 < z < 1");
  const double bracket = 1.0 + (2.0 - kEulerGamma - digamma(1.0 - z)) * z;
  return 2.0 / ((1.0 + z) * (2.0 + z)) * bracket;
}

FirstComponentMoments gem1_first_component_moments() {
  // g(h) = 1/U(1-h) = c1 h - c2 h^2 + c3 h^3 - ...
  std::vector<double> h;
  for (int i = 0; i < 12; ++i) h.push_back(0.04 * std::pow(0.75, i));
  std::vector<long double> phi;
  for (double x : h) phi.push_back(1.0L / gem1_U_closed_form(1.0 - x) / x);
  const double c1 = extrapolate_to_zero(h, phi);
  std::vector<long double> psi;
  for (std::size_t i = 0; i < h.size(); ++i) psi.push_back((phi[i] - c1) / h[i]);
  const double a2 = extrapolate_to_zero(h, psi);
  std::vector<long double> chi;
  for (std::size_t i = 0; i < h.size(); ++i) chi.push_back((psi[i] - a2) / h[i]);
  const double a3 = extrapolate_to_zero(h, chi);
  FirstComponentMoments m;
  m.mean = c1;
  m.c2 = -a2;
  m.c3 = a3;
  m.variance = 2.0 * m.c2 + c1 - c1 * c1;
  return m;
}

double gem_uinfty(double theta) {
  if (!(theta > 0.0)) throw ConfigError("gem theta must be positive");
  return std::exp(log_gamma(theta + 2.0) + log_gamma(theta + 1.0) - log_gamma(2.0 * theta + 2.0));
}

double gem_uinfty_product(double theta, std::size_t terms) {
  if (!(theta > 0.0)) throw ConfigError("gem theta must be positive");
  const long double t2 = static_cast<long double>(theta) * theta;
  long double logp = -std::log1p(static_cast<long double>(theta));
  const std::size_t J = std::max<std::size_t>(terms, 2);
  for (std::size_t j = J; j >= 2; --j) {
    const long double d = static_cast<long double>(j) + theta;
    logp += std::log1p(-t2 / (d * d));
  }
  // Remainder Σ_{j>J} log(1 - θ²/(j+θ)²) ≈ -θ² / (J+θ+1/2) - θ⁴ / (3 (J+θ+1/2)³).
  const long double x = static_cast<long double>(J) + theta + 0.5L;
  logp -= t2 / x + t2 * t2 / (3.0L * x * x * x);
  return static_cast<double>(std::exp(logp));
}

double gem_entrance_law(double theta, std::uint64_t m) {
  if (!(theta > 0.0)) throw ConfigError("gem theta must be positive");
  if (m == 0) return 0.0;
  // E W^m = Γ(m+1)Γ(θ+1)/Γ(m+1+θ), E[-log(1-W)] = 1/θ.
  const long double t = theta;
  return static_cast<double>(t * std::exp(lgam(m + 1.0L) + lgam(t + 1.0L) - lgam(m + 1.0L + t)) /
                             static_cast<long double>(m));
}

std::uint64_t sample_gem1_entrance(Rng& rng) {
  const double x = std::floor(1.0 / rng.uniform());
  return x >= static_cast<double>(kStateCap) ? kStateCap : static_cast<std::uint64_t>(x);
}

std::vector<std::uint64_t> qhat_sample_path(const QhatKernel& kernel, std::uint64_t m0,
                                            std::size_t horizon, Rng& rng) {
  if (m0 == 0) throw ConfigError("chain start must be >= 1");
  std::vector<std::uint64_t> path;
  path.reserve(horizon + 1);
  path.push_back(m0);
  for (std::size_t k = 0; k < horizon; ++k) path.push_back(kernel.sample_next(path.back(), rng));
  return path;
}

OccupationReport occupation_times(const QhatKernel& kernel, StartLaw start, std::uint64_t m0,
                                  std::size_t j_max, std::size_t horizon, std::uint64_t n_chains,
                                  Rng& rng, std::size_t g_cap) {
  if (j_max == 0) throw ConfigError("occupation times need j_max >= 1");
  if (start == StartLaw::fixed && m0 == 0) throw ConfigError("chain start must be >= 1");
  OccupationReport r;
  r.j_max = j_max;
  r.g_cap = g_cap;
  r.histogram.assign(j_max + 1, std::vector<std::uint64_t>(g_cap + 1, 0));
  r.joint.assign(j_max + 1, std::vector<std::vector<std::uint64_t>>(
                                g_cap + 1, std::vector<std::uint64_t>(g_cap + 1, 0)));
  std::vector<std::size_t> g(j_max + 1);
  for (std::uint64_t c = 0; c < n_chains; ++c) {
    std::fill(g.begin(), g.end(), 0);
    std::uint64_t m = start == StartLaw::fixed ? m0 : sample_gem1_entrance(rng);
    std::size_t steps = 0;
    while (m <= j_max && steps <= horizon) {
      ++g[m];
      m = kernel.sample_next(m, rng);
      ++steps;
    }
    if (m <= j_max) {
      ++r.truncated;
      continue;
    }
    ++r.chains;
    for (std::size_t j = 1; j <= j_max; ++j) {
      ++r.histogram[j][std::min(g[j], g_cap)];
      if (j < j_max) ++r.joint[j][std::min(g[j], g_cap)][std::min(g[j + 1], g_cap)];
    }
  }
  return r;
}

Estimate increasing_forever(const QhatKernel& kernel, StartLaw start, std::uint64_t m0,
                            std::uint64_t cutoff, std::uint64_t n_chains, Rng& rng) {
  if (n_chains == 0) throw ConfigError("need at least one chain");
  std::uint64_t ok = 0;
  for (std::uint64_t c = 0; c < n_chains; ++c) {
    std::uint64_t m = start == StartLaw::fixed ? m0 : sample_gem1_entrance(rng);
    bool inc = true;
    while (m <= cutoff) {
      const std::uint64_t nx = kernel.sample_next(m, rng);
      if (nx == m) {
        inc = false;
        break;
      }
      m = nx;
    }
    ok += inc;
  }
  const double nn = static_cast<double>(n_chains);
  const double p = static_cast<double>(ok) / nn;
  return {p, std::sqrt(p * (1.0 - p) / nn)};
}

}  // namespace regenperm
