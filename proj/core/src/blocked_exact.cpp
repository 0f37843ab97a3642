#include "regenperm/blocked_exact.hpp"

#include <cmath>

#include "regenperm/combinatorics.hpp"
#include "regenperm/error.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/renewal.hpp"

namespace regenperm {

namespace {

constexpr double kTailCut = 1e-18;
constexpr std::size_t kMaxBlock = 20000;

long double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
         std::lgamma(static_cast<long double>(n - k) + 1);
}

}  // namespace

double BlockedGeometricExact::nu(std::size_t j) const {
  return std::pow(q, static_cast<double>(j) - 1.0) / static_cast<double>(j);
}

double BlockedGeometricExact::mu() const { return 1.0 / (1.0 - q); }

double BlockedGeometricExact::first_image(std::uint64_t k) const {
  if (k == 0) return 0.0;
  // Tail sum form of ((1-q)/q)(λ_1(q) - Σ_{h<k} q^h/h); avoids cancellation.
  long double s = 0.0L;
  long double pw = std::pow(static_cast<long double>(q), static_cast<long double>(k));
  for (std::uint64_t h = k; h - k < 1000000; ++h) {
    const long double term = pw / static_cast<long double>(h);
    s += term;
    if (term <= 1e-21L * s) break;
    pw *= q;
  }
  return static_cast<double>((1.0L - q) / q * s);
}

double BlockedGeometricExact::first_two_fixed() const { return 1.0 - q; }

BlockedGeometricExact blocked_exact(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("blocked_exact: q must lie in (0,1)");
  return BlockedGeometricExact{q};
}

UniformBlockExact::UniformBlockExact(const DiscreteDist& p) {
  if (p.p_inf() > 0.0) throw UnsupportedModel("block-length law must be proper");
  std::size_t ymax = p.support_max();
  if (ymax == 0) {
    ymax = 1;
    while (p.tail(ymax) > kTailCut && ymax < kMaxBlock) ++ymax;
  }
  p_.assign(ymax + 1, 0.0);
  for (std::size_t y = 1; y <= ymax; ++y) p_[y] = p.mass(y);
  tail_ge_.assign(ymax + 2, 0.0);
  for (std::size_t y = ymax; y >= 1; --y) tail_ge_[y] = tail_ge_[y + 1] + p_[y];
  tail_ge_[0] = tail_ge_[1];

  long double m = 0.0L, snu = 0.0L;
  for (std::size_t y = 1; y <= ymax; ++y) {
    m += static_cast<long double>(y) * p_[y];
    snu += tail_ge_[y] / static_cast<long double>(y);
  }
  mu_ = static_cast<double>(m);
  sum_nu_ = static_cast<double>(snu);

  // Expected number of length-j components in a uniform block of length L:
  // Σ_a a! (j,1)† (L-a-j)! / L!.
  const auto frac = indecomposable_fraction(ymax);
  comp_.assign(ymax + 1, 0.0);
  long double total = 0.0L;
  for (std::size_t j = 1; j <= ymax; ++j) {
    long double cj = 0.0L;
    for (std::size_t len = j; len <= ymax; ++len) {
      if (p_[len] == 0.0) continue;
      long double per_block = 0.0L;
      for (std::size_t a = 0; a + j <= len; ++a) {
        // a! j! (len-a-j)! / len! = 1 / (C(len, a) C(len-a, j))
        per_block += std::exp(-log_choose(len, a) - log_choose(len - a, j));
      }
      cj += p_[len] * frac[j] * per_block;
    }
    comp_[j] = static_cast<double>(cj);
    total += cj;
  }
  comp_total_ = static_cast<double>(total);
}

double UniformBlockExact::nu(std::size_t j) const {
  if (j == 0 || j >= tail_ge_.size()) return 0.0;
  return tail_ge_[j] / static_cast<double>(j);
}

double UniformBlockExact::cycle_frequency(std::size_t j) const { return nu(j) / mu_; }

double UniformBlockExact::cycle_share(std::size_t j) const { return nu(j) / sum_nu_; }

double UniformBlockExact::component_share(std::size_t j) const {
  if (j == 0 || j >= comp_.size()) return 0.0;
  return comp_[j] / comp_total_;
}

double UniformBlockExact::component_rate() const { return comp_total_ / mu_; }

double UniformBlockExact::displacement(std::int64_t d) const {
  const std::size_t a = static_cast<std::size_t>(d < 0 ? -d : d);
  long double s = 0.0L;
  for (std::size_t y = a + 1; y < p_.size(); ++y)
    s += p_[y] * static_cast<long double>(y - a) / static_cast<long double>(y);
  return static_cast<double>(s / mu_);
}

double UniformBlockExact::mean_abs_displacement() const {
  long double s = 0.0L;
  for (std::size_t y = 1; y < p_.size(); ++y) {
    const long double yy = static_cast<long double>(y);
    s += p_[y] * (yy * yy - 1.0L) / 6.0L;
  }
  return static_cast<double>(2.0L * s / mu_);
}

double UniformBlockExact::positive_displacement() const { return 0.5 * (1.0 - 1.0 / mu_); }

double UniformBlockExact::first_image(std::uint64_t k) const {
  if (k == 0) return 0.0;
  long double s = 0.0L;
  for (std::size_t y = k; y < p_.size(); ++y) s += p_[y] / static_cast<long double>(y);
  return static_cast<double>(s);
}

double UniformBlockExact::first_two_fixed() const {
  // Y_1 = 1 then the next block fixes its first point, or Y_1 >= 2 fixing both.
  long double s = p_.size() > 1 ? p_[1] * first_image(1) : 0.0L;
  for (std::size_t y = 2; y < p_.size(); ++y)
    s += p_[y] / (static_cast<long double>(y) * static_cast<long double>(y - 1));
  return static_cast<double>(s);
}

std::vector<double> UniformBlockExact::split_probabilities(std::size_t n_max) const {
  std::vector<double> f(p_.begin() + 1, p_.end());
  const auto v = u_from_f(f, n_max);  // block boundaries
  std::vector<double> u(n_max + 1, 0.0);
  u[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    long double s = 0.0L;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t r = n - a;
      long double inner = 0.0L;
      for (std::size_t len = r; len < p_.size(); ++len) {
        if (p_[len] == 0.0) continue;
        inner += p_[len] * (len == r ? 1.0L : std::exp(-log_choose(len, r)));
      }
      s += v[a] * inner;
    }
    u[n] = static_cast<double>(s);
  }
  return u;
}

double UniformBlockExact::size_biased(std::uint64_t n) const {
  if (n == 0 || n >= p_.size()) return 0.0;
  return static_cast<double>(n) * p_[n] / mu_;
}

SheppLloydReport shepp_lloyd_check(double q, std::uint64_t n_samples, Rng& rng,
                                   std::size_t j_max) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("shepp_lloyd_check: q must lie in (0,1)");
  if (n_samples < 2) throw ConfigError("shepp_lloyd_check needs at least 2 samples");
  j_max = std::max<std::size_t>(j_max, 3);
  std::vector<long double> s1(j_max + 1, 0.0L), s2(j_max + 1, 0.0L);
  long double c12 = 0.0L, c13 = 0.0L, c23 = 0.0L;
  std::vector<std::uint64_t> counts(j_max + 1);
  std::vector<char> seen;
  const double logq = std::log(q);
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    const auto n = static_cast<std::size_t>(std::floor(std::log(rng.uniform()) / logq));
    const auto pi = uniform_permutation(n, rng);
    std::fill(counts.begin(), counts.end(), 0);
    seen.assign(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t k = i; !seen[k]; k = pi[k - 1]) {
        seen[k] = 1;
        ++len;
      }
      if (len <= j_max) ++counts[len];
    }
    for (std::size_t j = 1; j <= j_max; ++j) {
      s1[j] += counts[j];
      s2[j] += static_cast<long double>(counts[j]) * counts[j];
    }
    c12 += static_cast<long double>(counts[1]) * counts[2];
    c13 += static_cast<long double>(counts[1]) * counts[3];
    c23 += static_cast<long double>(counts[2]) * counts[3];
  }
  SheppLloydReport r;
  r.q = q;
  r.samples = n_samples;
  const long double ns = static_cast<long double>(n_samples);
  std::vector<long double> var(j_max + 1);
  for (std::size_t j = 1; j <= j_max; ++j) {
    const long double m = s1[j] / ns;
    var[j] = std::max(0.0L, s2[j] / ns - m * m);
    r.mean.push_back(static_cast<double>(m));
    r.mean_se.push_back(static_cast<double>(std::sqrt(var[j] / (ns - 1.0L))));
    r.expected.push_back(std::pow(q, static_cast<double>(j)) / static_cast<double>(j));
  }
  auto corr = [&](std::size_t a, std::size_t b, long double cab) {
    const long double cov = cab / ns - (s1[a] / ns) * (s1[b] / ns);
    const long double den = std::sqrt(var[a] * var[b]);
    const double c = den > 0 ? static_cast<double>(cov / den) : 0.0;
    // Under independence the sample correlation has standard error ~ 1/sqrt(n).
    r.correlations.push_back({a, b, c, static_cast<double>(1.0L / std::sqrt(ns))});
  };
  corr(1, 2, c12);
  corr(1, 3, c13);
  corr(2, 3, c23);
  return r;
}

}  // namespace regenperm
