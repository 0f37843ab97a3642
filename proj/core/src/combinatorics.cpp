#include "regenperm/combinatorics.hpp"

#include <stdexcept>

#include "regenperm/error.hpp"
#include "regenperm/perm.hpp"

namespace regenperm {

BigCount factorial(std::size_t n) {
  BigCount r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

IndecomposableTable::IndecomposableTable(std::size_t n_max) : n_max_(n_max) {
  if (n_max < 1) throw ConfigError("indecomposable table needs n_max >= 1");
  std::vector<BigCount> fact(n_max + 1);
  fact[0] = 1;
  for (std::size_t i = 1; i <= n_max; ++i) fact[i] = fact[i - 1] * i;

  t_.assign(n_max + 1, std::vector<BigCount>(n_max + 1, BigCount(0)));
  t_[0][0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigCount r = fact[n];
    for (std::size_t k = 1; k < n; ++k) r -= t_[1][k] * fact[n - k];
    t_[1][n] = r;
  }
  for (std::size_t k = 2; k <= n_max; ++k)
    for (std::size_t n = k; n <= n_max; ++n) {
      BigCount s = 0;
      for (std::size_t m = 1; m <= n - (k - 1); ++m) s += t_[1][m] * t_[k - 1][n - m];
      t_[k][n] = s;
    }
}

const BigCount& IndecomposableTable::operator()(std::size_t n, std::size_t k) const {
  if (n > n_max_ || k > n_max_) throw std::out_of_range("indecomposable table index");
  return t_[k][n];
}

BigCount size_biased_scaled(const IndecomposableTable& t, std::size_t n, std::size_t ell) {
  if (ell < 1 || ell > n || n > t.n_max()) throw std::out_of_range("size_biased_scaled index");
  BigCount s = 0;
  for (std::size_t k = 1; k <= n - ell + 1; ++k) s += BigCount(k) * t(n - ell, k - 1);
  return BigCount(ell) * t(ell, 1) * s;
}

ComponentLaw component_law(const IndecomposableTable& t, std::size_t n) {
  if (n < 1) throw ConfigError("component_law needs n >= 1");
  if (n > t.n_max()) throw std::out_of_range("component_law: table too small");
  const BigCount nf = factorial(n);
  ComponentLaw law;
  law.n = n;
  law.components.assign(n + 1, Rational(0));
  law.first_length.assign(n + 1, Rational(0));
  law.size_biased.assign(n + 1, Rational(0));
  for (std::size_t k = 1; k <= n; ++k) law.components[k] = Rational(t(n, k), nf);
  for (std::size_t l = 1; l <= n; ++l) {
    law.first_length[l] = Rational(t(l, 1) * factorial(n - l), nf);
    law.size_biased[l] = Rational(size_biased_scaled(t, n, l), nf * n);
  }
  return law;
}

ComponentLaw component_law(std::size_t n) { return component_law(IndecomposableTable(n), n); }

Rational reciprocal_binomial_sum(std::size_t n) {
  Rational s = 0;
  BigCount c = 1;  // C(n,k)
  for (std::size_t k = 0; k <= n; ++k) {
    s += Rational(BigCount(1), c);
    c = c * (n - k) / (k + 1);
  }
  return s;
}

std::vector<std::uint64_t> enumerate_component_counts(std::size_t n) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  for_each_permutation(n, [&](std::span<const std::uint64_t> pi) {
    std::uint64_t mx = 0;
    std::size_t comps = 0;
    for (std::size_t k = 1; k <= pi.size(); ++k) {
      mx = std::max(mx, pi[k - 1]);
      comps += (mx == k);
    }
    ++counts[comps];
  });
  return counts;
}

std::vector<long double> indecomposable_fraction(std::size_t j_max) {
  // i_n = 1 - Σ_{k<n} i_k / C(n,k); no cancellation since i_n -> 1.
  std::vector<long double> frac(j_max + 1, 0.0L);
  for (std::size_t n = 1; n <= j_max; ++n) {
    long double s = 0.0L;
    long double inv_binom = 1.0L;  // 1/C(n,k) starting at k = 0
    for (std::size_t k = 1; k < n; ++k) {
      inv_binom *= static_cast<long double>(k) / static_cast<long double>(n - k + 1);
      s += frac[k] * inv_binom;
    }
    frac[n] = 1.0L - s;
  }
  return frac;
}

}  // namespace regenperm
