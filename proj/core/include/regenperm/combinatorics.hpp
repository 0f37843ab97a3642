#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace regenperm {

using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigCount factorial(std::size_t n);

/// Exact triangle (n,k)†: permutations of [n] with exactly k components.
/// (n,1)† from n! = Σ_{k=1}^n (k,1)† (n-k)!; (n,k)† as the k-fold
/// convolution of the (·,1)† sequence. (0,0)† = 1.
class IndecomposableTable {
 public:
  explicit IndecomposableTable(std::size_t n_max);

  std::size_t n_max() const noexcept { return n_max_; }
  /// Zero outside 1 <= k <= n, except (0,0)† = 1.
  const BigCount& operator()(std::size_t n, std::size_t k) const;

 private:
  std::size_t n_max_;
  std::vector<std::vector<BigCount>> t_;  // t_[k][n]
  BigCount zero_{0};
};

/// Exact laws of the component structure of a uniform permutation of [n].
/// Each vector is indexed by value (entry 0 unused and zero).
struct ComponentLaw {
  std::size_t n = 0;
  std::vector<Rational> components;    // P(K_n = k)
  std::vector<Rational> first_length;  // P(L_{n,1} = ℓ)
  std::vector<Rational> size_biased;   // P(L*_n = ℓ)
};

ComponentLaw component_law(const IndecomposableTable& t, std::size_t n);
ComponentLaw component_law(std::size_t n);

/// n · n! · P(L*_n = ℓ) = ℓ (ℓ,1)† Σ_k k (n-ℓ, k-1)†, an integer.
BigCount size_biased_scaled(const IndecomposableTable& t, std::size_t n, std::size_t ell);

/// Σ_{k=0}^n 1 / C(n,k).
Rational reciprocal_binomial_sum(std::size_t n);

/// Brute force over all permutations of [n]: entry k counts those with k
/// components (entry 0 unused). Intended for n <= 10.
std::vector<std::uint64_t> enumerate_component_counts(std::size_t n);

/// (j,1)† / j! for j = 0..j_max (entry 0 is 0), in long double.
std::vector<long double> indecomposable_fraction(std::size_t j_max);

}  // namespace regenperm
