#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regenperm/dist.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// Closed forms of the blocked model with geometric(1-q) block lengths and
/// uniform blocks.
struct BlockedGeometricExact {
  double q = 0.5;

  /// ν_j = q^{j-1}/j, the mean number of j-cycles per block.
  double nu(std::size_t j) const;
  /// Mean block length 1/(1-q).
  double mu() const;
  /// P(Π_1 = k) = ((1-q)/q) Σ_{h>=k} q^h/h.
  double first_image(std::uint64_t k) const;
  /// P(Π_1 = 1, Π_2 = 2) = 1 - q.
  double first_two_fixed() const;
};

BlockedGeometricExact blocked_exact(double q);

/// Closed forms for the blocked model with a proper block-length law p and
/// uniform permutations inside blocks.
class UniformBlockExact {
 public:
  explicit UniformBlockExact(const DiscreteDist& p);

  double mu() const noexcept { return mu_; }
  /// ν_j = P(Y >= j)/j.
  double nu(std::size_t j) const;
  /// Limit of C_{n,j}/n: ν_j / μ.
  double cycle_frequency(std::size_t j) const;
  /// p°_j = ν_j / Σ ν, the limit share of j-cycles among cycles.
  double cycle_share(std::size_t j) const;
  /// p†_j, the limit share of length-j components among components.
  double component_share(std::size_t j) const;
  /// Limit of (number of components)/n.
  double component_rate() const;
  /// P(D* = d) = (1/μ) E[(Y - |d|)_+ / Y].
  double displacement(std::int64_t d) const;
  /// E|D*| = (2/μ) E δ_1(Y), δ_1(n) = (n^2 - 1)/6.
  double mean_abs_displacement() const;
  /// P(D* > 0) = (1 - 1/μ)/2.
  double positive_displacement() const;
  /// P(Π_1 = k) = Σ_{y>=k} p_y / y.
  double first_image(std::uint64_t k) const;
  /// P(Π_1 = 1, Π_2 = 2).
  double first_two_fixed() const;
  /// u_0..u_{n_max}: probability that n is a splitting time (zero delay).
  std::vector<double> split_probabilities(std::size_t n_max) const;
  /// Size-biased law n p_n / μ.
  double size_biased(std::uint64_t n) const;

  /// Largest block length carried (tail beyond is below 1e-18).
  std::size_t y_max() const noexcept { return p_.size() - 1; }

 private:
  std::vector<double> p_;       // p_[y], y = 0..y_max (p_[0] = 0)
  std::vector<double> tail_ge_; // P(Y >= j)
  std::vector<double> comp_;    // expected j-components per block
  double mu_ = 0.0;
  double sum_nu_ = 0.0;
  double comp_total_ = 0.0;
};

struct SheppLloydReport {
  double q = 0.0;
  std::uint64_t samples = 0;
  std::vector<double> mean;      // index j-1: mean of N_j
  std::vector<double> mean_se;
  std::vector<double> expected;  // q^j / j
  struct Corr {
    std::size_t i, j;
    double corr, se;
  };
  std::vector<Corr> correlations;
};

/// N ~ geometric on {0,1,...} with P(N = n) = (1-q) q^n, then a uniform
/// permutation of [N]; reports cycle-count means for j <= j_max and
/// pairwise correlations for the first three lengths.
SheppLloydReport shepp_lloyd_check(double q, std::uint64_t n_samples, Rng& rng,
                                   std::size_t j_max = 6);

}  // namespace regenperm
