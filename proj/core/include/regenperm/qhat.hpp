#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regenperm/biased_formulas.hpp"
#include "regenperm/dist.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// Transition kernel of the nondecreasing chain Q̂ on ℕ₊:
/// q̂(m, n) = C(n-1, m-1) E[W^{n-m} (1-W)^m], n >= m.
class QhatKernel {
 public:
  enum class Kind { gem, constant, general };

  /// GEM(θ): q̂(m,n) = (m)_{n-m} (θ)_m / (1+θ)_n.
  static QhatKernel gem(double theta);
  /// W ≡ w: a Pascal(m, 1-w) row.
  static QhatKernel constant(double w);
  /// Any factor law; expectations over `draws` stored factor samples.
  static QhatKernel general(const StickBreaking& s, std::size_t draws, Rng& rng);
  /// Dispatches on the stick kind (custom laws use 100000 stored draws).
  static QhatKernel from_sticks(const StickBreaking& s, Rng& rng);

  Kind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }

  /// Throws ConfigError when m > n or m = 0.
  double operator()(std::uint64_t m, std::uint64_t n) const;
  /// Σ_{n>N} q̂(m, n) for N >= m - 1.
  double row_tail(std::uint64_t m, std::uint64_t N) const;
  /// Samples Q̂_{k+1} given Q̂_k = m.
  std::uint64_t sample_next(std::uint64_t m, Rng& rng) const;

 private:
  QhatKernel() = default;
  Kind kind_ = Kind::gem;
  double theta_ = 1.0;
  double w_ = 0.5;
  std::vector<double> w_draws_;
};

struct RunProbability {
  double value = 0.0;       // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t truncation = 0;  // states summed exactly: 1..truncation
};

/// u_k = P(Q̂_0 < Q̂_1 < ... < Q̂_k | Q̂_0 = 1) for GEM(θ), k = 0..k_max.
/// Paths inside [1, N] are summed exactly with a streaming pass over n
/// (the kernel factors as B(m) A(n)); mass escaping above N is bracketed
/// using that each later step stays put with probability at most
/// θ/(θ+N+1). N grows until every half-width is <= tol or N reaches n_cap.
std::vector<RunProbability> gem_u_exact(double theta, std::size_t k_max, double tol = 1e-10,
                                        std::uint64_t n_cap = std::uint64_t{1} << 28);

/// Monte Carlo u_0..u_k_max from `n_chains` chains started at 1.
std::vector<Estimate> u_k_via_increasing_runs(const QhatKernel& kernel, std::size_t k_max,
                                              std::uint64_t n_chains, Rng& rng);

/// GEM(1) closed forms.
std::vector<double> gem1_u_recursion(std::size_t k_max);  // 2u_k + 3u_{k-1} + u_{k-2} = 2ζ(k)
double gem1_u_series(std::size_t k);                       // Σ_j 2 / (j^k (j+1)(j+2))
double gem1_U_closed_form(double z);                       // Σ u_k z^k, -1 < z < 1

struct FirstComponentMoments {
  double mean = 0.0;        // F'(1)
  double variance = 0.0;    // F''(1) + F'(1) - F'(1)^2
  double c2 = 0.0;          // Taylor coefficient of (z-1)^2 in F
  double c3 = 0.0;          // Taylor coefficient of (z-1)^3 in F
};

/// Moments of Y_1 from F = 1 - 1/U with U in closed form, by one-sided
/// Richardson extrapolation of 1/U(1-h) as h -> 0.
FirstComponentMoments gem1_first_component_moments();

/// Γ(θ+2)Γ(θ+1)/Γ(2θ+2).
double gem_uinfty(double theta);
/// (1/(1+θ)) Π_{j>=2} (1 - θ²/(j+θ)²) summed to `terms` factors plus an
/// integral estimate of the remaining log-product.
double gem_uinfty_product(double theta, std::size_t terms = 100000);

/// P(Q̂_0 = m) = E[W^m] / (m E[-log(1-W)]) for GEM(θ).
double gem_entrance_law(double theta, std::uint64_t m);

/// Samples m from the GEM(1) entrance law 1/(m(m+1)).
std::uint64_t sample_gem1_entrance(Rng& rng);

/// Q̂_0..Q̂_horizon from Q̂_0 = m0.
std::vector<std::uint64_t> qhat_sample_path(const QhatKernel& kernel, std::uint64_t m0,
                                            std::size_t horizon, Rng& rng);

/// Occupation times G_j of states j <= j_max along chains run until they
/// pass j_max. Chains still at or below j_max after `horizon` steps are
/// counted in `truncated` and excluded.
struct OccupationReport {
  std::size_t j_max = 0;
  std::uint64_t chains = 0;
  std::uint64_t truncated = 0;
  /// histogram[j][g] = number of chains with G_j = g (g capped at g_cap).
  std::vector<std::vector<std::uint64_t>> histogram;
  /// Joint counts for (G_j, G_{j+1}) with entries capped at g_cap.
  std::vector<std::vector<std::vector<std::uint64_t>>> joint;
  std::size_t g_cap = 0;
};

enum class StartLaw { fixed, gem1_entrance };

OccupationReport occupation_times(const QhatKernel& kernel, StartLaw start, std::uint64_t m0,
                                  std::size_t j_max, std::size_t horizon, std::uint64_t n_chains,
                                  Rng& rng, std::size_t g_cap = 12);

/// P(the chain from m never repeats a state), estimated by running until
/// the state exceeds `cutoff` (any later repeat has probability below
/// roughly θ/(θ+cutoff) per step).
Estimate increasing_forever(const QhatKernel& kernel, StartLaw start, std::uint64_t m0,
                            std::uint64_t cutoff, std::uint64_t n_chains, Rng& rng);

}  // namespace regenperm
