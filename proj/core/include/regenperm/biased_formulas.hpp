#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regenperm/dist.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// A value with its Monte Carlo standard error (0 when exact).
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

inline constexpr std::size_t kSubsetEnumerationCap = 20;

/// Σ_{n,j} = Σ_{|S|=j, S⊆[n]} E[T_n / (T_n + P_S)]. Exact for a fixed driver;
/// for sticks, averaged over `mc_draws` independent W sequences.
Estimate sigma_nj(const Driver& d, std::size_t n, std::size_t j, std::uint64_t mc_draws, Rng& rng);

/// u_n = 1 + Σ_j (-1)^j Σ_{n,j}, with the same evaluation rules.
Estimate u_n_inclusion_exclusion(const Driver& d, std::size_t n, std::uint64_t mc_draws, Rng& rng);

struct IntegralEstimate {
  double value = 0.0;
  double quad_error = 0.0;  // mean adaptive-quadrature error estimate
  double mc_se = 0.0;       // 0 for constant sticks
};

/// u_n = ∫_0^∞ e^{-x} E Π_{i<=n} (1 - exp(-x W_i / T_i)) dx, integrated in
/// t = 1 - e^{-x} by adaptive Simpson to `quad_tol` per W sequence.
IntegralEstimate pta_integral(const Driver& d, std::size_t n, double quad_tol,
                              std::uint64_t mc_draws, Rng& rng);

}  // namespace regenperm
