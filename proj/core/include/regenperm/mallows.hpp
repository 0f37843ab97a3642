#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace regenperm {

inline constexpr std::size_t kMallowsEnumerationCap = 10;

/// Z_{n,q} = Π_{j<=n} Σ_{i<=j} q^{i-1}.
double mallows_qfactorial(std::size_t n, double q);

/// q^{inv(π)} / Z_{n,q} for a permutation π of [n].
double mallows_mass(std::span<const std::uint64_t> pi, double q);

/// Z†_{n,q}: Σ q^{inv(π)} over indecomposable π of [n], by enumeration
/// (n <= kMallowsEnumerationCap).
double mallows_indecomposable_partition(std::size_t n, double q);

/// (1-q)^n Z_{n,q}, the probability that [n] is a block of the limit
/// permutation; equals Π_{j<=n} (1 - q^j).
double mallows_block_probability(std::size_t n, double q);

/// (1-q)^n Z†_{n,q}, the first-split probability at n.
double mallows_first_split(std::size_t n, double q);

}  // namespace regenperm
