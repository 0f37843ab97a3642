#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regenperm/dist.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// Zero-delay blocked permutation: i.i.d. block lengths from p, each block
/// an independent uniform permutation shifted into place.
struct BlockedSample {
  std::vector<std::uint64_t> images;      // whole blocks, length >= requested
  std::vector<std::size_t> block_ends;    // right ends of the blocks
};

/// Concatenates blocks until at least `min_length` positions are covered.
BlockedSample sample_blocks(const DiscreteDist& p, std::size_t min_length, Rng& rng);

/// The first n images of a blocked permutation.
PermPrefix sample_blocked(const DiscreteDist& p, std::size_t n, Rng& rng);

/// Restriction of the stationary version Π* on ℤ to [lo, hi].
struct TwoSidedWindow {
  std::int64_t lo = 0, hi = 0;
  std::vector<std::int64_t> images;  // images[z - lo] = Π*_z
  std::vector<char> renewal;         // renewal[z - lo] = R*_z

  std::int64_t image(std::int64_t z) const { return images.at(static_cast<std::size_t>(z - lo)); }
  bool renews(std::int64_t z) const { return renewal.at(static_cast<std::size_t>(z - lo)) != 0; }
  std::int64_t displacement(std::int64_t z) const { return image(z) - z; }
};

/// Y_0 size-biased (n p_n / μ), T_0 uniform on {0..Y_0-1}; the block
/// (T_{-1}, T_0] with T_{-1} = T_0 - Y_0 covers 0, and i.i.d. p-blocks extend
/// it on both sides. R*_z = 1 iff z is a block end or a splitting time
/// inside a block. Throws UnsupportedModel unless p has finite mean.
TwoSidedWindow sample_stationary_window(const DiscreteDist& p, std::int64_t lo, std::int64_t hi,
                                        Rng& rng);

/// Draws from the size-biased law n p_n / μ.
std::uint64_t sample_size_biased(const DiscreteDist& p, Rng& rng);

}  // namespace regenperm
