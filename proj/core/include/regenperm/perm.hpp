#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "regenperm/rng.hpp"

namespace regenperm {

/// The first n images (Π_1, ..., Π_n) of a permutation of the positive
/// integers. Positions are 1-based in all public APIs.
class PermPrefix {
 public:
  PermPrefix() = default;
  /// Validates positivity and distinctness; throws ConfigError otherwise.
  explicit PermPrefix(std::vector<std::uint64_t> images);
  /// Skips validation; the caller guarantees an injection into ℕ₊.
  static PermPrefix trusted(std::vector<std::uint64_t> images) noexcept;

  std::size_t size() const noexcept { return images_.size(); }
  bool empty() const noexcept { return images_.empty(); }
  /// Image of position i (1-based).
  std::uint64_t at(std::size_t i) const { return images_.at(i - 1); }
  std::span<const std::uint64_t> images() const noexcept { return images_; }
  std::vector<std::uint64_t>&& release() && noexcept { return std::move(images_); }

 private:
  std::vector<std::uint64_t> images_;
};

bool is_injective(std::span<const std::uint64_t> images);
/// True when the images are exactly {1..n}.
bool is_permutation(std::span<const std::uint64_t> images);

/// All k <= n with max(Π_1..Π_k) = k, ascending.
std::vector<std::size_t> splitting_times(std::span<const std::uint64_t> images);
inline std::vector<std::size_t> splitting_times(const PermPrefix& p) {
  return splitting_times(p.images());
}

struct Component {
  std::size_t first = 0;  // 1-based, inclusive
  std::size_t last = 0;
  /// Cycle lengths ordered by the least element of each cycle.
  std::vector<std::size_t> cycle_lengths;
};

struct BlockStats {
  std::vector<Component> components;  // completed components only
  /// Positions after the last split; cycles there are undefined.
  std::size_t incomplete_from = 0;    // 0 when the prefix ends on a split
  std::vector<std::int64_t> displacements;  // D_i = Π_i - i
  bool has_incomplete_suffix() const noexcept { return incomplete_from != 0; }
};

BlockStats decompose(std::span<const std::uint64_t> images);
inline BlockStats decompose(const PermPrefix& p) { return decompose(p.images()); }

/// Pair-scan inversion count of a permutation of [n].
std::uint64_t inversions(std::span<const std::uint64_t> pi);
/// True iff the only splitting time of the permutation of [n] is n.
bool is_indecomposable(std::span<const std::uint64_t> pi);

/// Uniform permutation of [n] by the Fisher-Yates-Durstenfeld-Knuth
/// shuffle, images offset by `base` (so values are base+1..base+n).
void append_uniform_block(std::vector<std::uint64_t>& out, std::size_t n, std::uint64_t base,
                          Rng& rng);
std::vector<std::uint64_t> uniform_permutation(std::size_t n, Rng& rng);

/// Calls visit(pi) for each permutation of [n] in lexicographic order.
template <class Visit>
void for_each_permutation(std::size_t n, Visit&& visit) {
  std::vector<std::uint64_t> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = i + 1;
  do {
    visit(std::span<const std::uint64_t>(pi));
  } while (std::next_permutation(pi.begin(), pi.end()));
}

}  // namespace regenperm
