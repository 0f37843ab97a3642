#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regenperm/model.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// First n images of one realization of the model.
PermPrefix sample_prefix(const ModelSpec& model, std::size_t n, Rng& rng);

/// A realization run on to the first splitting time L >= n, so the result
/// is a permutation of [L]. Throws BudgetExceeded when L would pass
/// `max_length`.
std::vector<std::uint64_t> sample_through_split(const ModelSpec& model, std::size_t n, Rng& rng,
                                                std::size_t max_length = std::size_t{1} << 24);

/// Cycle lengths of a permutation of [L] keyed by their least element:
/// out[i] = length of the cycle whose least element is i + 1, else 0.
std::vector<std::size_t> cycles_by_least_element(const std::vector<std::uint64_t>& perm);

}  // namespace regenperm
