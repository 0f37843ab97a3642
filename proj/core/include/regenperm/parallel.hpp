#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "regenperm/biased_formulas.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

struct RunConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  unsigned workers = 1;
  /// Batches are the unit of both scheduling and error estimation.
  unsigned batches = 64;
};

/// Per-batch column sums: sums[b][c].
using BatchSums = std::vector<std::vector<double>>;

/// Body of one batch: draw `count` realizations from `rng` and add into
/// `sums` (already sized to the column count).
using BatchBody = std::function<void(Rng& rng, std::uint64_t count, std::vector<double>& sums)>;

/// Splits cfg.samples over min(cfg.batches, cfg.samples) batches; batch b
/// always uses Rng::stream(cfg.seed, b), so results do not depend on the
/// worker count. The first exception by batch index is rethrown.
BatchSums run_batches(const RunConfig& cfg, std::size_t columns, const BatchBody& body);

/// Σ num / Σ den with a batch-means (delta method) standard error.
Estimate batch_ratio(const BatchSums& sums, std::size_t num, std::size_t den);

/// Column totals in batch order.
std::vector<double> batch_totals(const BatchSums& sums);

}  // namespace regenperm
