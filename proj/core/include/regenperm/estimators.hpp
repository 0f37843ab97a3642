#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "regenperm/model.hpp"
#include "regenperm/parallel.hpp"
#include "regenperm/report.hpp"

namespace regenperm {

/// Split frequencies u_1..u_{n_max} and first-split frequencies f_n. For the
/// blocked family u_n and f_n refer to block ends (the renewal events of
/// the construction) and split_n records splitting times. Realizations that
/// exhaust a draw budget are dropped and the report is marked partial.
EstimateReport estimate_renewal(const ModelSpec& model, std::size_t n_max, const RunConfig& cfg);

/// C_{n,j}/n for j <= j_max, counting cycles whose least element is in [n];
/// each realization runs to a splitting time >= n.
EstimateReport cycle_frequencies(const ModelSpec& model, std::size_t n, std::size_t j_max,
                                 const RunConfig& cfg);

/// Shares of j-cycles among cycles (p°_j) and of length-j components among
/// components (p†_j), same counting convention as cycle_frequencies.
EstimateReport component_frequencies(const ModelSpec& model, std::size_t n, std::size_t j_max,
                                     const RunConfig& cfg);

/// Law of D*_0 on the stationary two-sided version (blocked family only):
/// P(D = d) for |d| <= d_max, P(D > 0), E|D|, and P(R*_0 = 1).
EstimateReport displacement_law(const ModelSpec& model, std::size_t d_max, const RunConfig& cfg);

/// Counts of D*_z over a window, for shift-invariance checks.
struct WindowCounts {
  std::int64_t lo = 0, hi = 0;
  std::size_t d_max = 0;
  std::uint64_t samples = 0;
  /// counts[z - lo][d + d_max]; the last column pools |d| > d_max.
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> renewals;  // per z
};
WindowCounts displacement_window_counts(const ModelSpec& model, std::int64_t lo, std::int64_t hi,
                                        std::size_t d_max, const RunConfig& cfg);

/// C_{n,1}/n for the p-biased family over a parameter grid: `family` is
/// "geometric" (grid of q) or "gem" (grid of θ).
EstimateReport fixed_point_density(const std::string& family, const std::vector<double>& grid,
                                   std::size_t n, const RunConfig& cfg);

/// Throws UnsupportedModel("requires positive recurrence") unless the model
/// is known to be positive recurrent.
void require_positive_recurrence(const ModelSpec& model);

}  // namespace regenperm
