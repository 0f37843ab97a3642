#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace regenperm {

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;  // after merging
};

/// Goodness of fit of counts to cell probabilities. Adjacent cells are
/// merged left to right until each expected count reaches `min_expected`.
/// Probability not covered by `probs` forms a final tail cell; its count
/// is observed.back() when `observed` has one extra entry, else zero.
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected = 5.0);

/// Test that the rows of a contingency table share one column law (also
/// the independence test for a joint table). Columns whose pooled count
/// is small are merged into their left neighbour.
ChiSquare chi_square_homogeneity(const std::vector<std::vector<std::uint64_t>>& table,
                                 double min_expected = 5.0);

/// Upper tail of the chi-square law.
double chi_square_sf(double statistic, std::size_t dof);

}  // namespace regenperm
