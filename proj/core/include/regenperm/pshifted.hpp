#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "regenperm/dist.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// Index over the unused positive integers below the running maximum,
/// answering "k-th smallest unused" and removing it.
enum class PsiIndex {
  gap_runs,  // sorted runs of unused integers; cost grows with the rank asked
  fenwick,   // order-statistic tree over used flags; logarithmic per step
};

/// Incremental ψ-construction: each finite draw X places the X-th
/// smallest unused positive integer. The first infinite draw switches to
/// the zigzag completion n + σ(i - n) after the last split n, replacing
/// any images placed since that split.
class PShiftedBuilder {
 public:
  explicit PShiftedBuilder(PsiIndex index = PsiIndex::gap_runs);
  ~PShiftedBuilder();
  PShiftedBuilder(PShiftedBuilder&&) noexcept;
  PShiftedBuilder& operator=(PShiftedBuilder&&) noexcept;

  void push(Draw x);
  /// Appends the next zigzag image; only valid after an infinite draw.
  void push_zigzag();

  std::size_t size() const noexcept { return images_.size(); }
  const std::vector<std::uint64_t>& images() const noexcept { return images_; }
  bool in_zigzag() const noexcept { return zigzag_from_ != 0; }
  /// Last splitting time (0 before the first).
  std::size_t last_split() const noexcept { return last_split_; }
  /// True when the current length is a splitting time.
  bool at_split() const noexcept { return !in_zigzag() && last_split_ == images_.size(); }
  /// M_n = max image - n (the number of unused integers below the max).
  std::uint64_t gap() const noexcept { return max_ - images_.size(); }

  std::vector<std::uint64_t> take() && { return std::move(images_); }

 /// Implementation hook for the two index structures.
  struct Index;

 private:
  std::unique_ptr<Index> index_;
  std::vector<std::uint64_t> images_;
  std::uint64_t max_ = 0;
  std::size_t last_split_ = 0;
  std::size_t zigzag_from_ = 0;  // last split when the zigzag started, plus 1
};

/// σ: the zigzag permutation ... 6 -> 4 -> 2 -> 1 -> 3 -> 5 -> ... of ℕ₊.
std::uint64_t zigzag(std::uint64_t m) noexcept;

/// Deterministic construction from a given draw stream.
PermPrefix pshifted_from_draws(std::span<const Draw> xs, PsiIndex index = PsiIndex::gap_runs);

/// n images of a p-shifted permutation. With p_inf > 0 the component in
/// progress at n is resolved (completed or replaced by the zigzag) before
/// returning, so the prefix is exact.
PermPrefix sample_pshifted(const DiscreteDist& p, std::size_t n, Rng& rng,
                           PsiIndex index = PsiIndex::gap_runs);

/// Π_{j<=n} F(j).
double pshifted_u(const DiscreteDist& p, std::size_t n);
/// u_0..u_{n_max}.
std::vector<double> pshifted_u_sequence(const DiscreteDist& p, std::size_t n_max);
/// f_1..f_{n_max} for formal masses p_1, p_2, ... (p_i = 0 beyond the span);
/// any nonnegative values are accepted, so p_i = 1 gives (n,1)†.
std::vector<double> pshifted_f_polynomials(std::span<const double> p, std::size_t n_max);
std::vector<double> pshifted_f_polynomials(const DiscreteDist& p, std::size_t n_max);

/// Probability that the prefix equals the given injection:
/// Π_i p(π_i - #{j < i : π_j < π_i}).
double pshifted_injection_mass(const DiscreteDist& p, std::span<const std::uint64_t> images);

/// The gap chain M_n = max(M_{n-1}, X_n) - 1, M_0 = 0; M_n = 0 exactly at
/// splitting times. After an infinite draw the chain is absorbed at ∞.
struct MnTrajectory {
  std::vector<std::uint64_t> m;      // m[n-1] = M_n, valid for n < absorbed_at
  std::size_t absorbed_at = 0;       // first n with M_n = ∞, or 0 if none
  bool infinite(std::size_t n) const noexcept { return absorbed_at != 0 && n >= absorbed_at; }
};

MnTrajectory mn_chain(const DiscreteDist& p, std::size_t n_steps, Rng& rng);
MnTrajectory mn_chain_from_draws(std::span<const Draw> xs);

/// Normalized invariant law of M: π_i = μ_i Π_{j>=1} F(j) with μ_0 = 1 and
/// μ_i = P(X > i) / Π_{j<=i} F(j). Entries 0..i_max.
std::vector<double> mn_invariant_law(const DiscreteDist& p, std::size_t i_max);

}  // namespace regenperm
