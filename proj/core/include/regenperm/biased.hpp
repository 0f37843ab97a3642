#pragma once

#include <cstddef>
#include <cstdint>
#include <queue>
#include <vector>

#include "regenperm/dist.hpp"
#include "regenperm/perm.hpp"
#include "regenperm/rng.hpp"

namespace regenperm {

/// Masses P_1, P_2, ... of a fixed or random (stick-breaking) distribution,
/// materialized on demand. Random factors are drawn from the stream passed
/// to the constructor, so each instance is one realization of P.
class MassSource {
 public:
  MassSource(const Driver& driver, Rng& rng);

  double mass(std::size_t i);
  double log_mass(std::size_t i);
  /// T_i = 1 - P_1 - ... - P_i.
  double tail(std::size_t i);
  double log_tail(std::size_t i);
  /// P_i / T_{i-1}: the chance of i given a pick beyond i - 1.
  double conditional(std::size_t i);
  /// Number of indices materialized so far.
  std::size_t materialized() const noexcept { return p_.size(); }
  /// True when T_i = 0 (a finite support is exhausted at i).
  bool exhausted_at(std::size_t i);

 private:
  void ensure(std::size_t i);
  const Driver* driver_;
  Rng* rng_;
  std::vector<double> p_, t_, logp_, logt_, w_;
};

/// Records first appearances in an i.i.d. stream from P. Repeated draws are
/// skipped in bulk: the number of repeats before a new value is geometric
/// with success probability equal to the unseen mass, and is charged to
/// the draw budget exactly as if drawn one by one.
class BiasedSequential {
 public:
  BiasedSequential(const Driver& driver, Rng& rng, std::uint64_t draw_budget = 1'000'000);
  /// Next distinct value. Throws BudgetExceeded or, for a finite support,
  /// std::out_of_range when every value has been seen.
  std::uint64_t next();
  std::uint64_t draws() const noexcept { return draws_; }
  std::size_t window() const noexcept { return masses_.materialized(); }

 private:
  MassSource masses_;
  Rng* rng_;
  std::uint64_t budget_;
  std::uint64_t draws_ = 0;
  std::vector<char> seen_;  // seen_[i-1]
  std::size_t distinct_ = 0;
};

/// Ranks Y_i = ε_i / P_i in increasing order (Perman-Pitman-Yor). Keys of a
/// materialized window sit in a heap; the tail beyond the window is kept as
/// its exact minimum τ = ε / T_K, and is extended lazily using the
/// memoryless property when τ is the smallest candidate.
class BiasedPpy {
 public:
  BiasedPpy(const Driver& driver, Rng& rng, std::size_t initial_window = 0);
  std::uint64_t next();
  std::size_t window() const noexcept { return window_; }

 private:
  struct Item {
    double key;
    std::uint64_t index;
    bool operator>(const Item& o) const noexcept { return key > o.key; }
  };
  MassSource masses_;
  Rng* rng_;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
  std::size_t window_ = 0;
  double log_tau_ = 0.0;  // log of the tail minimum; +inf when no tail
};

struct BiasedSample {
  PermPrefix perm;
  std::uint64_t draws = 0;   // sequential only
  std::size_t window = 0;    // materialized masses
};

BiasedSample sample_pbiased_sequential(const Driver& driver, std::size_t n, Rng& rng,
                                       std::uint64_t draw_budget = 1'000'000);
BiasedSample sample_pbiased_ppy(const Driver& driver, std::size_t n, Rng& rng,
                                std::size_t initial_window = 0);

/// The interval process W_k on (0,1). Intervals are unvisited boxes
/// (F_{i-1}, F_i) below the rightmost box reached, plus the rightmost
/// interval (F_j, 1). Each step picks a uniform point of the current union
/// (points in removed intervals are redrawn), so step k discovers the k-th
/// distinct box.
struct WkTrajectory {
  /// First k with a single interval, or 0 if not reached.
  std::size_t first_component = 0;
  std::vector<std::size_t> interval_count;  // after step k
  std::vector<std::uint64_t> boxes;         // box hit at step k (= Π_k)
  std::vector<char> single;                 // single interval after step k
};

class WkProcess {
 public:
  WkProcess(const Driver& driver, Rng& rng);
  /// Runs one step; returns the box hit.
  std::uint64_t step();
  std::size_t interval_count() const noexcept { return open_.size() + 1; }
  bool single_interval() const noexcept { return open_.empty(); }
  std::size_t rightmost_box() const noexcept { return j_; }

 private:
  MassSource masses_;
  Rng* rng_;
  std::vector<std::size_t> open_;  // unvisited boxes below j_, ascending
  std::size_t j_ = 0;
};

/// Runs until the first single-interval state.
WkTrajectory wk_interval_process(const Driver& driver, Rng& rng, std::size_t max_steps = 1u << 20);
/// Runs exactly `steps` steps.
WkTrajectory wk_run(const Driver& driver, std::size_t steps, Rng& rng);

}  // namespace regenperm
