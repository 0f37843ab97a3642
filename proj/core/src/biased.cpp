#include "regenperm/biased.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "regenperm/error.hpp"

namespace regenperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// Continues a uniform point r in the tail beyond `from - 1` through the
/// conditional probabilities; returns the index hit and calls skip(i) for
/// each index passed over.
template <class Skip>
std::size_t walk_tail(MassSource& m, std::size_t from, double r, Skip&& skip) {
  for (std::size_t i = from;; ++i) {
    const double w = m.conditional(i);
    if (r < w || w >= 1.0) return i;
    skip(i);
    r = (r - w) / (1.0 - w);
    if (!(r >= 0.0)) r = 0.0;
    if (r >= 1.0) r = std::nextafter(1.0, 0.0);
  }
}

}  // namespace

MassSource::MassSource(const Driver& driver, Rng& rng) : driver_(&driver), rng_(&rng) {}

void MassSource::ensure(std::size_t i) {
  while (p_.size() < i) {
    const std::size_t k = p_.size() + 1;
    const double t_prev = k == 1 ? 1.0 : t_.back();
    const double logt_prev = k == 1 ? 0.0 : logt_.back();
    double w = 0.0, p = 0.0, t = 0.0, logp = 0.0, logt = 0.0;
    if (const auto* d = std::get_if<DiscreteDist>(driver_)) {
      if (d->kind() == DiscreteDist::Kind::geometric) {
        const double lq = std::log(d->q());
        w = 1.0 - d->q();
        logp = static_cast<double>(k - 1) * lq + std::log1p(-d->q());
        logt = static_cast<double>(k) * lq;
        p = std::exp(logp);
        t = std::exp(logt);
      } else {
        p = d->mass(k);
        t = d->tail(k);
        w = t_prev > 0.0 ? std::min(1.0, p / t_prev) : 1.0;
        if (t == 0.0) w = 1.0;
        logp = p > 0.0 ? std::log(p) : -kInf;
        logt = t > 0.0 ? std::log(t) : -kInf;
      }
    } else {
      const auto& s = std::get<StickBreaking>(*driver_);
      w = s.sample_factor(*rng_);
      stick_split(t_prev, w, p, t);
      logp = logt_prev + std::log(w);
      logt = logt_prev + std::log1p(-w);
    }
    w_.push_back(w);
    p_.push_back(p);
    t_.push_back(t);
    logp_.push_back(logp);
    logt_.push_back(logt);
  }
}

double MassSource::mass(std::size_t i) {
  ensure(i);
  return p_[i - 1];
}
double MassSource::log_mass(std::size_t i) {
  ensure(i);
  return logp_[i - 1];
}
double MassSource::tail(std::size_t i) {
  if (i == 0) return 1.0;
  ensure(i);
  return t_[i - 1];
}
double MassSource::log_tail(std::size_t i) {
  if (i == 0) return 0.0;
  ensure(i);
  return logt_[i - 1];
}
double MassSource::conditional(std::size_t i) {
  ensure(i);
  return w_[i - 1];
}
bool MassSource::exhausted_at(std::size_t i) { return log_tail(i) == -kInf; }

// ---------------------------------------------------------------------------

BiasedSequential::BiasedSequential(const Driver& driver, Rng& rng, std::uint64_t draw_budget)
    : masses_(driver, rng), rng_(&rng), budget_(draw_budget) {}

std::uint64_t BiasedSequential::next() {
  const std::size_t k = masses_.materialized();
  const bool closed = k > 0 && masses_.exhausted_at(k);
  long double unseen = closed ? 0.0L : masses_.tail(k);
  for (std::size_t i = 1; i <= k; ++i)
    if (!seen_[i - 1]) unseen += masses_.mass(i);
  if (closed && distinct_ == k) throw std::out_of_range("finite support exhausted");
  if (!(unseen > 0.0L))
    throw BudgetExceeded("unseen mass underflows after " + std::to_string(distinct_) +
                         " distinct values");
  // Repeats before the next new value: geometric with success prob `unseen`.
  double repeats = 0.0;
  if (unseen < 1.0L) {
    repeats = std::floor(std::log(rng_->uniform()) / std::log1p(-static_cast<double>(unseen)));
  }
  if (static_cast<double>(draws_) + repeats + 1.0 > static_cast<double>(budget_)) {
    throw BudgetExceeded("draw budget of " + std::to_string(budget_) + " exhausted after " +
                         std::to_string(distinct_) + " distinct values");
  }
  draws_ += static_cast<std::uint64_t>(repeats) + 1;

  long double x = rng_->uniform() * unseen;
  std::size_t pick = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    if (seen_[i - 1]) continue;
    x -= masses_.mass(i);
    if (x < 0.0L) {
      pick = i;
      break;
    }
  }
  if (pick == 0) {
    if (closed) {
      // Rounding pushed x past the last unseen atom.
      for (std::size_t i = k; i >= 1; --i)
        if (!seen_[i - 1]) {
          pick = i;
          break;
        }
    } else {
      const double tk = masses_.tail(k);
      double r = tk > 0.0 ? static_cast<double>(x / tk) : 0.5;
      r = std::clamp(r, 0.0, std::nextafter(1.0, 0.0));
      pick = walk_tail(masses_, k + 1, r, [](std::size_t) {});
    }
  }
  if (seen_.size() < masses_.materialized()) seen_.resize(masses_.materialized(), 0);
  seen_[pick - 1] = 1;
  ++distinct_;
  return pick;
}

// ---------------------------------------------------------------------------

BiasedPpy::BiasedPpy(const Driver& driver, Rng& rng, std::size_t initial_window)
    : masses_(driver, rng), rng_(&rng) {
  for (std::size_t i = 1; i <= initial_window; ++i) {
    if (i > 1 && masses_.exhausted_at(i - 1)) break;
    heap_.push({std::log(rng_->exponential()) - masses_.log_mass(i), i});
    window_ = i;
  }
  const double lt = masses_.log_tail(window_);
  log_tau_ = lt == -kInf ? kInf : std::log(rng_->exponential()) - lt;
}

std::uint64_t BiasedPpy::next() {
  if (!heap_.empty() && (heap_.top().key < log_tau_ || log_tau_ == kInf)) {
    const auto top = heap_.top();
    heap_.pop();
    return top.index;
  }
  if (log_tau_ == kInf) throw std::out_of_range("finite support exhausted");
  // The tail minimum is next: locate its argmin j; indices skipped over are
  // conditioned to exceed τ, which by memorylessness adds a fresh
  // exponential to τ.
  const double tau = log_tau_;
  const std::size_t j = walk_tail(masses_, window_ + 1, rng_->uniform(), [&](std::size_t i) {
    heap_.push({log_add_exp(tau, std::log(rng_->exponential()) - masses_.log_mass(i)), i});
  });
  window_ = j;
  const double lt = masses_.log_tail(j);
  log_tau_ = lt == -kInf ? kInf : log_add_exp(tau, std::log(rng_->exponential()) - lt);
  return j;
}

BiasedSample sample_pbiased_sequential(const Driver& driver, std::size_t n, Rng& rng,
                                       std::uint64_t draw_budget) {
  BiasedSequential s(driver, rng, draw_budget);
  std::vector<std::uint64_t> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) images.push_back(s.next());
  return {PermPrefix::trusted(std::move(images)), s.draws(), s.window()};
}

BiasedSample sample_pbiased_ppy(const Driver& driver, std::size_t n, Rng& rng,
                                std::size_t initial_window) {
  BiasedPpy s(driver, rng, initial_window);
  std::vector<std::uint64_t> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) images.push_back(s.next());
  return {PermPrefix::trusted(std::move(images)), 0, s.window()};
}

// ---------------------------------------------------------------------------

WkProcess::WkProcess(const Driver& driver, Rng& rng) : masses_(driver, rng), rng_(&rng) {}

std::uint64_t WkProcess::step() {
  const bool closed = j_ > 0 && masses_.exhausted_at(j_);
  long double total = closed ? 0.0L : masses_.tail(j_);
  for (auto i : open_) total += masses_.mass(i);
  if (!(total > 0.0L)) throw std::out_of_range("interval process: no mass left");
  long double x = rng_->uniform() * total;
  for (std::size_t idx = 0; idx < open_.size(); ++idx) {
    x -= masses_.mass(open_[idx]);
    if (x < 0.0L || (closed && idx + 1 == open_.size())) {
      const std::size_t box = open_[idx];
      open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(idx));
      return box;
    }
  }
  const double tj = masses_.tail(j_);
  double r = tj > 0.0 ? static_cast<double>(x / tj) : 0.5;
  r = std::clamp(r, 0.0, std::nextafter(1.0, 0.0));
  j_ = walk_tail(masses_, j_ + 1, r, [&](std::size_t i) { open_.push_back(i); });
  return j_;
}

WkTrajectory wk_run(const Driver& driver, std::size_t steps, Rng& rng) {
  WkProcess w(driver, rng);
  WkTrajectory t;
  for (std::size_t k = 1; k <= steps; ++k) {
    t.boxes.push_back(w.step());
    t.interval_count.push_back(w.interval_count());
    t.single.push_back(w.single_interval());
    if (t.first_component == 0 && w.single_interval()) t.first_component = k;
  }
  return t;
}

WkTrajectory wk_interval_process(const Driver& driver, Rng& rng, std::size_t max_steps) {
  WkProcess w(driver, rng);
  WkTrajectory t;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    t.boxes.push_back(w.step());
    t.interval_count.push_back(w.interval_count());
    t.single.push_back(w.single_interval());
    if (w.single_interval()) {
      t.first_component = k;
      break;
    }
  }
  return t;
}

}  // namespace regenperm
