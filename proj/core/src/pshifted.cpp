#include "regenperm/pshifted.hpp"

#include <algorithm>
#include <stdexcept>

#include "regenperm/error.hpp"
#include "regenperm/renewal.hpp"

namespace regenperm {

struct PShiftedBuilder::Index {
  virtual ~Index() = default;
  /// k-th smallest unused integer in [1, max], removed from the unused set.
  virtual std::uint64_t take_kth(std::uint64_t k) = 0;
  /// Marks v > max used; everything in (max, v) becomes unused.
  virtual void extend(std::uint64_t max, std::uint64_t v) = 0;
  virtual void reset() = 0;
};

namespace {

class GapRuns final : public PShiftedBuilder::Index {
 public:
  std::uint64_t take_kth(std::uint64_t k) override {
    for (std::size_t r = head_; r < runs_.size(); ++r) {
      auto& [start, len] = runs_[r];
      if (k > len) {
        k -= len;
        continue;
      }
      const std::uint64_t v = start + k - 1;
      if (k == 1) {
        ++start;
        --len;
      } else if (k == len) {
        --len;
      } else {
        const Run tail{v + 1, len - k};
        len = k - 1;
        runs_.insert(runs_.begin() + static_cast<std::ptrdiff_t>(r) + 1, tail);
      }
      if (runs_[r].second == 0) {
        if (r == head_) ++head_;
        else runs_.erase(runs_.begin() + static_cast<std::ptrdiff_t>(r));
      }
      compact();
      return v;
    }
    throw std::logic_error("gap index: rank exceeds unused count");
  }
  void extend(std::uint64_t max, std::uint64_t v) override {
    if (v > max + 1) runs_.push_back({max + 1, v - max - 1});
  }
  void reset() override {
    runs_.clear();
    head_ = 0;
  }

 private:
  using Run = std::pair<std::uint64_t, std::uint64_t>;
  void compact() {
    while (head_ < runs_.size() && runs_[head_].second == 0) ++head_;
    if (head_ > 64 && head_ * 2 > runs_.size()) {
      runs_.erase(runs_.begin(), runs_.begin() + static_cast<std::ptrdiff_t>(head_));
      head_ = 0;
    }
  }
  std::vector<Run> runs_;
  std::size_t head_ = 0;
};

class FenwickUsed final : public PShiftedBuilder::Index {
 public:
  static constexpr std::uint64_t kMaxCapacity = std::uint64_t{1} << 30;

  std::uint64_t take_kth(std::uint64_t k) override {
    // Smallest v with v - used(v) = k, by binary lifting.
    std::uint64_t pos = 0, rem = k;
    for (std::uint64_t step = top_bit(); step != 0; step >>= 1) {
      const std::uint64_t nxt = pos + step;
      if (nxt <= cap_ && step - tree_[nxt] < rem) {
        pos = nxt;
        rem -= step - tree_[nxt];
      }
    }
    const std::uint64_t v = pos + 1;
    mark(v);
    return v;
  }
  void extend(std::uint64_t, std::uint64_t v) override {
    if (v > cap_) grow(v);
    mark(v);
  }
  void reset() override {
    tree_.assign(cap_ + 1, 0);
    used_.clear();
  }

 private:
  std::uint64_t top_bit() const {
    std::uint64_t b = 1;
    while (b * 2 <= cap_) b *= 2;
    return cap_ == 0 ? 0 : b;
  }
  void mark(std::uint64_t v) {
    used_.push_back(v);
    for (std::uint64_t i = v; i <= cap_; i += i & (0 - i)) ++tree_[i];
  }
  void grow(std::uint64_t need) {
    std::uint64_t c = std::max<std::uint64_t>(cap_, 64);
    while (c < need) c *= 2;
    if (c > kMaxCapacity) throw std::length_error("fenwick psi index: image too large");
    cap_ = c;
    tree_.assign(cap_ + 1, 0);
    auto old = std::move(used_);
    used_.clear();
    for (auto u : old) mark(u);
  }
  std::uint64_t cap_ = 0;
  std::vector<std::uint32_t> tree_{0};
  std::vector<std::uint64_t> used_;
};

}  // namespace

PShiftedBuilder::PShiftedBuilder(PsiIndex index) {
  if (index == PsiIndex::fenwick) index_ = std::make_unique<FenwickUsed>();
  else index_ = std::make_unique<GapRuns>();
}
PShiftedBuilder::~PShiftedBuilder() = default;
PShiftedBuilder::PShiftedBuilder(PShiftedBuilder&&) noexcept = default;
PShiftedBuilder& PShiftedBuilder::operator=(PShiftedBuilder&&) noexcept = default;

std::uint64_t zigzag(std::uint64_t m) noexcept {
  if (m % 2 == 1) return m + 2;
  return m == 2 ? 1 : m - 2;
}

void PShiftedBuilder::push(Draw x) {
  if (in_zigzag()) {
    push_zigzag();
    return;
  }
  if (x.is_infinite()) {
    const std::size_t target = images_.size() + 1;
    images_.resize(last_split_);
    zigzag_from_ = last_split_ + 1;
    while (images_.size() < target) push_zigzag();
    return;
  }
  const std::uint64_t k = x.value();
  const std::uint64_t gap_count = max_ - images_.size();
  std::uint64_t v;
  if (k <= gap_count) {
    v = index_->take_kth(k);
  } else {
    v = max_ + (k - gap_count);
    index_->extend(max_, v);
    max_ = v;
  }
  images_.push_back(v);
  if (max_ == images_.size()) last_split_ = images_.size();
}

void PShiftedBuilder::push_zigzag() {
  if (!in_zigzag()) throw std::logic_error("push_zigzag before an infinite draw");
  const std::uint64_t base = zigzag_from_ - 1;
  const std::uint64_t j = images_.size() + 1 - base;
  images_.push_back(base + zigzag(j));
}

PermPrefix pshifted_from_draws(std::span<const Draw> xs, PsiIndex index) {
  PShiftedBuilder b(index);
  for (const auto& x : xs) b.push(x);
  return PermPrefix::trusted(std::move(b).take());
}

PermPrefix sample_pshifted(const DiscreteDist& p, std::size_t n, Rng& rng, PsiIndex index) {
  if (!(p.mass(1) > 0.0)) throw ConfigError("p-shifted sampling needs p_1 > 0");
  PShiftedBuilder b(index);
  while (b.size() < n) b.push(p.sample(rng));
  if (p.p_inf() > 0.0) {
    // Images since the last split stay provisional until the component
    // closes or an infinite draw replaces them with the zigzag.
    while (!b.at_split() && !b.in_zigzag()) b.push(p.sample(rng));
  }
  auto images = std::move(b).take();
  images.resize(n);
  return PermPrefix::trusted(std::move(images));
}

double pshifted_u(const DiscreteDist& p, std::size_t n) {
  long double u = 1.0L;
  for (std::size_t j = 1; j <= n; ++j) u *= p.cdf(j);
  return static_cast<double>(u);
}

std::vector<double> pshifted_u_sequence(const DiscreteDist& p, std::size_t n_max) {
  std::vector<double> u(n_max + 1);
  long double acc = 1.0L;
  u[0] = 1.0;
  for (std::size_t j = 1; j <= n_max; ++j) {
    acc *= p.cdf(j);
    u[j] = static_cast<double>(acc);
  }
  return u;
}

std::vector<double> pshifted_f_polynomials(std::span<const double> p, std::size_t n_max) {
  std::vector<double> u(n_max + 1);
  long double cdf = 0.0L, acc = 1.0L;
  u[0] = 1.0;
  for (std::size_t j = 1; j <= n_max; ++j) {
    if (j <= p.size()) cdf += p[j - 1];
    acc *= cdf;
    u[j] = static_cast<double>(acc);
  }
  return f_from_u(u);
}

std::vector<double> pshifted_f_polynomials(const DiscreteDist& p, std::size_t n_max) {
  return f_from_u(pshifted_u_sequence(p, n_max));
}

double pshifted_injection_mass(const DiscreteDist& p, std::span<const std::uint64_t> images) {
  if (!is_injective(images)) throw ConfigError("injection mass needs distinct positive images");
  long double m = 1.0L;
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::uint64_t below = 0;
    for (std::size_t j = 0; j < i; ++j) below += images[j] < images[i];
    m *= p.mass(images[i] - below);
  }
  return static_cast<double>(m);
}

MnTrajectory mn_chain_from_draws(std::span<const Draw> xs) {
  MnTrajectory t;
  std::uint64_t m = 0;
  for (std::size_t n = 1; n <= xs.size(); ++n) {
    if (t.absorbed_at == 0 && xs[n - 1].is_infinite()) t.absorbed_at = n;
    if (t.absorbed_at != 0) {
      t.m.push_back(0);
      continue;
    }
    m = std::max(m, xs[n - 1].value()) - 1;
    t.m.push_back(m);
  }
  return t;
}

MnTrajectory mn_chain(const DiscreteDist& p, std::size_t n_steps, Rng& rng) {
  std::vector<Draw> xs;
  xs.reserve(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) xs.push_back(p.sample(rng));
  return mn_chain_from_draws(xs);
}

std::vector<double> mn_invariant_law(const DiscreteDist& p, std::size_t i_max) {
  if (p.p_inf() > 0.0) throw UnsupportedModel("gap chain has no invariant law when p_inf > 0");
  long double u_inf = 1.0L;
  for (std::uint64_t j = 1; j < 1000000; ++j) {
    const double t = p.tail(j);
    u_inf *= 1.0L - t;
    if (t < 1e-19) break;
  }
  std::vector<double> law(i_max + 1);
  long double prod = 1.0L;  // Π_{j<=i} F(j)
  for (std::size_t i = 0; i <= i_max; ++i) {
    if (i > 0) prod *= 1.0L - p.tail(i);
    law[i] = static_cast<double>(p.tail(i) / prod * u_inf);
  }
  return law;
}

}  // namespace regenperm
