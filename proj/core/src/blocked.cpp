#include "regenperm/blocked.hpp"

#include <cmath>

#include "regenperm/error.hpp"

namespace regenperm {

namespace {

std::uint64_t sample_length(const DiscreteDist& p, Rng& rng) { return p.sample(rng).value(); }

void check_proper(const DiscreteDist& p) {
  if (p.p_inf() > 0.0) throw UnsupportedModel("block-length law must be proper (p_inf = 0)");
}

}  // namespace

BlockedSample sample_blocks(const DiscreteDist& p, std::size_t min_length, Rng& rng) {
  check_proper(p);
  BlockedSample s;
  while (s.images.size() < min_length) {
    const std::uint64_t len = sample_length(p, rng);
    append_uniform_block(s.images, len, s.images.size(), rng);
    s.block_ends.push_back(s.images.size());
  }
  return s;
}

PermPrefix sample_blocked(const DiscreteDist& p, std::size_t n, Rng& rng) {
  auto s = sample_blocks(p, n, rng);
  s.images.resize(n);
  return PermPrefix::trusted(std::move(s.images));
}

std::uint64_t sample_size_biased(const DiscreteDist& p, Rng& rng) {
  check_proper(p);
  if (p.kind() == DiscreteDist::Kind::geometric) {
    // n (1-q)^2 q^{n-1}: sum of two geometric(1-q) on ℕ₊, minus one.
    return sample_length(p, rng) + sample_length(p, rng) - 1;
  }
  const double mu = p.mean();
  double u = rng.uniform() * mu;
  const std::uint64_t k = p.support_max();
  for (std::uint64_t n = 1; n <= k; ++n) {
    u -= static_cast<double>(n) * p.mass(n);
    if (u < 0.0) return n;
  }
  for (std::uint64_t n = k; n >= 1; --n)
    if (p.mass(n) > 0.0) return n;
  return k;
}

TwoSidedWindow sample_stationary_window(const DiscreteDist& p, std::int64_t lo, std::int64_t hi,
                                        Rng& rng) {
  if (lo > 0 || hi < 0 || lo > hi) throw ConfigError("window needs lo <= 0 <= hi");
  check_proper(p);
  if (!std::isfinite(p.mean())) throw UnsupportedModel("requires positive recurrence");
  TwoSidedWindow w;
  w.lo = lo;
  w.hi = hi;
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  w.images.assign(width, 0);
  w.renewal.assign(width, 0);

  std::vector<std::uint64_t> block;
  // Fills the block (a, a + len] and records its right end.
  auto place = [&](std::int64_t a, std::uint64_t len) {
    block.clear();
    append_uniform_block(block, len, 0, rng);
    const auto L = static_cast<std::int64_t>(len);
    const std::int64_t from = std::max(a + 1, lo), to = std::min(a + L, hi);
    for (std::int64_t z = from; z <= to; ++z)
      w.images[static_cast<std::size_t>(z - lo)] =
          a + static_cast<std::int64_t>(block[static_cast<std::size_t>(z - a - 1)]);
    if (a + L >= lo && a + L <= hi) w.renewal[static_cast<std::size_t>(a + L - lo)] = 1;
  };

  const std::uint64_t y0 = sample_size_biased(p, rng);
  const auto t0 = static_cast<std::int64_t>(rng.below(y0));
  const std::int64_t t_minus1 = t0 - static_cast<std::int64_t>(y0);
  place(t_minus1, y0);
  for (std::int64_t start = t0; start < hi;) {
    const std::uint64_t len = sample_length(p, rng);
    place(start, len);
    start += static_cast<std::int64_t>(len);
  }
  for (std::int64_t end = t_minus1; end >= lo;) {
    const std::uint64_t len = sample_length(p, rng);
    place(end - static_cast<std::int64_t>(len), len);
    end -= static_cast<std::int64_t>(len);
  }
  return w;
}

}  // namespace regenperm
