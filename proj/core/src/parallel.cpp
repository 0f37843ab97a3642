#include "regenperm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "regenperm/error.hpp"

namespace regenperm {

BatchSums run_batches(const RunConfig& cfg, std::size_t columns, const BatchBody& body) {
  if (cfg.batches == 0) throw ConfigError("batches must be >= 1", "batches");
  if (cfg.workers == 0) throw ConfigError("workers must be >= 1", "workers");
  const std::uint64_t nb = std::max<std::uint64_t>(1, std::min<std::uint64_t>(cfg.batches, cfg.samples));
  BatchSums sums(nb, std::vector<double>(columns, 0.0));
  std::vector<std::exception_ptr> errors(nb);
  std::atomic<std::uint64_t> next{0};
  const std::uint64_t base = cfg.samples / nb, extra = cfg.samples % nb;

  auto work = [&] {
    for (std::uint64_t b = next++; b < nb; b = next++) {
      try {
        Rng rng = Rng::stream(cfg.seed, b);
        body(rng, base + (b < extra ? 1 : 0), sums[b]);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  const unsigned nw = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, nb));
  if (nw <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < nw; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return sums;
}

Estimate batch_ratio(const BatchSums& sums, std::size_t num, std::size_t den) {
  long double a = 0.0L, c = 0.0L;
  for (const auto& s : sums) {
    a += s.at(num);
    c += s.at(den);
  }
  if (c == 0.0L) return {std::nan(""), std::nan("")};
  const long double r = a / c;
  const std::size_t nb = sums.size();
  if (nb < 2) return {static_cast<double>(r), 0.0};
  long double ss = 0.0L;
  for (const auto& s : sums) {
    const long double res = s[num] - r * s[den];
    ss += res * res;
  }
  const long double var = ss * nb / (nb - 1.0L) / (c * c);
  return {static_cast<double>(r), static_cast<double>(std::sqrt(var))};
}

std::vector<double> batch_totals(const BatchSums& sums) {
  std::vector<double> t(sums.empty() ? 0 : sums.front().size(), 0.0);
  for (const auto& s : sums)
    for (std::size_t c = 0; c < t.size(); ++c) t[c] += s[c];
  return t;
}

}  // namespace regenperm
