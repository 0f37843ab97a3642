#include "regenperm/realize.hpp"

#include <algorithm>

#include "regenperm/biased.hpp"
#include "regenperm/blocked.hpp"
#include "regenperm/error.hpp"
#include "regenperm/pshifted.hpp"

namespace regenperm {

PermPrefix sample_prefix(const ModelSpec& model, std::size_t n, Rng& rng) {
  switch (model.family) {
    case Family::blocked:
      return sample_blocked(*model.fixed_driver(), n, rng);
    case Family::p_shifted:
      return sample_pshifted(*model.fixed_driver(), n, rng);
    case Family::p_biased:
      if (model.biased_method == BiasedMethod::sequential)
        return sample_pbiased_sequential(model.driver, n, rng, model.draw_budget).perm;
      return sample_pbiased_ppy(model.driver, n, rng).perm;
  }
  throw UnsupportedModel("unknown family");
}

namespace {

template <class Next>
std::vector<std::uint64_t> run_to_split(Next&& next, std::size_t n, std::size_t max_length) {
  std::vector<std::uint64_t> images;
  std::uint64_t max = 0;
  for (;;) {
    if (images.size() >= max_length) throw BudgetExceeded("no split before the length cap");
    const std::uint64_t v = next();
    images.push_back(v);
    max = std::max(max, v);
    if (images.size() >= n && max == images.size()) return images;
  }
}

}  // namespace

std::vector<std::uint64_t> sample_through_split(const ModelSpec& model, std::size_t n, Rng& rng,
                                                std::size_t max_length) {
  switch (model.family) {
    case Family::blocked: {
      auto s = sample_blocks(*model.fixed_driver(), n, rng);
      if (s.images.size() > max_length) throw BudgetExceeded("block passes the length cap");
      return std::move(s.images);
    }
    case Family::p_shifted: {
      const DiscreteDist& p = *model.fixed_driver();
      PShiftedBuilder b;
      for (;;) {
        if (b.size() >= max_length) throw BudgetExceeded("no split before the length cap");
        b.push(p.sample(rng));
        if (b.in_zigzag()) throw UnsupportedModel("requires positive recurrence");
        if (b.size() >= n && b.at_split()) return std::move(b).take();
      }
    }
    case Family::p_biased:
      if (model.biased_method == BiasedMethod::sequential) {
        BiasedSequential s(model.driver, rng, model.draw_budget);
        return run_to_split([&] { return s.next(); }, n, max_length);
      } else {
        BiasedPpy s(model.driver, rng);
        return run_to_split([&] { return s.next(); }, n, max_length);
      }
  }
  throw UnsupportedModel("unknown family");
}

std::vector<std::size_t> cycles_by_least_element(const std::vector<std::uint64_t>& perm) {
  const std::size_t L = perm.size();
  std::vector<std::size_t> out(L, 0);
  std::vector<char> seen(L, 0);
  for (std::size_t i = 0; i < L; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t k = i; !seen[k]; k = perm[k] - 1) {
      seen[k] = 1;
      ++len;
    }
    out[i] = len;
  }
  return out;
}

}  // namespace regenperm
