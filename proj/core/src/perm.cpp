#include "regenperm/perm.hpp"

#include <algorithm>

#include "regenperm/error.hpp"

namespace regenperm {

PermPrefix::PermPrefix(std::vector<std::uint64_t> images) : images_(std::move(images)) {
  if (!is_injective(images_)) throw ConfigError("prefix images must be distinct positive integers");
}

PermPrefix PermPrefix::trusted(std::vector<std::uint64_t> images) noexcept {
  PermPrefix p;
  p.images_ = std::move(images);
  return p;
}

bool is_injective(std::span<const std::uint64_t> images) {
  std::vector<std::uint64_t> s(images.begin(), images.end());
  std::sort(s.begin(), s.end());
  if (!s.empty() && s.front() == 0) return false;
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_permutation(std::span<const std::uint64_t> images) {
  const std::size_t n = images.size();
  std::vector<char> seen(n + 1, 0);
  for (auto v : images) {
    if (v == 0 || v > n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::vector<std::size_t> splitting_times(std::span<const std::uint64_t> images) {
  std::vector<std::size_t> out;
  std::uint64_t mx = 0;
  for (std::size_t k = 1; k <= images.size(); ++k) {
    mx = std::max(mx, images[k - 1]);
    if (mx == k) out.push_back(k);
  }
  return out;
}

BlockStats decompose(std::span<const std::uint64_t> images) {
  BlockStats st;
  const std::size_t n = images.size();
  st.displacements.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    st.displacements[i] = static_cast<std::int64_t>(images[i]) - static_cast<std::int64_t>(i + 1);

  const auto splits = splitting_times(images);
  std::vector<char> visited(n + 1, 0);
  std::size_t start = 1;
  for (std::size_t s : splits) {
    Component c;
    c.first = start;
    c.last = s;
    for (std::size_t i = start; i <= s; ++i) {
      if (visited[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !visited[j]; j = images[j - 1]) {
        visited[j] = 1;
        ++len;
      }
      c.cycle_lengths.push_back(len);
    }
    st.components.push_back(std::move(c));
    start = s + 1;
  }
  st.incomplete_from = start <= n ? start : 0;
  return st;
}

std::uint64_t inversions(std::span<const std::uint64_t> pi) {
  std::uint64_t inv = 0;
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t j = i + 1; j < pi.size(); ++j) inv += pi[i] > pi[j];
  return inv;
}

bool is_indecomposable(std::span<const std::uint64_t> pi) {
  if (!is_permutation(pi)) throw ConfigError("is_indecomposable needs a permutation of [n]");
  if (pi.empty()) return false;
  const auto s = splitting_times(pi);
  return s.size() == 1;
}

void append_uniform_block(std::vector<std::uint64_t>& out, std::size_t n, std::uint64_t base,
                          Rng& rng) {
  const std::size_t off = out.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(base + i + 1);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(out[off + i - 1], out[off + j]);
  }
}

std::vector<std::uint64_t> uniform_permutation(std::size_t n, Rng& rng) {
  std::vector<std::uint64_t> out;
  out.reserve(n);
  append_uniform_block(out, n, 0, rng);
  return out;
}

}  // namespace regenperm
