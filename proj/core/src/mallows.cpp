#include "regenperm/mallows.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "regenperm/error.hpp"
#include "regenperm/perm.hpp"

namespace regenperm {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("Mallows q must lie in (0,1)");
}

}  // namespace

double mallows_qfactorial(std::size_t n, double q) {
  check_q(q);
  long double z = 1.0L, level = 0.0L, pw = 1.0L;
  for (std::size_t j = 1; j <= n; ++j) {
    level += pw;  // Σ_{i<=j} q^{i-1}
    pw *= q;
    z *= level;
  }
  return static_cast<double>(z);
}

double mallows_mass(std::span<const std::uint64_t> pi, double q) {
  check_q(q);
  if (!is_permutation(pi)) throw ConfigError("mallows_mass needs a permutation of [n]");
  return std::pow(q, static_cast<double>(inversions(pi))) / mallows_qfactorial(pi.size(), q);
}

double mallows_indecomposable_partition(std::size_t n, double q) {
  check_q(q);
  if (n > kMallowsEnumerationCap)
    throw ConfigError("Z-dagger enumeration is capped at n = " +
                      std::to_string(kMallowsEnumerationCap));
  if (n == 0) return 0.0;
  std::vector<long double> qpow(n * (n - 1) / 2 + 1);
  qpow[0] = 1.0L;
  for (std::size_t i = 1; i < qpow.size(); ++i) qpow[i] = qpow[i - 1] * q;
  long double z = 0.0L;
  for_each_permutation(n, [&](std::span<const std::uint64_t> pi) {
    std::uint64_t mx = 0;
    for (std::size_t k = 1; k < pi.size(); ++k) {
      mx = std::max(mx, pi[k - 1]);
      if (mx == k) return;
    }
    z += qpow[inversions(pi)];
  });
  return static_cast<double>(z);
}

double mallows_block_probability(std::size_t n, double q) {
  return std::pow(1.0 - q, static_cast<double>(n)) * mallows_qfactorial(n, q);
}

double mallows_first_split(std::size_t n, double q) {
  return std::pow(1.0 - q, static_cast<double>(n)) * mallows_indecomposable_partition(n, q);
}

}  // namespace regenperm
