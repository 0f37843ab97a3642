#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "regenperm/error.hpp"
#include "regenperm/hypothesis.hpp"
#include "regenperm/qhat.hpp"
#include "regenperm/special.hpp"

using namespace regenperm;

namespace {

// (x)_j by direct product.
double rising(double x, std::uint64_t j) {
  double r = 1.0;
  for (std::uint64_t i = 0; i < j; ++i) r *= x + static_cast<double>(i);
  return r;
}

}  // namespace

TEST(Kernel, Gem1Values) {
  const auto k = QhatKernel::gem(1.0);
  EXPECT_DOUBLE_EQ(k(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(k(1, 2), 1.0 / 6.0);
  for (std::uint64_t m = 1; m <= 5; ++m)
    for (std::uint64_t n = m; n <= 20; ++n)
      EXPECT_NEAR(k(m, n), static_cast<double>(m) / (n * (n + 1.0)), 1e-15);
  EXPECT_THROW((void)k(3, 2), ConfigError);
}

TEST(Kernel, Gem2Pochhammer) {
  const auto k = QhatKernel::gem(2.0);
  EXPECT_NEAR(k(1, 1), 2.0 / 3.0, 1e-15);
  for (std::uint64_t m = 1; m <= 4; ++m)
    for (std::uint64_t n = m; n <= 12; ++n)
      EXPECT_NEAR(k(m, n), rising(m, n - m) * rising(2.0, m) / rising(3.0, n), 1e-13);
}

TEST(Kernel, RowsSumToOne) {
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto k = QhatKernel::gem(theta);
    for (std::uint64_t m : {1u, 2u, 5u}) {
      const std::uint64_t N = 2000;
      long double s = 0.0L, prev = 0.0L;
      for (std::uint64_t n = m; n <= N; ++n) {
        s += k(m, n);
        ASSERT_GE(s, prev);
        prev = s;
      }
      EXPECT_NEAR(static_cast<double>(s) + k.row_tail(m, N), 1.0, 1e-10) << theta << ' ' << m;
    }
  }
  const auto c = QhatKernel::constant(0.5);
  long double s = 0.0L;
  for (std::uint64_t n = 3; n <= 200; ++n) s += c(3, n);
  EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-10);
}

TEST(Kernel, GeneralMatchesGem) {
  Rng rng(3);
  const auto general = QhatKernel::general(StickBreaking::custom(
                                               [](Rng& r) { return 1.0 - std::sqrt(r.uniform()); }, "beta12"),
                                           400000, rng);
  const auto gem = QhatKernel::gem(2.0);
  for (std::uint64_t n = 1; n <= 6; ++n) EXPECT_NEAR(general(1, n), gem(1, n), 0.003) << n;
}

TEST(IncreasingRuns, Gem1ExactSums) {
  const auto r = gem_u_exact(1.0, 4, 1e-10);
  EXPECT_EQ(r[0].value, 1.0);
  EXPECT_EQ(r[1].value, 0.5);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(r[2].value, pi * pi / 6.0 - 1.25, 1e-9);
  EXPECT_NEAR(r[2].value, 0.39493406, 1e-8);
  for (const auto& x : r) {
    EXPECT_LE(x.lower, x.value);
    EXPECT_GE(x.upper, x.value);
    EXPECT_LE(x.upper - x.lower, 2e-10);
  }
}

TEST(IncreasingRuns, MonteCarloWithinFourSe) {
  Rng rng(5);
  const auto rec = gem1_u_recursion(6);
  const auto mc = u_k_via_increasing_runs(QhatKernel::gem(1.0), 6, 1'000'000, rng);
  EXPECT_EQ(mc[0].value, 1.0);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_LT(std::abs(mc[k].value - rec[k]), 4.0 * mc[k].se) << k;
}

TEST(Gem1, RoutesAgree) {
  const auto rec = gem1_u_recursion(30);
  double worst = 0.0;
  for (std::size_t k = 2; k <= 12; ++k) worst = std::max(worst, std::abs(rec[k] - gem1_u_series(k)));
  EXPECT_LT(worst, 1e-9);
  EXPECT_NEAR(rec[30], 1.0 / 3.0, 1e-9);
  EXPECT_GT(rec[30], 1.0 / 3.0);
  for (std::size_t k = 1; k <= 30; ++k) {
    EXPECT_LT(rec[k], rec[k - 1]);
    EXPECT_GT(rec[k], 1.0 / 3.0);
  }
}

TEST(Gem1, GeneratingFunction) {
  const auto rec = gem1_u_recursion(60);
  long double s = 0.0L;
  for (std::size_t k = 60; k + 1 > 0; --k) s = s * 0.5L + rec[k];
  EXPECT_NEAR(gem1_U_closed_form(0.5), static_cast<double>(s), 1e-8);
  EXPECT_THROW(gem1_U_closed_form(1.0), ConfigError);
}

TEST(Gem1, FirstComponentMoments) {
  const auto m = gem1_first_component_moments();
  EXPECT_NEAR(m.mean, 3.0, 1e-6);
  EXPECT_NEAR(m.variance, 11.0, 1e-6);
}

TEST(GemUinfty, ClosedForms) {
  EXPECT_NEAR(gem_uinfty(1.0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(gem_uinfty(2.0), 0.1, 1e-14);
  EXPECT_NEAR(gem_uinfty(1e-9), 1.0, 1e-8);
  for (double theta : {0.5, 1.0, 2.0}) {
    const double oracle = boost::math::tgamma(theta + 2) * boost::math::tgamma(theta + 1) /
                          boost::math::tgamma(2 * theta + 2);
    EXPECT_NEAR(gem_uinfty(theta), oracle, 1e-14);
    EXPECT_NEAR(gem_uinfty_product(theta), gem_uinfty(theta), 1e-10);
  }
  EXPECT_THROW(gem_uinfty(0.0), ConfigError);
}

TEST(Occupation, Gem1Laws) {
  Rng rng(9);
  const auto k = QhatKernel::gem(1.0);
  const std::uint64_t chains = 200000;
  const auto r = occupation_times(k, StartLaw::gem1_entrance, 1, 3, 1u << 20, chains, rng);
  const auto used = static_cast<double>(r.chains);
  EXPECT_NEAR(static_cast<double>(r.histogram[1][0]) / used, 0.5, 0.005);
  for (std::size_t j = 1; j <= 3; ++j) {
    // geometric(j/(j+1)) on {0, 1, ...}: P(G = g) = (j/(j+1)) (1/(j+1))^g.
    std::vector<double> probs;
    const double s = static_cast<double>(j) / (j + 1.0);
    for (std::size_t g = 0; g < r.g_cap; ++g) probs.push_back(s * std::pow(1.0 - s, static_cast<double>(g)));
    EXPECT_GT(chi_square_gof(r.histogram[j], probs).p_value, 1e-3) << j;
  }
  // Independence of neighbours on cells pooled at g >= 3.
  for (std::size_t j = 1; j + 1 <= 3; ++j) {
    std::vector<std::vector<std::uint64_t>> pooled(4, std::vector<std::uint64_t>(4, 0));
    for (std::size_t a = 0; a <= r.g_cap; ++a)
      for (std::size_t b = 0; b <= r.g_cap; ++b) pooled[std::min<std::size_t>(a, 3)][std::min<std::size_t>(b, 3)] += r.joint[j][a][b];
    EXPECT_GT(chi_square_homogeneity(pooled).p_value, 1e-3) << j;
  }
}

TEST(Occupation, IncreasingForever) {
  Rng rng(10);
  const auto k = QhatKernel::gem(1.0);
  const auto from2 = increasing_forever(k, StartLaw::fixed, 2, 100000, 100000, rng);
  EXPECT_NEAR(from2.value, 0.5, 0.005);
  const auto entrance = increasing_forever(k, StartLaw::gem1_entrance, 1, 100000, 100000, rng);
  EXPECT_NEAR(entrance.value, 0.5, 0.005);
}

TEST(Occupation, EntranceLaw) {
  for (std::uint64_t m = 1; m <= 10; ++m) EXPECT_NEAR(gem_entrance_law(1.0, m), 1.0 / (m * (m + 1.0)), 1e-12);
  double s = 0.0;
  for (std::uint64_t m = 1; m <= 20000; ++m) s += gem_entrance_law(2.0, m);
  EXPECT_NEAR(s, 1.0, 1e-3);
}

TEST(Paths, ConstantFactorMeanIncrement) {
  Rng rng(11);
  const auto k = QhatKernel::constant(0.5);
  double s = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) s += static_cast<double>(k.sample_next(1, rng) - 1);
  EXPECT_NEAR(s / n, 1.0, 0.01);
}

TEST(Paths, Gem1OneStepLaw) {
  Rng rng(12);
  const auto k = QhatKernel::gem(1.0);
  constexpr std::size_t cells = 40;
  std::vector<std::uint64_t> obs(cells + 1, 0);
  std::vector<double> probs;
  for (std::uint64_t n = 1; n <= cells; ++n) probs.push_back(k(1, n));
  for (int i = 0; i < 200000; ++i) ++obs[std::min<std::uint64_t>(k.sample_next(1, rng), cells + 1) - 1];
  EXPECT_GT(chi_square_gof(obs, probs).p_value, 1e-3);
}

TEST(Paths, Nondecreasing) {
  Rng rng(13);
  for (double theta : {0.5, 1.0, 3.0}) {
    const auto path = qhat_sample_path(QhatKernel::gem(theta), 1, 200, rng);
    for (std::size_t i = 1; i < path.size(); ++i) ASSERT_LE(path[i - 1], path[i]);
  }
}
