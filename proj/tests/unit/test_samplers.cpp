#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "regenperm/biased.hpp"
#include "regenperm/biased_formulas.hpp"
#include "regenperm/blocked.hpp"
#include "regenperm/blocked_exact.hpp"
#include "regenperm/combinatorics.hpp"
#include "regenperm/error.hpp"
#include "regenperm/hypothesis.hpp"
#include "regenperm/pshifted.hpp"
#include "regenperm/qhat.hpp"

using namespace regenperm;
using V = std::vector<std::uint64_t>;

namespace {

std::vector<Draw> draws(std::initializer_list<std::uint64_t> xs) {
  std::vector<Draw> out;
  for (auto x : xs) out.push_back(Draw::finite(x));
  return out;
}

bool split_at(std::span<const std::uint64_t> images, std::size_t k) {
  return *std::max_element(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(k)) == k;
}

// Every reported split k has max(Π_1..Π_k) = k, and the images are distinct.
void expect_well_formed(std::span<const std::uint64_t> images) {
  ASSERT_TRUE(is_injective(images));
  for (auto k : splitting_times(images)) ASSERT_TRUE(split_at(images, k));
}

struct Proportion {
  std::uint64_t hits = 0, n = 0;
  double p() const { return static_cast<double>(hits) / static_cast<double>(n); }
  double se() const { return std::sqrt(p() * (1.0 - p()) / static_cast<double>(n)); }
};

// Two-sample Kolmogorov-Smirnov on integer keys at significance 1e-3.
bool ks_agrees(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const std::uint64_t x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  const double crit = std::sqrt(-std::log(1e-3 / 2.0) / 2.0) * std::sqrt((n + m) / (n * m));
  return d < crit;
}

}  // namespace

TEST(PShifted, WorkedDrawStream) {
  for (auto idx : {PsiIndex::gap_runs, PsiIndex::fenwick}) {
    const auto p = pshifted_from_draws(draws({2, 1, 2, 3, 4, 1}), idx);
    EXPECT_EQ(std::vector<std::uint64_t>(p.images().begin(), p.images().end()), (V{2, 1, 4, 6, 8, 3}));
  }
}

TEST(PShifted, AllOnesIsIdentity) {
  const auto p = pshifted_from_draws(draws({1, 1, 1, 1, 1}));
  EXPECT_EQ(std::vector<std::uint64_t>(p.images().begin(), p.images().end()), (V{1, 2, 3, 4, 5}));
}

TEST(PShifted, IndexStructuresAgree) {
  Rng a(4), b(4);
  const auto g = DiscreteDist::geometric(0.2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = sample_pshifted(g, 300, a, PsiIndex::gap_runs);
    const auto y = sample_pshifted(g, 300, b, PsiIndex::fenwick);
    ASSERT_TRUE(std::ranges::equal(x.images(), y.images()));
    expect_well_formed(x.images());
  }
}

TEST(PShifted, SplitAtThreeFrequency) {
  const auto g = DiscreteDist::geometric(0.5);
  Rng rng(31);
  Proportion s;
  for (s.n = 0; s.n < 1'000'000; ++s.n) s.hits += split_at(sample_pshifted(g, 3, rng).images(), 3);
  EXPECT_NEAR(s.p(), 21.0 / 64.0, 0.0015);
}

TEST(PShifted, ProductLaw) {
  EXPECT_NEAR(pshifted_u(DiscreteDist::geometric(0.5), 3), 0.5 * 0.75 * 0.875, 1e-15);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(pshifted_u(DiscreteDist::point_mass(1), n), 1.0);
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p(6);
    for (auto& x : p) x = rng.uniform();
    const auto f = pshifted_f_polynomials(p, 3);
    EXPECT_DOUBLE_EQ(f[0], p[0]);
    EXPECT_NEAR(f[1], p[0] * p[1], 1e-15);
  }
}

TEST(PShifted, FormalOnesGiveIndecomposableCounts) {
  const std::vector<double> ones(6, 1.0);
  const auto f = pshifted_f_polynomials(ones, 6);
  const IndecomposableTable t(6);
  for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(f[n - 1], static_cast<double>(t(n, 1)));
}

TEST(PShifted, EmpiricalRenewalWithinFourSe) {
  const std::vector<DiscreteDist> drivers{DiscreteDist::geometric(0.3), DiscreteDist::geometric(0.7),
                                          DiscreteDist::fixed({0.5, 0.3, 0.2})};
  constexpr std::size_t n_max = 12;
  Rng rng(77);
  for (const auto& p : drivers) {
    std::vector<Proportion> u(n_max + 1);
    for (int r = 0; r < 200000; ++r) {
      const auto pre = sample_pshifted(p, n_max, rng);
      for (std::size_t n = 1; n <= n_max; ++n) {
        u[n].hits += split_at(pre.images(), n);
        ++u[n].n;
      }
    }
    for (std::size_t n = 1; n <= n_max; ++n)
      EXPECT_LT(std::abs(u[n].p() - pshifted_u(p, n)), 4.0 * u[n].se()) << n;
  }
}

TEST(PShifted, TransientZigzagCompletion) {
  const auto p = DiscreteDist::fixed({0.5}, 0.5);
  Rng rng(6);
  for (int rep = 0; rep < 500; ++rep) {
    const auto pre = sample_pshifted(p, 40, rng);
    expect_well_formed(pre.images());
  }
  PShiftedBuilder b;
  b.push(Draw::finite(1));
  b.push(Draw::infinity());
  ASSERT_TRUE(b.in_zigzag());
  for (int i = 0; i < 5; ++i) b.push_zigzag();
  expect_well_formed(b.images());
  EXPECT_EQ(b.images()[0], 1u);
}

TEST(MnChain, HandIteration) {
  const auto m = mn_chain_from_draws(draws({2, 1, 2, 3, 4, 1}));
  EXPECT_EQ(m.m, (V{1, 0, 1, 2, 3, 2}));
}

TEST(MnChain, PointMassStaysAtZero) {
  Rng rng(1);
  const auto m = mn_chain(DiscreteDist::point_mass(1), 100, rng);
  for (auto x : m.m) EXPECT_EQ(x, 0u);
}

TEST(MnChain, LongRunZeroFrequency) {
  const auto g = DiscreteDist::geometric(0.5);
  Rng rng(13);
  const std::size_t steps = 2'000'000;
  const auto m = mn_chain(g, steps, rng);
  std::vector<std::uint64_t> counts(13, 0);
  for (auto x : m.m) ++counts[std::min<std::uint64_t>(x, 12)];
  EXPECT_NEAR(static_cast<double>(counts[0]) / steps, 0.2887880951, 0.002);
  const auto pi = mn_invariant_law(g, 11);
  double s = 0.0;
  for (std::size_t i = 0; i <= 11; ++i) {
    EXPECT_NEAR(static_cast<double>(counts[i]) / steps, pi[i], 0.003) << i;
    s += pi[i];
  }
  EXPECT_LE(s, 1.0 + 1e-12);
}

TEST(Biased, SequentialFirstLaw) {
  const Driver g = DiscreteDist::geometric(0.5);
  Rng rng(3);
  std::vector<Proportion> first(6);
  for (int r = 0; r < 200000; ++r) {
    const auto v = sample_pbiased_sequential(g, 1, rng).perm.at(1);
    for (std::uint64_t k = 1; k <= 5; ++k) {
      first[k].hits += v == k;
      ++first[k].n;
    }
  }
  for (std::uint64_t k = 1; k <= 5; ++k)
    EXPECT_LT(std::abs(first[k].p() - std::ldexp(1.0, -static_cast<int>(k))), 3.0 * first[k].se()) << k;
}

TEST(Biased, SingleSymbol) {
  Rng rng(1);
  const Driver one = DiscreteDist::fixed({1.0});
  EXPECT_EQ(sample_pbiased_sequential(one, 1, rng).perm.at(1), 1u);
  EXPECT_EQ(sample_pbiased_ppy(one, 1, rng).perm.at(1), 1u);
}

TEST(Biased, SequentialGem1FirstSplit) {
  const Driver gem = StickBreaking::gem(1.0);
  Rng rng(21);
  Proportion s;
  for (s.n = 0; s.n < 1'000'000; ++s.n) s.hits += sample_pbiased_sequential(gem, 1, rng).perm.at(1) == 1;
  EXPECT_NEAR(s.p(), 0.5, 0.0015);
}

TEST(Biased, PpyTwoAtoms) {
  const Driver two = DiscreteDist::fixed({2.0 / 3.0, 1.0 / 3.0});
  Rng rng(8);
  Proportion s;
  for (s.n = 0; s.n < 1'000'000; ++s.n) s.hits += sample_pbiased_ppy(two, 1, rng).perm.at(1) == 1;
  EXPECT_LT(std::abs(s.p() - 2.0 / 3.0), 3.0 * s.se());
}

TEST(Biased, BudgetExhaustion) {
  const Driver g = DiscreteDist::geometric(0.01);
  Rng rng(1);
  EXPECT_THROW(sample_pbiased_sequential(g, 50, rng, 10), BudgetExceeded);
}

TEST(Biased, SequentialAndPpyAgreeGem1Ks) {
  const Driver gem = StickBreaking::gem(1.0);
  Rng a(41), b(42);
  std::vector<std::uint64_t> xs, ys;
  for (int r = 0; r < 100000; ++r) {
    const auto s = sample_pbiased_sequential(gem, 2, a).perm;
    const auto p = sample_pbiased_ppy(gem, 2, b).perm;
    xs.push_back(s.at(1) * 1'000'000 + std::min<std::uint64_t>(s.at(2), 999'999));
    ys.push_back(p.at(1) * 1'000'000 + std::min<std::uint64_t>(p.at(2), 999'999));
  }
  EXPECT_TRUE(ks_agrees(xs, ys));
}

TEST(Biased, SequentialAndPpyAgreeOnThreeImages) {
  const std::vector<Driver> drivers{StickBreaking::gem(1.0), DiscreteDist::geometric(0.5)};
  for (const auto& d : drivers) {
    Rng a(51), b(52);
    std::map<V, std::size_t> cell;
    std::vector<std::vector<std::uint64_t>> table(2);
    auto record = [&](int row, const PermPrefix& p) {
      V key{std::min<std::uint64_t>(p.at(1), 4), std::min<std::uint64_t>(p.at(2), 4),
            std::min<std::uint64_t>(p.at(3), 4)};
      const auto [it, fresh] = cell.emplace(key, cell.size());
      if (fresh)
        for (auto& t : table) t.push_back(0);
      ++table[row][it->second];
    };
    for (int r = 0; r < 100000; ++r) {
      record(0, sample_pbiased_sequential(d, 3, a, std::uint64_t{1} << 50).perm);
      record(1, sample_pbiased_ppy(d, 3, b).perm);
    }
    EXPECT_GT(chi_square_homogeneity(table).p_value, 1e-3);
  }
}

TEST(Biased, SamplerOutputsWellFormed) {
  Rng rng(5);
  const Driver gem = StickBreaking::gem(2.0);
  for (int r = 0; r < 300; ++r) {
    expect_well_formed(sample_pbiased_sequential(gem, 20, rng, std::uint64_t{1} << 50).perm.images());
    expect_well_formed(sample_pbiased_ppy(gem, 30, rng).perm.images());
  }
}

TEST(Wk, Gem1FirstComponentMoments) {
  const Driver gem = StickBreaking::gem(1.0);
  Rng rng(61);
  const int n = 1'000'000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto y = static_cast<double>(wk_interval_process(gem, rng).first_component);
    s += y;
    s2 += y * y;
  }
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  EXPECT_NEAR(mean, 3.0, 0.01);
  EXPECT_NEAR(var, 11.0, 0.15);
}

TEST(Wk, ConstantSticksFirstStep) {
  const Driver c = StickBreaking::constant(0.5);
  Rng rng(62);
  Proportion s;
  for (s.n = 0; s.n < 200000; ++s.n) s.hits += wk_interval_process(c, rng).first_component == 1;
  EXPECT_NEAR(s.p(), 0.5, 0.005);
}

TEST(Wk, BoxesFormBiasedPermutation) {
  const Driver gem = StickBreaking::gem(1.0);
  Rng rng(63);
  for (int r = 0; r < 200; ++r) {
    const auto t = wk_run(gem, 25, rng);
    expect_well_formed(t.boxes);
    for (std::size_t k = 1; k <= 25; ++k) ASSERT_EQ(t.single[k - 1] != 0, split_at(t.boxes, k)) << k;
  }
}

TEST(InclusionExclusion, GeometricFirstStep) {
  Rng rng(1);
  const Driver g = DiscreteDist::geometric(0.5);
  EXPECT_NEAR(sigma_nj(g, 1, 1, 0, rng).value, 0.5, 1e-15);
  EXPECT_NEAR(u_n_inclusion_exclusion(g, 1, 0, rng).value, 0.5, 1e-15);
  // First two distinct values {1,2}: 1/2 * 1/2 + 1/4 * 2/3.
  EXPECT_NEAR(u_n_inclusion_exclusion(g, 2, 0, rng).value, 5.0 / 12.0, 1e-14);
  for (std::size_t n = 1; n <= 10; ++n)
    EXPECT_NEAR(u_n_inclusion_exclusion(g, n, 0, rng).value,
                pta_integral(StickBreaking::constant(0.5), n, 1e-13, 0, rng).value, 1e-9)
        << n;
}

TEST(InclusionExclusion, Gem1SecondStep) {
  Rng rng(71);
  const Driver gem = StickBreaking::gem(1.0);
  const auto e = u_n_inclusion_exclusion(gem, 2, 1'000'000, rng);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(e.value, pi * pi / 6.0 - 1.25, 0.003);
  const auto u1 = u_n_inclusion_exclusion(gem, 1, 1'000'000, rng);
  EXPECT_NEAR(u1.value, 0.5, 0.003);
  EXPECT_THROW(u_n_inclusion_exclusion(gem, kSubsetEnumerationCap + 1, 10, rng), ConfigError);
}

TEST(PtaIntegral, ConstantSticks) {
  Rng rng(1);
  const auto e = pta_integral(StickBreaking::constant(0.5), 1, 1e-12, 0, rng);
  EXPECT_NEAR(e.value, 0.5, 1e-9);
  EXPECT_EQ(e.mc_se, 0.0);
  const auto e2 = pta_integral(StickBreaking::constant(0.5), 2, 1e-12, 0, rng);
  EXPECT_NEAR(e2.value, 5.0 / 12.0, 1e-9);
}

TEST(PtaIntegral, Gem1) {
  Rng rng(81);
  const Driver gem = StickBreaking::gem(1.0);
  const auto rec = gem1_u_recursion(3);
  EXPECT_NEAR(pta_integral(gem, 1, 1e-8, 100000, rng).value, 0.5, 0.002);
  EXPECT_NEAR(pta_integral(gem, 3, 1e-8, 100000, rng).value, rec[3], 0.005);
}

TEST(Blocked, PointMassIsIdentity) {
  Rng rng(1);
  const auto p = sample_blocked(DiscreteDist::point_mass(1), 20, rng);
  for (std::size_t i = 1; i <= 20; ++i) EXPECT_EQ(p.at(i), i);
}

TEST(Blocked, GeometricLengths) {
  const auto g = DiscreteDist::geometric(0.5);
  Rng rng(91);
  Proportion fixed2, split;
  for (int r = 0; r < 200000; ++r) {
    const auto s = sample_blocks(g, 60, rng);
    expect_well_formed(s.images);
    fixed2.hits += s.images[0] == 1 && s.images[1] == 2;
    split.hits += std::ranges::find(s.block_ends, std::size_t{50}) != s.block_ends.end();
    ++fixed2.n;
    ++split.n;
  }
  EXPECT_NEAR(fixed2.p(), 0.5, 0.005);
  EXPECT_NEAR(split.p(), 0.5, 0.005);
}

TEST(Stationary, PointMassWindow) {
  Rng rng(1);
  const auto w = sample_stationary_window(DiscreteDist::point_mass(1), -5, 5, rng);
  for (std::int64_t z = -5; z <= 5; ++z) {
    EXPECT_EQ(w.image(z), z);
    EXPECT_TRUE(w.renews(z));
  }
}

TEST(Stationary, GeometricRenewalAndFixedPoints) {
  const auto g = DiscreteDist::geometric(0.5);
  // Oracle: (1/μ) Σ_y p_y (y - |d|)_+ / y.
  auto law = [&](int d) {
    double s = 0.0;
    for (std::uint64_t y = 1; y < 200; ++y)
      if (y > static_cast<std::uint64_t>(std::abs(d))) s += g.mass(y) * static_cast<double>(y - std::abs(d)) / y;
    return s / 2.0;
  };
  Rng rng(101);
  Proportion renew, zero, one;
  for (int r = 0; r < 200000; ++r) {
    const auto w = sample_stationary_window(g, -4, 4, rng);
    renew.hits += w.renews(0);
    zero.hits += w.displacement(0) == 0;
    one.hits += w.displacement(0) == 1;
    ++renew.n;
    ++zero.n;
    ++one.n;
    if (r < 500) {
      // A flagged z closes a run whose images are exactly the run's positions.
      std::int64_t prev = -5;
      for (std::int64_t z = -4; z <= 4; ++z) {
        if (!w.renews(z)) continue;
        if (prev >= -4) {
          std::int64_t mx = prev + 1;
          for (std::int64_t x = prev + 1; x <= z; ++x) mx = std::max(mx, w.image(x));
          ASSERT_EQ(mx, z);
        }
        prev = z;
      }
    }
  }
  EXPECT_NEAR(renew.p(), 0.5, 0.005);
  EXPECT_NEAR(zero.p(), law(0), 0.005);
  EXPECT_NEAR(one.p(), law(1), 0.005);
  EXPECT_NEAR(UniformBlockExact(g).displacement(1), law(1), 1e-12);
}

TEST(Stationary, RejectsInfiniteMean) {
  Rng rng(1);
  EXPECT_THROW(sample_stationary_window(DiscreteDist::fixed({0.5}, 0.5), -2, 2, rng), UnsupportedModel);
}
