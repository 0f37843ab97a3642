#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "regenperm/dist.hpp"
#include "regenperm/error.hpp"
#include "regenperm/hypothesis.hpp"

using namespace regenperm;

TEST(Dist, GeometricMassClosedForm) {
  const auto g = DiscreteDist::geometric(0.5);
  EXPECT_DOUBLE_EQ(g.mass(3), 0.125);
  EXPECT_DOUBLE_EQ(g.mass(1), 0.5);
  EXPECT_NEAR(g.cdf(3), 0.875, 1e-15);
}

TEST(Dist, FixedMassBeyondSupportIsZero) {
  const auto f = DiscreteDist::fixed({0.5, 0.5});
  EXPECT_EQ(f.mass(3), 0.0);
  EXPECT_EQ(f.support_max(), 2u);
}

TEST(Dist, FixedMassWithDefect) {
  const auto f = DiscreteDist::fixed({0.3, 0.2}, 0.5);
  EXPECT_DOUBLE_EQ(f.mass(2), 0.2);
  EXPECT_DOUBLE_EQ(f.p_inf(), 0.5);
  EXPECT_TRUE(std::isinf(f.mean()));
  EXPECT_NEAR(f.tail(2), 0.5, 1e-15);
}

TEST(Dist, RejectsBadConstruction) {
  EXPECT_THROW(DiscreteDist::geometric(0.0), ConfigError);
  EXPECT_THROW(DiscreteDist::geometric(1.0), ConfigError);
  EXPECT_THROW(DiscreteDist::fixed({0.5, 0.4}), ConfigError);
  EXPECT_THROW(DiscreteDist::fixed({-0.1, 1.1}), ConfigError);
}

TEST(Dist, CdfMonotoneAndBounded) {
  const auto f = DiscreteDist::fixed({0.1, 0.2, 0.3, 0.15}, 0.25);
  double prev = 0.0, partial = 0.0;
  for (std::uint64_t j = 1; j <= 10; ++j) {
    partial += f.mass(j);
    EXPECT_LE(partial, 1.0 + 1e-12);
    EXPECT_GE(f.cdf(j), prev);
    prev = f.cdf(j);
  }
  EXPECT_NEAR(prev, 0.75, 1e-15);
}

TEST(Dist, GeometricFirstValueFrequency) {
  const auto g = DiscreteDist::geometric(0.5);
  Rng rng(11);
  std::uint64_t ones = 0;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) ones += g.sample(rng).value() == 1;
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.002);
}

TEST(Dist, PointMassAlwaysOne) {
  const auto f = DiscreteDist::fixed({1.0});
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(f.sample(rng), Draw::finite(1));
}

TEST(Dist, DefectSamplesInfinity) {
  const auto f = DiscreteDist::fixed({0.5}, 0.5);
  Rng rng(5);
  std::uint64_t inf = 0;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) inf += f.sample(rng).is_infinite();
  EXPECT_NEAR(static_cast<double>(inf) / n, 0.5, 0.002);
  EXPECT_THROW((void)Draw::infinity().value(), std::logic_error);
}

namespace {
void expect_gof(const DiscreteDist& d, std::uint64_t seed) {
  constexpr std::size_t cells = 30;
  std::vector<std::uint64_t> obs(cells + 1, 0);
  std::vector<double> probs(cells);
  for (std::size_t i = 0; i < cells; ++i) probs[i] = d.mass(i + 1);
  Rng rng(seed);
  for (int i = 0; i < 1'000'000; ++i) {
    const Draw x = d.sample(rng);
    const std::uint64_t v = x.is_infinite() ? cells + 1 : x.value();
    ++obs[std::min<std::uint64_t>(v, cells + 1) - 1];
  }
  EXPECT_GT(chi_square_gof(obs, probs).p_value, 1e-3);
}
}  // namespace

TEST(Dist, ChiSquareAgainstMasses) {
  expect_gof(DiscreteDist::geometric(0.5), 21);
  expect_gof(DiscreteDist::fixed({0.5, 0.3, 0.2}), 22);
  expect_gof(DiscreteDist::fixed({0.1, 0.2, 0.3, 0.15}, 0.25), 23);
}

TEST(Dist, JsonRoundTrip) {
  const auto g = DiscreteDist::from_json(json::parse(R"({"kind":"geometric","q":0.5})"));
  EXPECT_EQ(g.kind(), DiscreteDist::Kind::geometric);
  EXPECT_DOUBLE_EQ(g.mass(2), 0.25);
  const auto f = DiscreteDist::from_json(json::parse(R"({"kind":"fixed","p":[0.3,0.2],"p_inf":0.5})"));
  EXPECT_DOUBLE_EQ(DiscreteDist::from_json(f.to_json()).p_inf(), 0.5);
  const Driver gem = driver_from_json(json::parse(R"({"kind":"gem","theta":1.0})"));
  ASSERT_TRUE(std::holds_alternative<StickBreaking>(gem));
  EXPECT_EQ(std::get<StickBreaking>(gem).kind(), StickBreaking::Kind::beta);
  try {
    (void)DiscreteDist::from_json(json::parse(R"({"kind":"geometric"})"), "model.driver");
    FAIL() << "missing q accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.driver"), std::string::npos);
  }
}

TEST(Sticks, ConstantFactorIsGeometric) {
  Rng rng(1);
  const auto s = stick_sample(StickBreaking::constant(0.5), 3, rng);
  EXPECT_DOUBLE_EQ(s.p[0], 0.5);
  EXPECT_DOUBLE_EQ(s.p[1], 0.25);
  EXPECT_DOUBLE_EQ(s.p[2], 0.125);
  EXPECT_DOUBLE_EQ(s.t[2], 0.125);
}

TEST(Sticks, ConstantReproducesGeometricMasses) {
  const double q = 0.3;
  Rng rng(2);
  const auto s = stick_sample(StickBreaking::constant(1.0 - q), 50, rng);
  const auto g = DiscreteDist::geometric(q);
  for (std::size_t i = 1; i <= 50; ++i) EXPECT_NEAR(s.p[i - 1], g.mass(i), 1e-15) << i;
}

TEST(Sticks, UniformFactorMean) {
  const auto s = StickBreaking::gem(1.0);
  Rng rng(4);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double w = s.sample_factor(rng);
    ASSERT_GT(w, 0.0);
    ASSERT_LT(w, 1.0);
    sum += w;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(Sticks, TelescopingIsExact) {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = stick_sample(StickBreaking::gem(0.7), 40, rng);
    double t_prev = 1.0;
    for (std::size_t i = 0; i < 40; ++i) {
      ASSERT_EQ(s.p[i] + s.t[i], t_prev);
      t_prev = s.t[i];
    }
  }
}

TEST(Sticks, CustomSamplerOutOfRangeRejected) {
  const auto bad = StickBreaking::custom([](Rng&) { return 1.5; }, "bad");
  Rng rng(1);
  EXPECT_ANY_THROW((void)bad.sample_factor(rng));
}
