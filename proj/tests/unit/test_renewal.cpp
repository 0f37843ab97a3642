#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "regenperm/error.hpp"
#include "regenperm/pshifted.hpp"
#include "regenperm/qhat.hpp"
#include "regenperm/renewal.hpp"
#include "regenperm/special.hpp"

using namespace regenperm;
using boost::multiprecision::cpp_rational;

namespace {

// First-passage values by exact rational convolution.
std::vector<cpp_rational> f_oracle(const std::vector<cpp_rational>& u) {
  std::vector<cpp_rational> f(u.size(), 0);
  for (std::size_t n = 1; n < u.size(); ++n) {
    cpp_rational s = u[n];
    for (std::size_t k = 1; k < n; ++k) s -= f[k] * u[n - k];
    f[n] = s;
  }
  return f;
}

std::vector<double> to_double(const std::vector<cpp_rational>& r) {
  std::vector<double> out;
  for (const auto& x : r) out.push_back(static_cast<double>(x));
  return out;
}

}  // namespace

TEST(Renewal, DeterministicRenewal) {
  const std::vector<double> u{1, 1, 1, 1};
  const auto f = f_from_u(u);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], 1.0);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_EQ(f[2], 0.0);
}

TEST(Renewal, HandConvolution) {
  const std::vector<cpp_rational> u{1, cpp_rational(1, 2), cpp_rational(3, 4), cpp_rational(5, 8)};
  const auto oracle = f_oracle(u);
  EXPECT_EQ(oracle[1], cpp_rational(1, 2));
  EXPECT_EQ(oracle[2], cpp_rational(1, 2));
  EXPECT_EQ(oracle[3], 0);
  const auto f = f_from_u(to_double(u));
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_NEAR(f[n - 1], static_cast<double>(oracle[n]), 1e-15);
}

TEST(Renewal, GeometricShiftedFirstPassage) {
  const std::vector<cpp_rational> u{1, cpp_rational(1, 2), cpp_rational(3, 8), cpp_rational(21, 64)};
  const auto oracle = f_oracle(u);
  const auto f = f_from_u(to_double(u));
  EXPECT_DOUBLE_EQ(f[0], 0.5);
  EXPECT_DOUBLE_EQ(f[1], 0.125);
  EXPECT_NEAR(f[2], static_cast<double>(oracle[3]), 1e-15);
  const auto back = u_from_f(f, 3);
  for (std::size_t n = 0; n <= 3; ++n) EXPECT_NEAR(back[n], static_cast<double>(u[n]), 1e-12);
}

TEST(Renewal, RejectsBadInput) {
  EXPECT_THROW(f_from_u(std::vector<double>{0.9, 0.5}), ConfigError);
  EXPECT_THROW(u_from_f(std::vector<double>{0.5, -0.1}, 4), ConfigError);
}

TEST(Renewal, UFromFExamples) {
  const auto ones = u_from_f(std::vector<double>{1.0}, 6);
  for (double x : ones) EXPECT_EQ(x, 1.0);
  const auto u = u_from_f(std::vector<double>{0.5, 0.5}, 4);
  const std::vector<double> expect{1, 0.5, 0.75, 0.625, 0.6875};
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_DOUBLE_EQ(u[n], expect[n]);
}

TEST(Renewal, PolynomialsReproduceProduct) {
  const auto p = DiscreteDist::geometric(0.5);
  const auto f = pshifted_f_polynomials(p, 20);
  const auto u = u_from_f(f, 20);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_NEAR(u[n], pshifted_u(p, n), 1e-12) << n;
}

TEST(Renewal, RandomRoundTrip) {
  Rng rng(17);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t len = 1 + rng.below(64);
    std::vector<double> f(len);
    double s = 0.0;
    for (auto& x : f) s += (x = rng.uniform());
    for (auto& x : f) x /= s;
    const auto u = u_from_f(f, len);
    const auto g = f_from_u(u);
    for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(g[i] - f[i]));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Renewal, ClassifyFiniteSupport) {
  const std::vector<double> f{0.2, 0.3, 0.5};
  const auto c = classify(RenewalSeq::from_f(f, 50));
  EXPECT_EQ(c.kind, Recurrence::positive_recurrent);
  EXPECT_DOUBLE_EQ(c.mu, 0.2 + 0.6 + 1.5);
  const auto one = classify(RenewalSeq::from_f(std::vector<double>{1.0}, 10));
  EXPECT_EQ(one.kind, Recurrence::positive_recurrent);
  EXPECT_EQ(one.mu, 1.0);
}

TEST(Renewal, ClassifyGem1) {
  const auto c = classify(RenewalSeq::from_u(gem1_u_recursion(150)));
  EXPECT_EQ(c.kind, Recurrence::positive_recurrent);
  EXPECT_NEAR(c.u_inf, 1.0 / 3.0, 1e-9);
}

TEST(Renewal, ClassifyGeometricShifted) {
  long double prod = 1.0L;
  for (int j = 1; j < 200; ++j) prod *= 1.0L - std::pow(2.0L, -j);
  const auto c = classify(RenewalSeq::from_u(pshifted_u_sequence(DiscreteDist::geometric(0.5), 120)));
  EXPECT_EQ(c.kind, Recurrence::positive_recurrent);
  EXPECT_NEAR(c.u_inf, static_cast<double>(prod), 1e-9);
  EXPECT_NEAR(c.u_inf, 0.2887880951, 1e-9);
}

TEST(Renewal, ClassifyTransientAndUndetermined) {
  const auto t = classify(RenewalSeq::from_f(std::vector<double>{0.3, 0.2}, 20));
  EXPECT_EQ(t.kind, Recurrence::transient);
  const auto short_h = classify(RenewalSeq::from_u({1.0, 0.5, 0.4}));
  EXPECT_EQ(short_h.kind, Recurrence::undetermined);
}

TEST(Kaluza, PowerSequence) {
  std::vector<double> u(12);
  for (std::size_t n = 0; n < u.size(); ++n) u[n] = std::pow(0.7, static_cast<double>(n));
  const auto p = kaluza_to_p(u);
  EXPECT_NEAR(p.mass(1), 0.7, 1e-12);
  for (std::size_t i = 2; i < u.size(); ++i) EXPECT_NEAR(p.mass(i), 0.0, 1e-12);
  EXPECT_NEAR(p.p_inf(), 0.3, 1e-12);
}

TEST(Kaluza, InvertsGeometricProduct) {
  const auto g = DiscreteDist::geometric(0.5);
  const auto u = pshifted_u_sequence(g, 30);
  const auto p = kaluza_to_p(u);
  for (std::size_t i = 1; i <= 30; ++i) EXPECT_NEAR(p.mass(i), g.mass(i), 1e-12) << i;
}

TEST(Kaluza, RejectsWithIndex) {
  try {
    (void)kaluza_to_p(std::vector<double>{1.0, 0.9, 0.5});
    FAIL() << "accepted a non-Kaluza sequence";
  } catch (const KaluzaViolation& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Kaluza, RandomRoundTrip) {
  Rng rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t len = 2 + rng.below(31);
    std::vector<double> r(len);
    for (auto& x : r) x = rng.uniform();
    std::sort(r.begin(), r.end());
    std::vector<double> u{1.0};
    for (std::size_t n = 1; n < len; ++n) u.push_back(u.back() * r[n]);
    const auto p = kaluza_to_p(u);
    const auto back = pshifted_u_sequence(p, len - 1);
    for (std::size_t n = 0; n < len; ++n) ASSERT_NEAR(back[n], u[n], 1e-10) << rep << ' ' << n;
  }
}

TEST(Special, Zeta) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(zeta(2), pi * pi / 6.0, 1e-13);
  EXPECT_NEAR(zeta(4), std::pow(pi, 4) / 90.0, 1e-13);
  // Direct sum plus integral tail with the half-term correction.
  long double s = 0.0L;
  const int N = 200000;
  for (int n = N; n >= 1; --n) s += 1.0L / (static_cast<long double>(n) * n * n);
  s += 1.0L / (2.0L * N * N) - 1.0L / (2.0L * N * N * N);
  EXPECT_NEAR(zeta(3), static_cast<double>(s), 1e-13);
  EXPECT_NEAR(zeta(3), 1.2020569032, 1e-10);
  EXPECT_THROW(zeta(1), std::domain_error);
  // At k = 2 the upper end fails (ζ(2) - 1 = 0.645); beyond k = 30 doubles
  // cannot resolve ζ(k) - 1 - 2^{-k}.
  EXPECT_GT(zeta(2) - 1.0, 0.25);
  for (int k = 3; k <= 30; ++k) {
    EXPECT_GT(zeta(k) - 1.0, std::ldexp(1.0, -k));
    EXPECT_LT(zeta(k) - 1.0, std::ldexp(1.0, 1 - k));
  }
}

TEST(Special, Digamma) {
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-12);
  EXPECT_NEAR(digamma(1.0), -0.5772156649, 1e-10);
  EXPECT_NEAR(digamma(2.0), 1.0 - kEulerGamma, 1e-12);
  for (double x = 0.05; x <= 10.0; x += 0.05) EXPECT_NEAR(digamma(x), boost::math::digamma(x), 1e-10) << x;
  EXPECT_NEAR(digamma(-0.5), boost::math::digamma(-0.5), 1e-10);
  EXPECT_THROW(digamma(0.0), std::domain_error);
  EXPECT_THROW(digamma(-2.0), std::domain_error);
}

TEST(Special, LogGamma) {
  EXPECT_NEAR(log_gamma(4.0), std::log(6.0), 1e-14);
  for (double x = 0.05; x <= 10.0; x += 0.05) EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-10) << x;
  EXPECT_THROW(log_gamma(0.0), std::domain_error);
}

TEST(Renewal, PowerSeries) {
  const std::vector<double> c{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(power_series(c, 0.5), 1.0 + 1.0 + 0.75);
}
