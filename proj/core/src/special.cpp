#include "regenperm/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace regenperm {

double zeta(int k) {
  if (k < 2) throw std::domain_error("zeta: k must be >= 2, got " + std::to_string(k));
  // Head summed backwards, tail by Euler-Maclaurin at N = 32.
  constexpr int N = 32;
  const long double kk = k;
  long double head = 0.0L;
  for (int n = N - 1; n >= 1; --n) head += std::pow(static_cast<long double>(n), -kk);
  const long double nn = N;
  const long double nk = std::pow(nn, -kk);
  long double tail = nn * nk / (kk - 1.0L) + nk / 2.0L;
  // Bernoulli corrections B_2/2!, B_4/4!, B_6/6! times rising factorials.
  long double rising = kk;  // k
  long double pw = nk / nn;  // N^{-k-1}
  tail += rising * pw / 12.0L;
  rising *= (kk + 1.0L) * (kk + 2.0L);
  pw /= nn * nn;
  tail -= rising * pw / 720.0L;
  rising *= (kk + 3.0L) * (kk + 4.0L);
  pw /= nn * nn;
  tail += rising * pw / 30240.0L;
  return static_cast<double>(head + tail);
}

double digamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("digamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("digamma: pole at nonpositive integer");
  if (x < 0.0) {
    // Reflection Ψ(1-x) - Ψ(x) = π cot(πx).
    const double pi = std::numbers::pi;
    return digamma(1.0 - x) - pi / std::tan(pi * x);
  }
  long double acc = 0.0L;
  long double y = x;
  while (y < 8.0L) {
    acc -= 1.0L / y;
    y += 1.0L;
  }
  const long double inv2 = 1.0L / (y * y);
  long double series =
      inv2 * (1.0L / 12 -
              inv2 * (1.0L / 120 -
                      inv2 * (1.0L / 252 - inv2 * (1.0L / 240 - inv2 * (1.0L / 132)))));
  return static_cast<double>(acc + std::log(y) - 0.5L / y - series);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

}  // namespace regenperm
