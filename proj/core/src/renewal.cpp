#include "regenperm/renewal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "regenperm/error.hpp"

namespace regenperm {

std::vector<double> f_from_u(std::span<const double> u) {
  if (u.empty() || u[0] != 1.0) throw ConfigError("renewal sequence must start with u_0 = 1");
  const std::size_t n_max = u.size() - 1;
  std::vector<double> f(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    long double s = u[n];
    for (std::size_t k = 1; k < n; ++k) s -= static_cast<long double>(f[k - 1]) * u[n - k];
    f[n - 1] = static_cast<double>(s);
  }
  return f;
}

std::vector<double> u_from_f(std::span<const double> f, std::size_t horizon) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0.0 || !std::isfinite(f[i]))
      throw ConfigError("first-passage entry f_" + std::to_string(i + 1) + " is negative");
  std::vector<double> u(horizon + 1, 0.0);
  u[0] = 1.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    long double s = 0.0L;
    const std::size_t kmax = std::min(n, f.size());
    for (std::size_t k = 1; k <= kmax; ++k) s += static_cast<long double>(f[k - 1]) * u[n - k];
    u[n] = static_cast<double>(s);
  }
  return u;
}

RenewalSeq RenewalSeq::from_u(std::vector<double> u) {
  RenewalSeq r;
  const auto f = f_from_u(u);
  r.u = std::move(u);
  r.f.assign(1, 0.0);
  r.f.insert(r.f.end(), f.begin(), f.end());
  return r;
}

RenewalSeq RenewalSeq::from_f(std::span<const double> f, std::size_t horizon) {
  RenewalSeq r;
  r.u = u_from_f(f, horizon);
  r.f.assign(horizon + 1, 0.0);
  for (std::size_t i = 0; i < f.size() && i < horizon; ++i) r.f[i + 1] = f[i];
  r.f_finite_support = f.size() <= horizon;
  return r;
}

const char* to_string(Recurrence r) noexcept {
  switch (r) {
    case Recurrence::transient: return "transient";
    case Recurrence::null_recurrent: return "null-recurrent";
    case Recurrence::positive_recurrent: return "positive-recurrent";
    case Recurrence::undetermined: return "undetermined";
  }
  return "undetermined";
}

Classification classify(const RenewalSeq& seq, double tol) {
  Classification c;
  std::size_t h = seq.horizon();
  if (!seq.f_finite_support) {
    // Coefficients recovered by deconvolution bottom out at rounding noise;
    // stop at the first one below that floor and extrapolate from there.
    constexpr double floor = 4096.0 * std::numeric_limits<double>::epsilon();
    for (std::size_t n = 1; n <= h && n < seq.f.size(); ++n)
      if (std::abs(seq.f[n]) < floor) {
        h = n - 1;
        break;
      }
  }
  long double s = 0.0L, m = 0.0L;
  for (std::size_t n = 1; n <= h && n < seq.f.size(); ++n) {
    s += seq.f[n];
    m += static_cast<long double>(n) * seq.f[n];
  }
  if (!seq.f_finite_support) {
    if (h < 8) return c;
    // Require geometric decay over the last few coefficients.
    double rho = 0.0;
    for (std::size_t n = h - 3; n <= h; ++n) {
      if (seq.f[n - 1] <= 0.0) {
        if (seq.f[n] != 0.0) return c;
        continue;
      }
      rho = std::max(rho, seq.f[n] / seq.f[n - 1]);
    }
    if (!(rho < 0.999)) {
      c.f_total = static_cast<double>(s);
      return c;
    }
    const long double fh = seq.f[h];
    const long double r = rho;
    const long double tail_mass = fh * r / (1.0L - r);
    if (tail_mass > tol) {
      c.f_total = static_cast<double>(s + tail_mass);
      return c;
    }
    s += tail_mass;
    m += fh * (static_cast<long double>(h) * r / (1.0L - r) + r / ((1.0L - r) * (1.0L - r)));
  }
  c.f_total = static_cast<double>(s);
  if (std::abs(static_cast<double>(s) - 1.0) <= tol) {
    c.kind = Recurrence::positive_recurrent;
    c.mu = static_cast<double>(m);
    c.u_inf = 1.0 / c.mu;
  } else if (s < 1.0L - tol) {
    c.kind = Recurrence::transient;
    c.mu = std::numeric_limits<double>::infinity();
  }
  return c;
}

DiscreteDist kaluza_to_p(std::span<const double> u, double tol) {
  if (u.size() < 2) throw ConfigError("Kaluza input needs u_0 and u_1");
  if (u[0] != 1.0) throw KaluzaViolation("u_0 must equal 1", 0);
  std::vector<double> ratio(u.size(), 1.0);
  for (std::size_t n = 1; n < u.size(); ++n) {
    if (!(u[n] > 0.0 && u[n] <= 1.0))
      throw KaluzaViolation("u_" + std::to_string(n) + " outside (0,1]", n);
    ratio[n] = u[n] / u[n - 1];
  }
  for (std::size_t n = 1; n + 1 < u.size(); ++n) {
    if (ratio[n] > ratio[n + 1] * (1.0 + tol))
      throw KaluzaViolation("log-convexity fails: u_" + std::to_string(n) + "^2 > u_" +
                                std::to_string(n - 1) + " u_" + std::to_string(n + 1),
                            n);
  }
  std::vector<double> p(u.size() - 1);
  p[0] = ratio[1];
  for (std::size_t n = 2; n < u.size(); ++n) p[n - 1] = std::max(0.0, ratio[n] - ratio[n - 1]);
  long double total = 0.0L;
  for (double x : p) total += x;
  const double p_inf = std::max(0.0, static_cast<double>(1.0L - total));
  return DiscreteDist::fixed(std::move(p), p_inf);
}

double power_series(std::span<const double> c, double z) {
  long double acc = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return static_cast<double>(acc);
}

}  // namespace regenperm
