#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "regenperm/dist.hpp"

namespace regenperm {

/// Renewal probabilities u_0..u_H (u_0 = 1) with first-passage
/// probabilities f_1..f_H, linked by u_n = Σ_{k=1}^n f_k u_{n-k}.
struct RenewalSeq {
  std::vector<double> u;  // u[0] = 1
  std::vector<double> f;  // f[0] = 0 placeholder, f[n] = f_n
  /// True when f is known to vanish beyond the horizon.
  bool f_finite_support = false;

  std::size_t horizon() const noexcept { return u.empty() ? 0 : u.size() - 1; }

  static RenewalSeq from_u(std::vector<double> u);
  /// f given as f_1..f_K; u is extended to `horizon` assuming f_n = 0 for n > K.
  static RenewalSeq from_f(std::span<const double> f, std::size_t horizon);
};

/// f_1..f_N from u_0..u_N. Throws ConfigError unless u_0 = 1.
std::vector<double> f_from_u(std::span<const double> u);

/// u_0..u_horizon from f_1..f_K (f_n = 0 beyond K). Rejects negative entries.
std::vector<double> u_from_f(std::span<const double> f, std::size_t horizon);

enum class Recurrence { transient, null_recurrent, positive_recurrent, undetermined };

const char* to_string(Recurrence r) noexcept;

struct Classification {
  Recurrence kind = Recurrence::undetermined;
  double f_total = 0.0;  // Σ f_n including any extrapolated tail
  double mu = 0.0;       // Σ n f_n when positive recurrent, else +inf
  double u_inf = 0.0;    // 1/mu, or 0
};

/// Classifies from the computed horizon. Finite-support f is decided
/// exactly; otherwise a geometric tail is extrapolated when the last
/// coefficients decay geometrically and the extrapolated mass is below
/// `tol`. Anything else is Recurrence::undetermined.
Classification classify(const RenewalSeq& seq, double tol = 1e-9);

/// Recovers p from a Kaluza sequence u_0..u_N:
/// p_1 = u_1, p_n = u_n/u_{n-1} - u_{n-1}/u_{n-2}, remainder to p_inf.
/// Throws KaluzaViolation at the first n with u_n^2 > u_{n-1} u_{n+1},
/// tested on the ratios u_n/u_{n-1} with relative tolerance `tol`.
DiscreteDist kaluza_to_p(std::span<const double> u, double tol = 1e-12);

/// Σ_n c_n z^n for the given coefficients (Horner).
double power_series(std::span<const double> c, double z);

}  // namespace regenperm
