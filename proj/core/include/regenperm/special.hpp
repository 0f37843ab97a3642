#pragma once

namespace regenperm {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Riemann zeta at integer k >= 2, absolute error below 1e-15.
double zeta(int k);

/// Ψ = Γ'/Γ. Throws std::domain_error at the poles 0, -1, -2, ...
double digamma(double x);

/// log Γ(x) for x > 0.
double log_gamma(double x);

}  // namespace regenperm
