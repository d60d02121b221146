#pragma once

#include "nchodge/series.hpp"

namespace nchodge {

/// Euler's constant. The first call computes the constants table and
/// cross-checks it against the oracles below; a failed check aborts.
double euler_gamma();

/// Riemann zeta at an integer k >= 2.
double zeta(int k);

/// Taylor series of log Gamma(1+s) at s = 0 to the given order:
/// -gamma s + sum_{k>=2} (-1)^k zeta(k)/k s^k.
TruncatedSeries log_gamma_taylor(int order, Var var = Var::s);

/// Forces the startup table and its self-check. Throws SelfCheckError.
void verify_constants();

/// Independent reference computations. These share no code with the
/// production path and are only used for cross-checking.
namespace oracle {

/// Richardson extrapolation of H_n - ln n.
double euler_gamma_richardson();
/// Direct summation to `terms` plus the midpoint of the integral tail bounds.
double zeta_direct(int k, long terms = 1'000'000);
/// log Gamma(x) for real x > 0 via the Lanczos approximation (g = 7).
double log_gamma_lanczos(double x);

}  // namespace oracle

}  // namespace nchodge
