#pragma once

#include <cmath>
#include <complex>
#include <vector>

/// Reference values computed in test code only.
namespace ref {

using Complex = std::complex<double>;

/// Euler's constant from H_n - ln n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4) at n = 10^4.
inline double euler_gamma() {
  const int n = 10000;
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  const double x = n;
  return h - std::log(x) - 1.0 / (2 * x) + 1.0 / (12 * x * x) - 1.0 / (120 * x * x * x * x);
}

/// zeta(k) by Euler-Maclaurin with a tail from N = 50.
inline double zeta(int k) {
  const int n = 50;
  double s = 0.0;
  for (int j = n - 1; j >= 1; --j) s += std::pow(j, -k);
  const double x = n;
  s += std::pow(x, 1 - k) / (k - 1) + 0.5 * std::pow(x, -k) + k / 12.0 * std::pow(x, -k - 1) -
       k * (k + 1.0) * (k + 2.0) / 720.0 * std::pow(x, -k - 3);
  return s;
}

/// log Gamma(x) for x > 0 by Stirling's series after shifting x above 20.
inline double log_gamma(double x) {
  double shift = 0.0;
  while (x < 20.0) {
    shift -= std::log(x);
    x += 1.0;
  }
  const double pi = std::acos(-1.0);
  const double inv = 1.0 / x, inv2 = inv * inv;
  return shift + (x - 0.5) * std::log(x) - x + 0.5 * std::log(2 * pi) +
         inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)));
}

/// Taylor coefficients of Gamma(1+s)^n up to s^{order-1}, by a discrete
/// Cauchy integral on |s| = 0.25 with complex Stirling after upward recurrence.
inline std::vector<double> gamma_power_taylor(int n, int order) {
  auto lg = [](Complex z) {
    Complex shift = 0.0;
    while (z.real() < 20.0) {
      shift -= std::log(z);
      z += 1.0;
    }
    const double pi = std::acos(-1.0);
    const Complex inv = 1.0 / z, inv2 = inv * inv;
    return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) +
           inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680.0)));
  };
  const int samples = 256;
  const double r = 0.25, pi = std::acos(-1.0);
  std::vector<double> c(static_cast<std::size_t>(order), 0.0);
  for (int j = 0; j < samples; ++j) {
    const Complex w = std::polar(1.0, 2 * pi * j / samples);
    const Complex f = std::exp(static_cast<double>(n) * lg(1.0 + r * w));
    for (int k = 0; k < order; ++k) c[static_cast<std::size_t>(k)] += (f * std::pow(w, -k)).real() / samples;
  }
  for (int k = 0; k < order; ++k) c[static_cast<std::size_t>(k)] /= std::pow(r, k);
  return c;
}

}  // namespace ref
