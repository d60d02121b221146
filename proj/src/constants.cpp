#include "nchodge/constants.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "nchodge/errors.hpp"

namespace nchodge {

namespace {

// B_2, B_4, ..., B_16
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,    -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,   -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};

constexpr int kTableMaxZeta = 64;

// Euler-Maclaurin for H_N - ln N with N = 10.
double gamma_euler_maclaurin() {
  constexpr int n = 10;
  double harmonic = 0.0;
  for (int k = n; k >= 1; --k) harmonic += 1.0 / k;
  double g = harmonic - std::log(static_cast<double>(n)) - 0.5 / n;
  double npow = 1.0;
  for (std::size_t m = 1; m <= 6; ++m) {
    npow *= static_cast<double>(n) * n;
    g += kBernoulli[m - 1] / (2.0 * m * npow);
  }
  return g;
}

// Euler-Maclaurin for zeta(k) with N = 10 and eight correction terms.
double zeta_euler_maclaurin(int k) {
  constexpr int n = 10;
  double sum = 0.0;
  for (int j = n - 1; j >= 1; --j) sum += std::pow(static_cast<double>(j), -k);
  const double nd = n;
  sum += std::pow(nd, 1.0 - k) / (k - 1.0);
  sum += 0.5 * std::pow(nd, -static_cast<double>(k));
  // sum_m B_{2m}/(2m)! * k(k+1)...(k+2m-2) * N^{-k-2m+1}
  double rising = k;  // k(k+1)...(k+2m-2)
  double factorial = 2.0;
  for (int m = 1; m <= 8; ++m) {
    sum += kBernoulli[m - 1] / factorial * rising * std::pow(nd, -k - 2.0 * m + 1.0);
    rising *= (k + 2.0 * m - 1.0) * (k + 2.0 * m);
    factorial *= (2.0 * m + 1.0) * (2.0 * m + 2.0);
  }
  return sum;
}

struct ConstantsTable {
  double gamma = 0.0;
  std::array<double, kTableMaxZeta + 1> zeta{};
};

ConstantsTable build_table() {
  ConstantsTable t;
  t.gamma = gamma_euler_maclaurin();
  for (int k = 2; k <= kTableMaxZeta; ++k) t.zeta[static_cast<std::size_t>(k)] = zeta_euler_maclaurin(k);

  constexpr double tol = 1e-11;
  const double g_ref = oracle::euler_gamma_richardson();
  if (std::abs(g_ref - t.gamma) > tol) {
    std::fprintf(stderr, "nchodge: Euler gamma self-check failed (%.16g vs %.16g)\n", t.gamma, g_ref);
    std::abort();
  }
  for (int k = 2; k <= 8; ++k) {
    const double ref = oracle::zeta_direct(k);
    if (std::abs(ref - t.zeta[static_cast<std::size_t>(k)]) > tol) {
      std::fprintf(stderr, "nchodge: zeta(%d) self-check failed\n", k);
      std::abort();
    }
  }
  return t;
}

const ConstantsTable& table() {
  static const ConstantsTable t = build_table();
  return t;
}

}  // namespace

double euler_gamma() { return table().gamma; }

double zeta(int k) {
  if (k < 2) throw UsageError("zeta(k) needs k >= 2");
  if (k <= kTableMaxZeta) return table().zeta[static_cast<std::size_t>(k)];
  return zeta_euler_maclaurin(k);
}

TruncatedSeries log_gamma_taylor(int order, Var var) {
  if (order < 1) throw UsageError("log_gamma_taylor needs order >= 1");
  std::vector<Complex> c(static_cast<std::size_t>(order), Complex{});
  if (order > 1) c[1] = -euler_gamma();
  for (int k = 2; k < order; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(k)] = sign * zeta(k) / k;
  }
  return TruncatedSeries(var, std::move(c));
}

void verify_constants() {
  const auto& t = table();
  const double g_ref = oracle::euler_gamma_richardson();
  if (std::abs(g_ref - t.gamma) > 1e-11) throw SelfCheckError("Euler gamma mismatch");
  for (int k = 2; k <= 8; ++k)
    if (std::abs(oracle::zeta_direct(k) - zeta(k)) > 1e-11)
      throw SelfCheckError("zeta(" + std::to_string(k) + ") mismatch");
  for (double s : {-0.1, 0.1}) {
    const double series = log_gamma_taylor(10).evaluate(s).real();
    if (std::abs(series - oracle::log_gamma_lanczos(1.0 + s)) > 1e-8)
      throw SelfCheckError("log Gamma(1+s) series mismatch");
  }
}

namespace oracle {

double euler_gamma_richardson() {
  // a(n) = H_n - ln n = gamma + c1/n + c2/n^2 + ...; Neville extrapolation to 1/n -> 0.
  constexpr int levels = 9;
  std::array<double, levels> h{};
  std::array<double, levels> a{};
  long n = 16;
  double harmonic = 0.0;
  long done = 0;
  for (int i = 0; i < levels; ++i, n *= 2) {
    for (long k = done + 1; k <= n; ++k) harmonic += 1.0 / static_cast<double>(k);
    done = n;
    h[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(n);
    a[static_cast<std::size_t>(i)] = harmonic - std::log(static_cast<double>(n));
  }
  for (int m = 1; m < levels; ++m)
    for (int i = levels - 1; i >= m; --i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto um = static_cast<std::size_t>(i - m);
      a[ui] = (h[um] * a[ui] - h[ui] * a[ui - 1]) / (h[um] - h[ui]);
    }
  return a[levels - 1];
}

double zeta_direct(int k, long terms) {
  if (k < 2) throw UsageError("zeta(k) needs k >= 2");
  double sum = 0.0;
  for (long j = terms; j >= 1; --j) sum += std::pow(static_cast<double>(j), -k);
  // sum_{j>N} j^-k lies between int_{N+1}^inf and int_N^inf of x^-k.
  const double lower = std::pow(static_cast<double>(terms + 1), 1.0 - k) / (k - 1.0);
  const double upper = std::pow(static_cast<double>(terms), 1.0 - k) / (k - 1.0);
  return sum + 0.5 * (lower + upper);
}

double log_gamma_lanczos(double x) {
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the approximation in its accurate range.
    return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
           log_gamma_lanczos(1.0 - x);
  }
  x -= 1.0;
  double sum = p[0];
  for (int i = 1; i < 9; ++i) sum += p[static_cast<std::size_t>(i)] / (x + i);
  const double t = x + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace oracle

}  // namespace nchodge
