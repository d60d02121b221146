#include "nchodge/series.hpp"

#include <algorithm>
#include <cmath>

#include "nchodge/errors.hpp"

namespace nchodge {

std::string to_string(Var v) {
  switch (v) {
    case Var::h: return "h";
    case Var::s: return "s";
    case Var::u: return "u";
    case Var::eps: return "eps";
  }
  return "?";
}

Var var_from_string(const std::string& name) {
  if (name == "h") return Var::h;
  if (name == "s") return Var::s;
  if (name == "u") return Var::u;
  if (name == "eps" || name == "e") return Var::eps;
  throw UsageError("unknown series variable '" + name + "'");
}

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw UsageError(std::string("non-finite value in ") + what);
}

TruncatedSeries::TruncatedSeries(Var var, int order) : var_(var) {
  if (order < 1) throw UsageError("series order must be positive");
  coeffs_.assign(static_cast<std::size_t>(order), Complex{0.0, 0.0});
}

TruncatedSeries::TruncatedSeries(Var var, std::vector<Complex> coeffs)
    : var_(var), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw UsageError("series order must be positive");
  for (const auto& c : coeffs_) require_finite(c, "series coefficient");
}

TruncatedSeries TruncatedSeries::constant(Var var, int order, Complex c) {
  TruncatedSeries r(var, order);
  r.coeffs_[0] = c;
  return r;
}

TruncatedSeries TruncatedSeries::variable(Var var, int order) {
  TruncatedSeries r(var, order);
  if (order > 1) r.coeffs_[1] = 1.0;
  return r;
}

Complex TruncatedSeries::evaluate(Complex x) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

TruncatedSeries TruncatedSeries::scaled(Complex c) const {
  TruncatedSeries r = *this;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

namespace {

void require_compatible(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.var() != b.var())
    throw UsageError("series variables differ: " + to_string(a.var()) + " vs " + to_string(b.var()));
  if (a.order() != b.order())
    throw UsageError("series orders differ: " + std::to_string(a.order()) + " vs " +
                     std::to_string(b.order()));
}

}  // namespace

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_compatible(a, b);
  TruncatedSeries r = a;
  for (int k = 0; k < a.order(); ++k) r.coeffs_[k] += b.coeffs_[k];
  return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_compatible(a, b);
  TruncatedSeries r = a;
  for (int k = 0; k < a.order(); ++k) r.coeffs_[k] -= b.coeffs_[k];
  return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_compatible(a, b);
  const int n = a.order();
  TruncatedSeries r(a.var(), n);
  for (int i = 0; i < n; ++i) {
    if (a.coeffs_[i] == Complex{}) continue;
    for (int j = 0; i + j < n; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return r;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries series_exp(const TruncatedSeries& a) {
  if (a[0] != Complex{}) throw UsageError("series_exp needs a zero constant term");
  const int n = a.order();
  TruncatedSeries result = TruncatedSeries::constant(a.var(), n, 1.0);
  TruncatedSeries term = result;
  // a is nilpotent of index <= n, so the sum stops at k = n - 1.
  for (int k = 1; k < n; ++k) {
    term = (term * a).scaled(1.0 / k);
    result = result + term;
  }
  return result;
}

TruncatedSeries series_log(const TruncatedSeries& a) {
  if (std::abs(a[0] - Complex{1.0}) > 1e-12) throw UsageError("series_log needs constant term 1");
  const int n = a.order();
  TruncatedSeries x = a - TruncatedSeries::constant(a.var(), n, 1.0);
  TruncatedSeries result(a.var(), n);
  TruncatedSeries power = x;
  for (int k = 1; k < n; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    result = result + power.scaled(sign / k);
    power = power * x;
  }
  return result;
}

TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (g[0] != Complex{}) throw UsageError("series_compose needs g with zero constant term");
  const int n = g.order();
  TruncatedSeries result(g.var(), n);
  TruncatedSeries power = TruncatedSeries::constant(g.var(), n, 1.0);
  const int terms = std::min(f.order(), n);
  for (int k = 0; k < terms; ++k) {
    result = result + power.scaled(f[k]);
    power = power * g;
  }
  return result;
}

LaurentSeries::LaurentSeries(Var var, int min_degree, std::vector<Complex> coeffs)
    : var_(var), min_degree_(min_degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw UsageError("Laurent series needs at least one coefficient");
  for (const auto& c : coeffs_) require_finite(c, "Laurent coefficient");
}

LaurentSeries LaurentSeries::shifted(const TruncatedSeries& a, int shift) {
  return LaurentSeries(a.var(), shift, std::vector<Complex>(a.coeffs().begin(), a.coeffs().end()));
}

Complex LaurentSeries::coeff(int k) const {
  if (k < min_degree_) return 0.0;
  if (k >= end_degree())
    throw UsageError("Laurent coefficient x^" + std::to_string(k) + " is beyond truncation");
  return coeffs_[static_cast<std::size_t>(k - min_degree_)];
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.var_ != b.var_) throw UsageError("Laurent series variables differ");
  const std::size_t len = std::min(a.coeffs_.size(), b.coeffs_.size());
  std::vector<Complex> c(len, Complex{});
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; i + j < len; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return LaurentSeries(a.var_, a.min_degree_ + b.min_degree_, std::move(c));
}

LaurentSeries LaurentSeries::scaled(Complex c) const {
  LaurentSeries r = *this;
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

}  // namespace nchodge
