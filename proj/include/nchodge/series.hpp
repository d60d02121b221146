#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace nchodge {

using Complex = std::complex<double>;

/// Library-wide default relative tolerance for numerical comparisons.
inline constexpr double kDefaultTol = 1e-9;

/// Name of the formal variable a series is written in.
enum class Var { h, s, u, eps };

std::string to_string(Var v);
Var var_from_string(const std::string& name);

/// Element of C[x]/(x^N). The order N is fixed at construction and never
/// changes; products are truncated.
class TruncatedSeries {
 public:
  TruncatedSeries(Var var, int order);
  TruncatedSeries(Var var, std::vector<Complex> coeffs);

  static TruncatedSeries constant(Var var, int order, Complex c);
  /// The generator x itself (zero when order == 1).
  static TruncatedSeries variable(Var var, int order);

  Var var() const noexcept { return var_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  Complex operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex evaluate(Complex x) const;
  TruncatedSeries scaled(Complex c) const;

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

 private:
  Var var_;
  std::vector<Complex> coeffs_;
};

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
/// Requires a zero constant term.
TruncatedSeries series_exp(const TruncatedSeries& a);
/// Requires constant term 1.
TruncatedSeries series_log(const TruncatedSeries& a);
/// f(g) for g with zero constant term; result lives in g's ring.
TruncatedSeries series_compose(const TruncatedSeries& f, const TruncatedSeries& g);

/// Laurent series sum_{k >= min_degree} c_k x^k, known up to
/// x^{min_degree + size - 1}.
class LaurentSeries {
 public:
  LaurentSeries(Var var, int min_degree, std::vector<Complex> coeffs);
  /// x^shift * a.
  static LaurentSeries shifted(const TruncatedSeries& a, int shift);

  Var var() const noexcept { return var_; }
  int min_degree() const noexcept { return min_degree_; }
  /// One past the highest known degree.
  int end_degree() const noexcept { return min_degree_ + static_cast<int>(coeffs_.size()); }
  /// Coefficient of x^k; throws if k is beyond the known range.
  Complex coeff(int k) const;

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries scaled(Complex c) const;

 private:
  Var var_;
  int min_degree_;
  std::vector<Complex> coeffs_;
};

void require_finite(Complex z, const char* what);

}  // namespace nchodge
