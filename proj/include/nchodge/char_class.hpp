#pragma once

#include <vector>

#include "nchodge/matrix.hpp"
#include "nchodge/series.hpp"

namespace nchodge {

/// Element of H^*(CP^{n-1}, C) = C[h]/(h^n); the h^k coefficient is the
/// component in H^{2k}.
class CohomologyElement {
 public:
  explicit CohomologyElement(TruncatedSeries series);
  static CohomologyElement hyperplane(int n);  // h itself

  int n() const noexcept { return series_.order(); }
  const TruncatedSeries& series() const noexcept { return series_; }

 private:
  TruncatedSeries series_;
};

/// Product of Gamma(1 + lambda) over the given nilpotent Chern roots.
CohomologyElement gamma_hat_from_roots(const std::vector<CohomologyElement>& roots, int n);

/// Gamma-hat class of CP^{n-1}: Gamma(1+h)^n in C[h]/(h^n).
CohomologyElement gamma_hat_cpn(int n);

/// diag((2 pi i)^k), k = 0..n-1, in the basis {1, h, ..., h^{n-1}}.
ComplexMatrix d_operator(int n);

/// Rational-structure map: scaling by d_operator, then cup product with gamma_hat_cpn(n).
struct LatticeMap {
  int n = 0;
  ComplexMatrix matrix;
};

LatticeMap lattice_map(int n);

/// Lower-triangular Toeplitz matrix of cup product by x in the h-basis.
ComplexMatrix cup_product_matrix(const CohomologyElement& x);

/// Coordinates c with lattice_map(n).matrix * c == v (a rational c means v
/// lies in the rational structure).
ComplexVector lattice_coordinates(int n, const ComplexVector& v);

}  // namespace nchodge
