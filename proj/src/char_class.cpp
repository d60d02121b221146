#include "nchodge/char_class.hpp"

#include <numbers>

#include "nchodge/constants.hpp"
#include "nchodge/errors.hpp"

namespace nchodge {

CohomologyElement::CohomologyElement(TruncatedSeries series) : series_(std::move(series)) {
  if (series_.var() != Var::h) throw UsageError("cohomology elements are series in h");
}

CohomologyElement CohomologyElement::hyperplane(int n) {
  return CohomologyElement(TruncatedSeries::variable(Var::h, n));
}

CohomologyElement gamma_hat_from_roots(const std::vector<CohomologyElement>& roots, int n) {
  if (n < 1) throw UsageError("gamma_hat needs n >= 1");
  const TruncatedSeries log_gamma = log_gamma_taylor(n, Var::s);
  TruncatedSeries log_total(Var::h, n);
  for (const auto& root : roots) {
    if (root.n() != n) throw UsageError("Chern root lives in a different cohomology ring");
    if (root.series()[0] != Complex{}) throw UsageError("Chern root must be nilpotent");
    log_total = log_total + series_compose(log_gamma, root.series());
  }
  return CohomologyElement(series_exp(log_total));
}

CohomologyElement gamma_hat_cpn(int n) {
  if (n < 1) throw UsageError("gamma_hat_cpn needs n >= 1");
  // T_X = n O(1) - O; the trivial summand contributes Gamma(1) = 1.
  std::vector<CohomologyElement> roots(static_cast<std::size_t>(n), CohomologyElement::hyperplane(n));
  return gamma_hat_from_roots(roots, n);
}

ComplexMatrix d_operator(int n) {
  if (n < 1) throw UsageError("d_operator needs n >= 1");
  const Complex two_pi_i{0.0, 2.0 * std::numbers::pi};
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  Complex power = 1.0;
  for (int k = 0; k < n; ++k, power *= two_pi_i) d(k, k) = power;
  return d;
}

ComplexMatrix cup_product_matrix(const CohomologyElement& x) {
  const int n = x.n();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = x.series()[i - j];
  return m;
}

LatticeMap lattice_map(int n) {
  if (n < 1) throw UsageError("lattice_map needs n >= 1");
  return LatticeMap{n, cup_product_matrix(gamma_hat_cpn(n)) * d_operator(n)};
}

ComplexVector lattice_coordinates(int n, const ComplexVector& v) {
  if (v.size() != n) throw UsageError("lattice_coordinates: vector has wrong length");
  const LatticeMap lm = lattice_map(n);
  return lm.matrix.triangularView<Eigen::Lower>().solve(v);
}

}  // namespace nchodge
