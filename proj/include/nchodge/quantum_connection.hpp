#pragma once

#include <map>
#include <optional>
#include <vector>

#include "nchodge/matrix.hpp"

namespace nchodge {

/// d + (sum_k A_k u^k) du with k >= -2 (pole of order at most 2 at u = 0).
class MeromorphicConnection {
 public:
  struct Meta {
    int n = 0;
    Complex q{};
  };

  MeromorphicConnection(int rank, std::map<int, ComplexMatrix> terms, std::optional<Meta> meta = {});

  int rank() const noexcept { return rank_; }
  const std::map<int, ComplexMatrix>& terms() const noexcept { return terms_; }
  const std::optional<Meta>& meta() const noexcept { return meta_; }
  bool has_term(int k) const { return terms_.count(k) != 0; }
  const ComplexMatrix& term(int k) const;

  /// Connection matrix sum_k A_k u^k at a point u != 0.
  ComplexMatrix matrix_at(Complex u) const;

 private:
  int rank_;
  std::map<int, ComplexMatrix> terms_;
  std::optional<Meta> meta_;
};

/// Gr on H^*(CP^{n-1}): diag((1-n)/2, ..., (n-1)/2).
struct GradingOperator {
  std::vector<double> diagonal;

  int rank() const noexcept { return static_cast<int>(diagonal.size()); }
  ComplexMatrix matrix() const;
  static GradingOperator cpn(int n);
};

/// Quantum multiplication by the hyperplane class: ones on the subdiagonal and
/// q in the top-right corner, so that S^n = q * Id.
struct ShiftMatrix {
  int n = 0;
  Complex q{};

  ComplexMatrix matrix() const;
};

/// The u-direction of the quantum connection of CP^{n-1} at fixed q:
/// A_{-2} = n * ShiftMatrix(n, q), A_{-1} = Gr. q = 0 gives the classical limit.
MeromorphicConnection build_cpn_u_connection(int n, Complex q);

/// Matrix-valued function q -> -(1/(q u)) ShiftMatrix(n, q) of the q-direction.
class QConnection {
 public:
  QConnection(int n, Complex u);
  ComplexMatrix operator()(Complex q) const;
  int n() const noexcept { return n_; }
  Complex u() const noexcept { return u_; }

 private:
  int n_;
  Complex u_;
};

QConnection build_cpn_q_connection(int n, Complex u);

/// Distinct eigenvalues of A_{-2} with their algebraic multiplicities.
struct ExponentCluster {
  Complex value;
  int multiplicity = 1;
};

/// Eigenvalues of A_{-2} clustered within `dedup_tol` and sorted by (Re, Im).
/// Eigenvalues that are neither clearly equal nor clearly distinct raise UsageError.
std::vector<ExponentCluster> exponent_clusters(const MeromorphicConnection& conn,
                                               double dedup_tol = 1e-8);
std::vector<Complex> exponent_eigenvalues(const MeromorphicConnection& conn, double dedup_tol = 1e-8);

/// Gr K - K Gr == K for the classical kappa-matrix K = A_{-2}.
bool check_commutation(const MeromorphicConnection& conn, const GradingOperator& gr,
                       double tol = kDefaultTol);

/// Curvature component d_u A_q - d_q A_u + [A_u, A_q] of the combined (u, q)
/// connection of CP^{n-1}, from exact derivative formulas.
ComplexMatrix cpn_curvature(int n, Complex u, Complex q);

}  // namespace nchodge
