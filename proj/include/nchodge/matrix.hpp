#pragma once

#include <Eigen/Dense>

#include "nchodge/series.hpp"

namespace nchodge {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ExpKind { nilpotent, diagonal };

/// exp(M) for a nilpotent matrix (finite sum, M^r = 0 is checked) or a
/// diagonal one (entrywise). Throws UsageError if M is not of the declared kind.
ComplexMatrix matrix_exp_poly(const ComplexMatrix& m, ExpKind kind, double tol = kDefaultTol);

/// Number of singular values above tol * (largest singular value).
int rank(const ComplexMatrix& m, double tol = kDefaultTol);

/// Orthonormal basis (as columns) of the column space.
ComplexMatrix column_space(const ComplexMatrix& m, double tol = kDefaultTol);
/// Orthonormal basis of the kernel.
ComplexMatrix null_space(const ComplexMatrix& m, double tol = kDefaultTol);
/// Orthonormal basis of the orthogonal complement of span(columns) in C^ambient.
ComplexMatrix orthogonal_complement(const ComplexMatrix& columns, Eigen::Index ambient,
                                    double tol = kDefaultTol);

/// Moore-Penrose pseudo-inverse; singular values below tol * max are dropped.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double tol = kDefaultTol);
/// Minimum-norm least-squares solution of m x = rhs.
ComplexMatrix least_squares(const ComplexMatrix& m, const ComplexMatrix& rhs, double tol = kDefaultTol);

/// span(a) == span(b), compared by ranks.
bool same_subspace(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

double max_abs(const ComplexMatrix& m);

void require_finite(const ComplexMatrix& m, const char* what);

/// Tolerant relative closeness: |a - b| <= tol * max(1, |a|, |b|) entrywise max-norm.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

}  // namespace nchodge
