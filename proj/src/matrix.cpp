#include "nchodge/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "nchodge/errors.hpp"

namespace nchodge {

namespace {

Eigen::JacobiSVD<ComplexMatrix> svd_of(const ComplexMatrix& m, unsigned options) {
  return Eigen::JacobiSVD<ComplexMatrix>(m, options);
}

int numerical_rank(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++r;
  return r;
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw UsageError(std::string("non-finite entry in ") + what);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(a - b) <= tol * scale;
}

ComplexMatrix matrix_exp_poly(const ComplexMatrix& m, ExpKind kind, double tol) {
  require_finite(m, "matrix_exp_poly input");
  if (m.rows() != m.cols()) throw UsageError("matrix_exp_poly needs a square matrix");
  const Eigen::Index r = m.rows();
  if (kind == ExpKind::diagonal) {
    ComplexMatrix off = m;
    off.diagonal().setZero();
    if (max_abs(off) > 0.0) throw UsageError("matrix declared diagonal has off-diagonal entries");
    ComplexMatrix e = ComplexMatrix::Zero(r, r);
    for (Eigen::Index i = 0; i < r; ++i) e(i, i) = std::exp(m(i, i));
    return e;
  }
  ComplexMatrix result = ComplexMatrix::Identity(r, r);
  ComplexMatrix term = ComplexMatrix::Identity(r, r);
  for (Eigen::Index k = 1; k <= r; ++k) {
    term = (term * m) / static_cast<double>(k);
    if (k < r) result += term;
  }
  // term is now M^r / r!; it must vanish for a nilpotent matrix.
  const double scale = std::max(1.0, std::pow(max_abs(m), static_cast<double>(r)));
  double fact = 1.0;
  for (Eigen::Index k = 2; k <= r; ++k) fact *= static_cast<double>(k);
  if (max_abs(term) * fact > tol * scale) throw UsageError("matrix declared nilpotent has M^r != 0");
  return result;
}

int rank(const ComplexMatrix& m, double tol) {
  if (!(tol > 0.0)) throw UsageError("rank tolerance must be positive");
  if (m.size() == 0) return 0;
  return numerical_rank(svd_of(m, 0).singularValues(), tol);
}

ComplexMatrix column_space(const ComplexMatrix& m, double tol) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  const auto svd = svd_of(m, Eigen::ComputeThinU);
  const int r = numerical_rank(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return ComplexMatrix::Identity(n, n);
  const auto svd = svd_of(m, Eigen::ComputeFullV);
  const int r = numerical_rank(svd.singularValues(), tol);
  return svd.matrixV().rightCols(n - r);
}

ComplexMatrix orthogonal_complement(const ComplexMatrix& columns, Eigen::Index ambient, double tol) {
  if (columns.cols() == 0) return ComplexMatrix::Identity(ambient, ambient);
  if (columns.rows() != ambient) throw UsageError("orthogonal_complement: dimension mismatch");
  return null_space(columns.adjoint(), tol);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());
  const auto svd = svd_of(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int r = numerical_rank(svd.singularValues(), tol);
  ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
  for (int k = 0; k < r; ++k)
    out += svd.matrixV().col(k) * (1.0 / svd.singularValues()(k)) * svd.matrixU().col(k).adjoint();
  return out;
}

ComplexMatrix least_squares(const ComplexMatrix& m, const ComplexMatrix& rhs, double tol) {
  if (m.rows() != rhs.rows()) throw UsageError("least_squares: dimension mismatch");
  return pseudo_inverse(m, tol) * rhs;
}

bool same_subspace(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows()) return false;
  const int ra = rank(a, tol);
  const int rb = rank(b, tol);
  if (ra != rb) return false;
  ComplexMatrix joint(a.rows(), a.cols() + b.cols());
  joint << a, b;
  return rank(joint, tol) == ra;
}

}  // namespace nchodge
