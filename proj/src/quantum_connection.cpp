#include "nchodge/quantum_connection.hpp"

#include <algorithm>
#include <cmath>

#include "nchodge/errors.hpp"

namespace nchodge {

MeromorphicConnection::MeromorphicConnection(int rank, std::map<int, ComplexMatrix> terms,
                                             std::optional<Meta> meta)
    : rank_(rank), terms_(std::move(terms)), meta_(meta) {
  if (rank_ < 1) throw UsageError("connection rank must be positive");
  for (const auto& [k, m] : terms_) {
    if (k < -2) throw UsageError("pole order exceeds 2 (term u^" + std::to_string(k) + ")");
    if (m.rows() != rank_ || m.cols() != rank_)
      throw UsageError("connection term u^" + std::to_string(k) + " has wrong shape");
    require_finite(m, "connection term");
  }
}

const ComplexMatrix& MeromorphicConnection::term(int k) const {
  auto it = terms_.find(k);
  if (it == terms_.end()) throw UsageError("connection has no u^" + std::to_string(k) + " term");
  return it->second;
}

ComplexMatrix MeromorphicConnection::matrix_at(Complex u) const {
  if (u == Complex{}) throw DomainError("connection matrix evaluated at u = 0");
  ComplexMatrix a = ComplexMatrix::Zero(rank_, rank_);
  for (const auto& [k, m] : terms_) a += std::pow(u, k) * m;
  return a;
}

ComplexMatrix GradingOperator::matrix() const {
  ComplexMatrix m = ComplexMatrix::Zero(rank(), rank());
  for (int i = 0; i < rank(); ++i) m(i, i) = diagonal[static_cast<std::size_t>(i)];
  return m;
}

GradingOperator GradingOperator::cpn(int n) {
  GradingOperator gr;
  for (int k = 0; k < n; ++k) gr.diagonal.push_back(k - (n - 1) / 2.0);
  return gr;
}

ComplexMatrix ShiftMatrix::matrix() const {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  m(0, n - 1) += q;
  return m;
}

MeromorphicConnection build_cpn_u_connection(int n, Complex q) {
  if (n < 2) throw UsageError("build_cpn_u_connection needs n >= 2");
  require_finite(q, "q");
  std::map<int, ComplexMatrix> terms;
  terms.emplace(-2, static_cast<double>(n) * ShiftMatrix{n, q}.matrix());
  terms.emplace(-1, GradingOperator::cpn(n).matrix());
  return MeromorphicConnection(n, std::move(terms), MeromorphicConnection::Meta{n, q});
}

QConnection::QConnection(int n, Complex u) : n_(n), u_(u) {
  if (n < 2) throw UsageError("build_cpn_q_connection needs n >= 2");
  require_finite(u, "u");
  if (u == Complex{}) throw UsageError("q-connection needs u != 0");
}

ComplexMatrix QConnection::operator()(Complex q) const {
  if (q == Complex{}) throw DomainError("q-connection evaluated at q = 0");
  return -(1.0 / (q * u_)) * ShiftMatrix{n_, q}.matrix();
}

QConnection build_cpn_q_connection(int n, Complex u) { return QConnection(n, u); }

namespace {

std::vector<Complex> raw_eigenvalues(const ComplexMatrix& a) {
  const Eigen::Index r = a.rows();
  // Triangular input: read the spectrum off the diagonal rather than let a
  // nilpotent Jordan block scatter under Schur iteration.
  const bool lower = a.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0);
  const bool upper = a.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0);
  std::vector<Complex> ev;
  if (lower || upper) {
    for (Eigen::Index i = 0; i < r; ++i) ev.push_back(a(i, i));
    return ev;
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw UsageError("eigenvalue computation failed");
  for (Eigen::Index i = 0; i < r; ++i) ev.push_back(solver.eigenvalues()(i));
  return ev;
}

}  // namespace

std::vector<ExponentCluster> exponent_clusters(const MeromorphicConnection& conn, double dedup_tol) {
  const ComplexMatrix& a = conn.term(-2);
  std::vector<Complex> ev = raw_eigenvalues(a);
  const double scale = std::max(1.0, max_abs(a));
  const double merge = dedup_tol * scale;
  std::vector<ExponentCluster> clusters;
  for (const Complex& z : ev) {
    bool placed = false;
    for (auto& c : clusters) {
      const double dist = std::abs(c.value - z);
      if (dist <= merge) {
        c.value = (c.value * static_cast<double>(c.multiplicity) + z) / static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        placed = true;
        break;
      }
      if (dist <= 1e3 * merge)
        throw UsageError("exponents collide below resolution; refusing to merge distinct values");
    }
    if (!placed) clusters.push_back({z, 1});
  }
  std::sort(clusters.begin(), clusters.end(), [](const ExponentCluster& x, const ExponentCluster& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return clusters;
}

std::vector<Complex> exponent_eigenvalues(const MeromorphicConnection& conn, double dedup_tol) {
  std::vector<Complex> out;
  for (const auto& c : exponent_clusters(conn, dedup_tol)) out.push_back(c.value);
  return out;
}

bool check_commutation(const MeromorphicConnection& conn, const GradingOperator& gr, double tol) {
  const ComplexMatrix& k = conn.term(-2);
  if (gr.rank() != conn.rank()) throw UsageError("grading operator rank mismatch");
  const ComplexMatrix g = gr.matrix();
  return approx_equal(g * k - k * g, k, tol);
}

ComplexMatrix cpn_curvature(int n, Complex u, Complex q) {
  if (u == Complex{} || q == Complex{}) throw DomainError("curvature needs u != 0 and q != 0");
  const ComplexMatrix s = ShiftMatrix{n, q}.matrix();
  const ComplexMatrix gr = GradingOperator::cpn(n).matrix();
  ComplexMatrix corner = ComplexMatrix::Zero(n, n);  // dS/dq
  corner(0, n - 1) = 1.0;
  const ComplexMatrix a_u = static_cast<double>(n) * s / (u * u) + gr / u;
  const ComplexMatrix a_q = -s / (q * u);
  const ComplexMatrix da_u_dq = static_cast<double>(n) * corner / (u * u);
  const ComplexMatrix da_q_du = s / (q * u * u);
  return da_q_du - da_u_dq + (a_u * a_q - a_q * a_u);
}

}  // namespace nchodge
