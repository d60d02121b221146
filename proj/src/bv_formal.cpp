#include "nchodge/bv_formal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "nchodge/errors.hpp"

namespace nchodge {

namespace {

double vec_max(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double sign(int parity) { return parity % 2 == 0 ? 1.0 : -1.0; }

void check_operator(const ComplexMatrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) throw UsageError(std::string(what) + " has wrong shape");
  require_finite(m, what);
}

}  // namespace

// ---------------------------------------------------------------- algebra

BVAlgebra::BVAlgebra(std::vector<int> parity, int unit, std::vector<ComplexMatrix> left_mult, ComplexMatrix d,
                     ComplexMatrix delta)
    : parity_(std::move(parity)), unit_(unit), left_(std::move(left_mult)), d_(std::move(d)), delta_(std::move(delta)) {
  const int n = dim();
  if (n < 1) throw UsageError("BV algebra needs positive dimension");
  for (int p : parity_)
    if (p != 0 && p != 1) throw UsageError("parities must be 0 or 1");
  if (unit_ < 0 || unit_ >= n) throw UsageError("unit index out of range");
  if (parity_[static_cast<std::size_t>(unit_)] != 0) throw UsageError("unit must be even");
  if (static_cast<int>(left_.size()) != n) throw UsageError("one multiplication matrix per basis element required");
  for (const auto& l : left_) check_operator(l, n, "multiplication table");
  check_operator(d_, n, "d");
  check_operator(delta_, n, "delta");
}

BVAlgebra BVAlgebra::with_d(ComplexMatrix d) const { return BVAlgebra(parity_, unit_, left_, std::move(d), delta_); }

BVAlgebra BVAlgebra::with_delta(ComplexMatrix delta) const {
  return BVAlgebra(parity_, unit_, left_, d_, std::move(delta));
}

ComplexVector BVAlgebra::basis(int i) const { return ComplexVector::Unit(dim(), i); }

ComplexMatrix BVAlgebra::left_matrix(const ComplexVector& v) const {
  ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (v(i) != Complex{}) m += v(i) * left_[static_cast<std::size_t>(i)];
  return m;
}

ComplexVector BVAlgebra::mul(const ComplexVector& a, const ComplexVector& b) const {
  ComplexVector out = ComplexVector::Zero(dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != Complex{}) out += a(i) * (left_[static_cast<std::size_t>(i)] * b);
  return out;
}

ComplexVector BVAlgebra::even_part(const ComplexVector& v) const {
  ComplexVector out = v;
  for (int i = 0; i < dim(); ++i)
    if (parity_[static_cast<std::size_t>(i)] == 1) out(i) = 0.0;
  return out;
}

ComplexVector BVAlgebra::odd_part(const ComplexVector& v) const { return v - even_part(v); }

int BVAlgebra::parity_of(const ComplexVector& v, double tol) const {
  const double scale = std::max(1.0, vec_max(v));
  const bool has_even = vec_max(even_part(v)) > tol * scale;
  const bool has_odd = vec_max(odd_part(v)) > tol * scale;
  if (has_even && has_odd) return -1;
  return has_odd ? 1 : 0;
}

ComplexVector BVAlgebra::bracket_homogeneous(const ComplexVector& a, int pa, const ComplexVector& b) const {
  return delta_ * mul(a, b) - mul(delta_ * a, b) - sign(pa) * mul(a, delta_ * b);
}

ComplexVector BVAlgebra::bracket(const ComplexVector& a, const ComplexVector& b) const {
  return bracket_homogeneous(even_part(a), 0, b) + bracket_homogeneous(odd_part(a), 1, b);
}

// ---------------------------------------------------------------- built-in algebras

BVAlgebra grassmann(int n) {
  if (n < 0 || n > 6) throw UsageError("grassmann supports 0..6 generators");
  const int dim = 1 << n;
  std::vector<int> parity;
  std::vector<ComplexMatrix> left(static_cast<std::size_t>(dim), ComplexMatrix::Zero(dim, dim));
  for (int s = 0; s < dim; ++s) parity.push_back(std::popcount(static_cast<unsigned>(s)) % 2);
  for (int s = 0; s < dim; ++s)
    for (int t = 0; t < dim; ++t) {
      if (s & t) continue;
      int swaps = 0;
      for (int g = 0; g < n; ++g)
        if (t & (1 << g)) swaps += std::popcount(static_cast<unsigned>(s >> (g + 1)));
      left[static_cast<std::size_t>(s)](s | t, t) = sign(swaps);
    }
  return BVAlgebra(parity, 0, left, ComplexMatrix::Zero(dim, dim), ComplexMatrix::Zero(dim, dim));
}

ComplexMatrix grassmann_derivative(int n, int g) {
  if (g < 0 || g >= n) throw UsageError("generator index out of range");
  const int dim = 1 << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int s = 0; s < dim; ++s)
    if (s & (1 << g)) m(s & ~(1 << g), s) = sign(std::popcount(static_cast<unsigned>(s & ((1 << g) - 1))));
  return m;
}

int grassmann_generator(int g) { return 1 << g; }

BVAlgebra truncated_polynomial(int order) {
  if (order < 1) throw UsageError("truncated_polynomial needs order >= 1");
  std::vector<ComplexMatrix> left(static_cast<std::size_t>(order), ComplexMatrix::Zero(order, order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; i + j < order; ++j) left[static_cast<std::size_t>(i)](i + j, j) = 1.0;
  return BVAlgebra(std::vector<int>(static_cast<std::size_t>(order), 0), 0, left,
                   ComplexMatrix::Zero(order, order), ComplexMatrix::Zero(order, order));
}

BVAlgebra square_zero(const std::vector<int>& parities) {
  const int dim = static_cast<int>(parities.size()) + 1;
  std::vector<int> parity{0};
  parity.insert(parity.end(), parities.begin(), parities.end());
  std::vector<ComplexMatrix> left(static_cast<std::size_t>(dim), ComplexMatrix::Zero(dim, dim));
  left[0].setIdentity();
  for (int i = 1; i < dim; ++i) left[static_cast<std::size_t>(i)](i, 0) = 1.0;
  return BVAlgebra(parity, 0, left, ComplexMatrix::Zero(dim, dim), ComplexMatrix::Zero(dim, dim));
}

// ---------------------------------------------------------------- axioms

AxiomReport check_bv_axioms(const BVAlgebra& a, double tol) {
  const int n = a.dim();
  std::vector<std::pair<std::string, double>> worst;
  std::vector<std::string> where;
  // `loc` is only evaluated when a new worst deviation is recorded.
  auto note = [&](const std::string& cond, double dev, const auto& loc) {
    for (std::size_t k = 0; k < worst.size(); ++k)
      if (worst[k].first == cond) {
        if (dev > worst[k].second) {
          worst[k].second = dev;
          where[k] = loc();
        }
        return;
      }
    worst.emplace_back(cond, dev);
    where.push_back(loc());
  };
  auto idx = [](int i) { return std::to_string(i); };
  auto at = [&](auto... ids) {
    return [=] {
      std::string out;
      for (int i : {ids...}) out += (out.empty() ? "" : ",") + idx(i);
      return out;
    };
  };
  auto nowhere = [] { return std::string(); };
  const auto e = [&](int i) { return a.basis(i); };
  const auto p = [&](int i) { return a.parity(i); };
  const auto z = [](int i) { return static_cast<std::size_t>(i); };

  double scale = 1.0;
  for (const auto& l : a.left_mult()) scale = std::max(scale, max_abs(l));
  scale = std::max({scale, max_abs(a.d()), max_abs(a.delta())});
  const double bound = tol * scale * scale * scale;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (p(k) != (p(i) + p(j)) % 2) note("parity", std::abs(a.left(i)(k, j)), at(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p(i) == p(j)) {
        note("d-parity", std::abs(a.d()(i, j)), at(j));
        note("delta-parity", std::abs(a.delta()(i, j)), at(j));
      }
    }
  const ComplexVector one = e(a.unit());
  for (int i = 0; i < n; ++i) {
    note("unit", vec_max(a.mul(one, e(i)) - e(i)), at(i));
    note("unit", vec_max(a.mul(e(i), one) - e(i)), at(i));
  }
  // The n^3 identities are evaluated with one matrix product per first index i.
  // For operators X_0..X_{n-1}: rows(X) stacks them vertically, cols(X) puts
  // X_l's columns side by side and vecs(X) has vec(X_l) as column l, so that
  // (vecs(X) v)(k n + r) = (sum_l v_l X_l)(r, k).
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  auto stacks = [&](const std::vector<ComplexMatrix>& x, ComplexMatrix& rows, ComplexMatrix& cols, ComplexMatrix& vecs) {
    rows.resize(nn, n);
    cols.resize(n, nn);
    vecs.resize(nn, n);
    for (int l = 0; l < n; ++l) {
      rows.middleRows(l * n, n) = x[z(l)];
      cols.middleCols(l * n, n) = x[z(l)];
      vecs.col(l) = Eigen::Map<const ComplexVector>(x[z(l)].data(), nn);
    }
  };
  ComplexMatrix l_rows, l_cols, l_vecs;
  stacks(a.left_mult(), l_rows, l_cols, l_vecs);
  auto ee = [&](int i, int j) { return a.left(i).col(j); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      note("supercommutativity", vec_max(ee(i, j) - sign(p(i) * p(j)) * ee(j, i)), at(i, j));
  // Squared moduli inside the loops; square roots when recording.
  for (int i = 0; i < n; ++i) {
    // (e_i e_j) e_k against e_i (e_j e_k).
    const ComplexMatrix lhs = l_vecs * a.left(i);
    const ComplexMatrix rhs = a.left(i) * l_cols;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double m = 0.0;
        for (int r = 0; r < n; ++r) m = std::max(m, std::norm(lhs(k * n + r, j) - rhs(r, j * n + k)));
        note("associativity", std::sqrt(m), at(i, j, k));
      }
  }
  note("d(1)", vec_max(a.d() * one), nowhere);
  note("delta(1)", vec_max(a.delta() * one), nowhere);
  note("d^2", max_abs(a.d() * a.d()), nowhere);
  note("delta^2", max_abs(a.delta() * a.delta()), nowhere);
  note("d delta + delta d", max_abs(a.d() * a.delta() + a.delta() * a.d()), nowhere);
  {
    // d(e_i e_j) - (d e_i) e_j - (-1)^{|i|} e_i d(e_j).
    const ComplexMatrix d_prod = a.d() * l_cols;
    const ComplexMatrix first = l_vecs * a.d();
    for (int i = 0; i < n; ++i) {
      const ComplexMatrix second = a.left(i) * a.d();
      for (int j = 0; j < n; ++j) {
        double m = 0.0;
        for (int r = 0; r < n; ++r)
          m = std::max(m, std::norm(d_prod(r, i * n + j) - first(j * n + r, i) - sign(p(i)) * second(r, j)));
        note("d-derivation", std::sqrt(m), at(i, j));
      }
    }
  }

  // bracket_left(i) y = [e_i, y]; [x, y] = sum_l x_l bracket_left(l) y by bilinearity.
  std::vector<ComplexMatrix> bracket_left(z(n));
  for (int i = 0; i < n; ++i)
    bracket_left[z(i)] = a.delta() * a.left(i) - a.left_matrix(a.delta() * e(i)) - sign(p(i)) * a.left(i) * a.delta();
  ComplexMatrix b_rows, b_cols, b_vecs;
  stacks(bracket_left, b_rows, b_cols, b_vecs);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& bi = bracket_left[z(i)];
    // [e_i, e_j e_k] - [e_i, e_j] e_k - (-1)^{(|i|+1)|j|} e_j [e_i, e_k]
    const ComplexMatrix o1 = bi * l_cols;
    const ComplexMatrix o2 = l_vecs * bi;
    const ComplexMatrix o3 = l_rows * bi;
    // [e_i, [e_j, e_k]] - (-1)^{|i|+1} [[e_i, e_j], e_k] - (-1)^{(|i|+1)(|j|+1)} [e_j, [e_i, e_k]]
    const ComplexMatrix j1 = bi * b_cols;
    const ComplexMatrix j2 = b_vecs * bi;
    const ComplexMatrix j3 = b_rows * bi;
    for (int j = 0; j < n; ++j) {
      const double s_order = sign((p(i) + 1) * p(j));
      const double s_jac1 = sign(p(i) + 1);
      const double s_jac2 = sign((p(i) + 1) * (p(j) + 1));
      for (int k = 0; k < n; ++k) {
        double m_order = 0.0, m_jac = 0.0;
        for (int r = 0; r < n; ++r) {
          m_order = std::max(m_order, std::norm(o1(r, j * n + k) - o2(k * n + r, j) - s_order * o3(j * n + r, k)));
          m_jac = std::max(m_jac, std::norm(j1(r, j * n + k) - s_jac1 * j2(k * n + r, j) - s_jac2 * j3(j * n + r, k)));
        }
        note("order<=2", std::sqrt(m_order), at(i, j, k));
        note("jacobi", std::sqrt(m_jac), at(i, j, k));
      }
    }
  }

  AxiomReport report;
  for (std::size_t k = 0; k < worst.size(); ++k)
    if (worst[k].second > bound)
      report.issues.push_back({worst[k].first, "deviation " + std::to_string(worst[k].second) +
                                                   (where[k].empty() ? "" : " at " + where[k])});
  return report;
}

// ---------------------------------------------------------------- degeneration

int cohomology_dim(const BVAlgebra& a, double tol) { return a.dim() - 2 * rank(a.d(), tol); }

std::vector<DegenerationEntry> check_degeneration(const BVAlgebra& a, int n_max, double tol) {
  if (n_max < 1) throw UsageError("check_degeneration needs Nmax >= 1");
  const int dim = a.dim();
  const int h = cohomology_dim(a, tol);
  std::vector<DegenerationEntry> out;
  for (int n = 1; n <= n_max; ++n) {
    ComplexMatrix big = ComplexMatrix::Zero(n * dim, n * dim);
    for (int j = 0; j < n; ++j) {
      big.block(j * dim, j * dim, dim, dim) = a.d();
      if (j + 1 < n) big.block((j + 1) * dim, j * dim, dim, dim) = a.delta();
    }
    const int hd = n * dim - 2 * rank(big, tol);
    out.push_back({n, hd, n * h, hd == n * h});
  }
  return out;
}

// ---------------------------------------------------------------- Maurer-Cartan

namespace {

void require_even_arc(const BVAlgebra& a, const FormalArc& arc) {
  for (int k = 0; k < arc.order(); ++k) {
    const auto& c = arc.coeffs[static_cast<std::size_t>(k)];
    if (c.size() != a.dim()) throw UsageError("arc coefficient " + std::to_string(k + 1) + " has wrong length");
    require_finite(ComplexMatrix(c), "arc coefficient");
    if (a.parity_of(c) != 0) throw UsageError("arc coefficient " + std::to_string(k + 1) + " is not even");
  }
}

}  // namespace

std::vector<ComplexVector> maurer_cartan_residual(const BVAlgebra& a, const FormalArc& arc) {
  require_even_arc(a, arc);
  std::vector<ComplexVector> out;
  for (int k = 1; k <= arc.order(); ++k) {
    ComplexVector r = a.d() * arc.coeffs[static_cast<std::size_t>(k - 1)];
    for (int k1 = 1; k1 < k; ++k1)
      r += 0.5 * a.bracket(arc.coeffs[static_cast<std::size_t>(k1 - 1)], arc.coeffs[static_cast<std::size_t>(k - k1 - 1)]);
    out.push_back(std::move(r));
  }
  return out;
}

MixedSeries::MixedSeries(int dim, int k_order, int u_min, int u_max)
    : dim_(dim), k_order_(k_order), u_min_(u_min), u_max_(u_max) {
  if (dim < 1 || k_order < 1 || u_max < u_min) throw UsageError("invalid mixed series window");
  c_.assign(static_cast<std::size_t>(k_order) * static_cast<std::size_t>(u_max - u_min + 1), ComplexVector::Zero(dim));
}

ComplexVector& MixedSeries::at(int k, int j) {
  if (k < 1 || k > k_order_ || j < u_min_ || j > u_max_) throw UsageError("mixed series index out of window");
  return c_[static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(u_max_ - u_min_ + 1) + static_cast<std::size_t>(j - u_min_)];
}

const ComplexVector& MixedSeries::at(int k, int j) const { return const_cast<MixedSeries*>(this)->at(k, j); }

ComplexVector MixedSeries::get(int k, int j) const {
  if (k < 1 || k > k_order_ || j < u_min_ || j > u_max_) return ComplexVector::Zero(dim_);
  return at(k, j);
}

namespace {

// Product of two mixed series, truncated at eps-order K and u-power `cap`.
MixedSeries mixed_product(const BVAlgebra& alg, const MixedSeries& x, const MixedSeries& y, int cap) {
  const int k_order = x.k_order();
  const int lo = x.u_min() + y.u_min();
  const int hi = std::min(cap, x.u_max() + y.u_max());
  MixedSeries out(x.dim(), k_order, lo, std::max(lo, hi));
  for (int k1 = 1; k1 < k_order; ++k1)
    for (int j1 = x.u_min(); j1 <= x.u_max(); ++j1) {
      const ComplexVector& xv = x.at(k1, j1);
      if (vec_max(xv) == 0.0) continue;
      const ComplexMatrix lx = alg.left_matrix(xv);
      for (int k2 = 1; k1 + k2 <= k_order; ++k2)
        for (int j2 = y.u_min(); j2 <= y.u_max() && j1 + j2 <= hi; ++j2) out.at(k1 + k2, j1 + j2) += lx * y.at(k2, j2);
    }
  return out;
}

}  // namespace

MixedSeries F_transform(const BVAlgebra& alg, const MixedSeries& s, std::optional<int> u_max_out, int window_cap) {
  const int k_order = s.k_order();
  if (k_order > kMaxEpsOrder) throw UsageError("eps-order exceeds the cap of " + std::to_string(kMaxEpsOrder));
  for (int k = 1; k <= k_order; ++k)
    for (int j = s.u_min(); j <= s.u_max(); ++j)
      if (alg.parity_of(s.at(k, j)) != 0) throw UsageError("F_transform needs an even series");
  int lo = s.u_min();
  int hi = s.u_max();
  for (int r = 2; r <= k_order; ++r) {
    lo = std::min(lo, r * s.u_min() - (r - 1));
    hi = std::max(hi, r * s.u_max() - (r - 1));
  }
  if (u_max_out) hi = std::min(hi, *u_max_out);
  hi = std::max(hi, lo);
  if (hi - lo + 1 > window_cap)
    throw WindowOverflow("F_transform needs u-window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", lo, hi);
  const int cap = hi + (k_order - 1) + (k_order - 1) * std::max(0, -s.u_min());
  MixedSeries out(s.dim(), k_order, lo, hi);
  MixedSeries power = s;
  double factorial = 1.0;
  for (int r = 1; r <= k_order; ++r) {
    if (r > 1) {
      power = mixed_product(alg, power, s, cap);
      factorial *= r;
    }
    for (int k = r; k <= k_order; ++k)
      for (int j = power.u_min(); j <= power.u_max(); ++j) {
        const int target = j - (r - 1);
        if (target >= lo && target <= hi) out.at(k, target) += power.at(k, j) / factorial;
      }
  }
  return out;
}

MixedSeries apply_D(const BVAlgebra& alg, const MixedSeries& s) {
  MixedSeries out(s.dim(), s.k_order(), s.u_min(), s.u_max() + 1);
  for (int k = 1; k <= s.k_order(); ++k)
    for (int j = s.u_min(); j <= s.u_max(); ++j) {
      out.at(k, j) += alg.d() * s.at(k, j);
      out.at(k, j + 1) += alg.delta() * s.at(k, j);
    }
  return out;
}

MixedSeries mixed_mc_residual(const BVAlgebra& alg, const MixedSeries& s) {
  const MixedSeries ds = apply_D(alg, s);
  const int lo = std::min(ds.u_min(), 2 * s.u_min());
  const int hi = std::max(ds.u_max(), 2 * s.u_max());
  MixedSeries out(s.dim(), s.k_order(), lo, hi);
  for (int k = 1; k <= s.k_order(); ++k)
    for (int j = ds.u_min(); j <= ds.u_max(); ++j) out.at(k, j) += ds.at(k, j);
  for (int k1 = 1; k1 < s.k_order(); ++k1)
    for (int k2 = 1; k1 + k2 <= s.k_order(); ++k2)
      for (int j1 = s.u_min(); j1 <= s.u_max(); ++j1)
        for (int j2 = s.u_min(); j2 <= s.u_max(); ++j2)
          out.at(k1 + k2, j1 + j2) += 0.5 * alg.bracket(s.at(k1, j1), s.at(k2, j2));
  return out;
}

// ---------------------------------------------------------------- splitting

Splitting build_splitting(const BVAlgebra& a, double tol) {
  const int n = a.dim();
  const ComplexMatrix im_d = column_space(a.d(), tol);
  ComplexMatrix stacked(n + im_d.cols(), n);
  stacked << a.d(), im_d.adjoint();
  Splitting s;
  s.i = max_abs(a.d()) == 0.0 ? ComplexMatrix(ComplexMatrix::Identity(n, n)) : null_space(stacked, tol);
  s.p = s.i.adjoint();
  s.h = -pseudo_inverse(a.d(), tol);
  return s;
}

double splitting_residual(const BVAlgebra& a, const Splitting& s) {
  const int n = a.dim();
  const ComplexMatrix& d = a.d();
  double r = max_abs(s.p * s.i - ComplexMatrix::Identity(s.dim_h(), s.dim_h()));
  r = std::max(r, max_abs(s.i * s.p - ComplexMatrix::Identity(n, n) - d * s.h - s.h * d));
  r = std::max(r, max_abs(s.h * s.h));
  r = std::max(r, max_abs(s.h * s.i));
  r = std::max(r, max_abs(s.p * s.h));
  r = std::max(r, max_abs(d * s.i));
  return r;
}

ComplexMatrix transfer_coefficient(const BVAlgebra& a, const Splitting& s, int k) {
  if (k < 0) throw UsageError("transfer coefficient index must be nonnegative");
  ComplexMatrix m = s.p;
  const ComplexMatrix step = a.delta() * s.h;
  for (int j = 0; j < k; ++j) m = m * step;
  return m;
}

double transferred_differential_norm(const BVAlgebra& a, const Splitting& s, int k_max) {
  double worst = 0.0;
  for (int k = 0; k < k_max; ++k) worst = std::max(worst, max_abs(transfer_coefficient(a, s, k) * a.delta() * s.i));
  return worst;
}

// ---------------------------------------------------------------- period map

PhiTResult phi_T(const BVAlgebra& alg, const FormalArc& arc, const Splitting& s, const PhiTOptions& options) {
  const int big_k = arc.order();
  if (big_k < 1) throw UsageError("phi_T needs a nonempty arc");
  if (big_k > kMaxEpsOrder) throw UsageError("eps-order exceeds the cap of " + std::to_string(kMaxEpsOrder));
  const int m_lift = options.lift_order.value_or(std::min(big_k + 2, kMaxLiftOrder));
  if (m_lift < big_k || m_lift > kMaxLiftOrder)
    throw UsageError("lift order must lie in [K, " + std::to_string(kMaxLiftOrder) + "]");
  const int dim = alg.dim();
  const int dh = s.dim_h();
  if (s.i.rows() != dim || s.h.rows() != dim) throw UsageError("splitting does not match the algebra");

  double scale = 1.0;
  for (const auto& c : arc.coeffs) scale = std::max(scale, vec_max(c));
  const auto mc = maurer_cartan_residual(alg, arc);
  for (int k = 0; k < big_k; ++k)
    if (vec_max(mc[static_cast<std::size_t>(k)]) > options.tol * scale * scale)
      throw UsageError("arc fails the Maurer-Cartan equation at order " + std::to_string(k + 1));

  std::vector<ComplexMatrix> tcoef;
  for (int m = 0; m <= m_lift + big_k; ++m) tcoef.push_back(transfer_coefficient(alg, s, m));
  const ComplexMatrix one_plus_dh = ComplexMatrix::Identity(dim, dim) + alg.d() * s.h;

  PhiTResult result{{}, MixedSeries(dim, big_k, 0, m_lift), 0.0, 0.0, {}};
  MixedSeries& lift = result.lift;

  for (int k = 1; k <= big_k; ++k) {
    const int j_lo = -(k - 1);
    const int j_hi = m_lift - k + 1;
    // Bracket terms from lower orders.
    std::vector<ComplexVector> brackets(static_cast<std::size_t>(m_lift + 1), ComplexVector::Zero(dim));
    for (int j = 1; j <= m_lift; ++j)
      for (int k1 = 1; k1 < k; ++k1)
        for (int j1 = 0; j1 <= j; ++j1)
          brackets[static_cast<std::size_t>(j)] += 0.5 * alg.bracket(lift.at(k1, j1), lift.at(k - k1, j - j1));
    // F of the lower orders contributes a fixed part to b_k.
    std::vector<ComplexVector> lower(static_cast<std::size_t>(j_hi - j_lo + 1), ComplexVector::Zero(dim));
    if (k > 1) {
      MixedSeries trunc(dim, k, 0, m_lift);
      for (int k1 = 1; k1 < k; ++k1)
        for (int j = 0; j <= m_lift; ++j) trunc.at(k1, j) = lift.at(k1, j);
      const MixedSeries f = F_transform(alg, trunc, j_hi);
      for (int j = j_lo; j <= j_hi; ++j) lower[static_cast<std::size_t>(j - j_lo)] = f.get(k, j);
    }

    struct Eval {
      std::vector<ComplexVector> coeffs;
      ComplexVector constraints;
      ComplexVector t_nonzero;
      ComplexVector t_zero;
    };
    const int n_t = j_hi - j_lo;  // number of j != 0
    auto evaluate = [&](const ComplexVector& c) {
      Eval e;
      e.coeffs.push_back(arc.coeffs[static_cast<std::size_t>(k - 1)]);
      e.constraints = ComplexVector::Zero(dim * m_lift);
      for (int j = 1; j <= m_lift; ++j) {
        const ComplexVector r = -(alg.delta() * e.coeffs.back()) - brackets[static_cast<std::size_t>(j)];
        e.constraints.segment((j - 1) * dim, dim) = one_plus_dh * r;
        e.coeffs.push_back(-(s.h * r) + s.i * c.segment((j - 1) * dh, dh));
      }
      auto b = [&](int j) -> ComplexVector {
        ComplexVector v = lower[static_cast<std::size_t>(j - j_lo)];
        if (j >= 0) v += e.coeffs[static_cast<std::size_t>(j)];
        return v;
      };
      e.t_nonzero = ComplexVector::Zero(dh * n_t);
      e.t_zero = ComplexVector::Zero(dh);
      for (int j = j_lo, slot = 0; j <= j_hi; ++j) {
        ComplexVector t = ComplexVector::Zero(dh);
        for (int m = 0; j - m >= j_lo; ++m) t += tcoef[static_cast<std::size_t>(m)] * b(j - m);
        if (j == 0) {
          e.t_zero = t;
        } else {
          e.t_nonzero.segment(slot * dh, dh) = t;
          ++slot;
        }
      }
      return e;
    };

    const int n_c = dh * m_lift;
    const Eval base = evaluate(ComplexVector::Zero(n_c));
    ComplexMatrix cmat(base.constraints.size(), n_c);
    ComplexMatrix gmat(base.t_nonzero.size(), n_c);
    for (int col = 0; col < n_c; ++col) {
      const Eval unit = evaluate(ComplexVector::Unit(n_c, col));
      cmat.col(col) = unit.constraints - base.constraints;
      gmat.col(col) = unit.t_nonzero - base.t_nonzero;
    }
    ComplexVector c = ComplexVector::Zero(n_c);
    if (n_c > 0) {
      const double tol = 1e-10;
      c = least_squares(cmat, -base.constraints, tol);
      const ComplexMatrix z = max_abs(cmat) == 0.0 ? ComplexMatrix(ComplexMatrix::Identity(n_c, n_c)) : null_space(cmat, tol);
      if (z.cols() > 0 && gmat.rows() > 0) c += z * least_squares(gmat * z, -(base.t_nonzero + gmat * c), tol);
    }
    const Eval fin = evaluate(c);
    const double cres = vec_max(fin.constraints);
    double lift_scale = scale;
    for (const auto& v : fin.coeffs) lift_scale = std::max(lift_scale, vec_max(v));
    if (cres > options.tol * lift_scale)
      throw UnsolvableOrder("lift equation has no solution at eps-order " + std::to_string(k), k);
    const double ures = vec_max(fin.t_nonzero);
    if (options.require_u_free && ures > options.tol * lift_scale)
      throw UnsolvableOrder("u-dependence of T[b] cannot be removed at eps-order " + std::to_string(k), k);
    for (int j = 0; j <= m_lift; ++j) lift.at(k, j) = fin.coeffs[static_cast<std::size_t>(j)];
    result.classes.push_back(fin.t_zero);
    result.constraint_residual = std::max(result.constraint_residual, cres);
    result.u_residual = std::max(result.u_residual, ures);
    result.u_residual_by_order.push_back(ures);
  }
  return result;
}

// ---------------------------------------------------------------- minimal model

MinimalModelReport minimal_model_products(const BVAlgebra& alg, const Splitting& s, int order) {
  if (order != 2 && order != 3) throw UsageError("minimal model order must be 2 or 3");
  MinimalModelReport report;
  const int dh = s.dim_h();
  std::vector<ComplexVector> reps;
  std::vector<int> shifted;
  for (int x = 0; x < dh; ++x) {
    reps.push_back(s.i.col(x));
    const int par = alg.parity_of(reps.back());
    shifted.push_back(par < 0 ? 0 : (par + 1) % 2);
  }
  for (int x = 0; x < dh; ++x)
    for (int y = 0; y < dh; ++y)
      report.m2 = std::max(report.m2, vec_max(s.p * alg.bracket(reps[static_cast<std::size_t>(x)], reps[static_cast<std::size_t>(y)])));
  if (order == 3) {
    auto l2h = [&](int x, int y, int z) {
      return alg.bracket(s.h * alg.bracket(reps[static_cast<std::size_t>(x)], reps[static_cast<std::size_t>(y)]),
                         reps[static_cast<std::size_t>(z)]);
    };
    for (int x = 0; x < dh; ++x)
      for (int y = 0; y < dh; ++y)
        for (int z = 0; z < dh; ++z) {
          const int sx = shifted[static_cast<std::size_t>(x)];
          const int sy = shifted[static_cast<std::size_t>(y)];
          const int sz = shifted[static_cast<std::size_t>(z)];
          const ComplexVector v = l2h(x, y, z) + sign(sx * (sy + sz)) * l2h(y, z, x) + sign(sz * (sx + sy)) * l2h(z, x, y);
          report.m3 = std::max(report.m3, vec_max(s.p * v));
        }
  }
  return report;
}

}  // namespace nchodge
