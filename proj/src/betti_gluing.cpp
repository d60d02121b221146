#include "nchodge/betti_gluing.hpp"

#include <algorithm>
#include <string>

#include "nchodge/errors.hpp"

namespace nchodge {

namespace {

std::string key(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

ComplexMatrix hstack(const std::vector<ComplexMatrix>& blocks, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  ComplexMatrix out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

}  // namespace

BiiiData::BiiiData(std::vector<Complex> points, std::vector<int> dims,
                   std::map<std::pair<int, int>, ComplexMatrix> maps, double tol)
    : points_(std::move(points)), dims_(std::move(dims)), maps_(std::move(maps)) {
  const int n = size();
  if (n < 1) throw UsageError("B(iii) data needs at least one point");
  if (static_cast<int>(dims_.size()) != n) throw UsageError("one dimension per point required");
  for (int d : dims_)
    if (d < 1) throw UsageError("dim U_i must be positive");
  for (int i = 0; i < n; ++i) {
    require_finite(points_[static_cast<std::size_t>(i)], "point");
    for (int j = 0; j < i; ++j)
      if (std::abs(points_[static_cast<std::size_t>(i)] - points_[static_cast<std::size_t>(j)]) <= tol)
        throw UsageError("points must be distinct");
  }
  for (const auto& [ij, m] : maps_) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n) throw UsageError("map index " + key(i, j) + " out of range");
    if (m.rows() != dims_[static_cast<std::size_t>(i)] || m.cols() != dims_[static_cast<std::size_t>(j)])
      throw UsageError("map " + key(i, j) + " has wrong shape");
    require_finite(m, "gluing map");
  }
  for (int i = 0; i < n; ++i)
    if (rank(map(i, i), tol) != dims_[static_cast<std::size_t>(i)])
      throw UsageError("T_ii must be invertible (i = " + std::to_string(i) + ")");
}

ComplexMatrix BiiiData::map(int i, int j) const {
  auto it = maps_.find({i, j});
  if (it != maps_.end()) return it->second;
  return ComplexMatrix::Zero(dims_.at(static_cast<std::size_t>(i)), dims_.at(static_cast<std::size_t>(j)));
}

int BiiiData::total_dim() const {
  int s = 0;
  for (int d : dims_) s += d;
  return s;
}

int BiiiData::offset(int i) const {
  int s = 0;
  for (int k = 0; k < i; ++k) s += dims_[static_cast<std::size_t>(k)];
  return s;
}

ComplexMatrix BiiiData::assembled() const {
  const int total = total_dim();
  ComplexMatrix t = ComplexMatrix::Zero(total, total);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      t.block(offset(i), offset(j), dims_[static_cast<std::size_t>(i)], dims_[static_cast<std::size_t>(j)]) = map(i, j);
  return t;
}

void DescentData::validate(double tol) const {
  if (dim_u < 1) throw UsageError("dim U must be positive");
  if (psi.empty()) throw UsageError("descent data needs at least one point");
  if (t.size() != psi.size()) throw UsageError("one T_i per subspace V_i required");
  const ComplexMatrix id = ComplexMatrix::Identity(dim_u, dim_u);
  for (int i = 0; i < size(); ++i) {
    const auto& p = psi[static_cast<std::size_t>(i)];
    const auto& ti = t[static_cast<std::size_t>(i)];
    if (p.rows() != dim_u) throw UsageError("psi_" + std::to_string(i) + " has wrong target dimension");
    if (ti.rows() != dim_u || ti.cols() != dim_u) throw UsageError("T_" + std::to_string(i) + " has wrong shape");
    require_finite(p, "psi");
    require_finite(ti, "T");
    if (rank(ti, tol) != dim_u) throw UsageError("T_" + std::to_string(i) + " is not invertible");
    if (p.cols() > 0 && max_abs((ti - id) * p) > tol * std::max(1.0, max_abs(ti)) * std::max(1.0, max_abs(p)))
      throw UsageError("im psi_" + std::to_string(i) + " is not fixed by T_" + std::to_string(i));
  }
}

DescentData biii_to_descent(const BiiiData& b) {
  const int n = b.size();
  const int total = b.total_dim();
  DescentData d;
  d.dim_u = total;
  for (int i = 0; i < n; ++i) {
    const int di = b.dims()[static_cast<std::size_t>(i)];
    const int off = b.offset(i);
    ComplexMatrix psi = ComplexMatrix::Zero(total, total - di);
    for (int r = 0, c = 0; r < total; ++r) {
      if (r >= off && r < off + di) continue;
      psi(r, c++) = 1.0;
    }
    ComplexMatrix ti = ComplexMatrix::Identity(total, total);
    for (int j = 0; j < n; ++j)
      ti.block(b.offset(j), off, b.dims()[static_cast<std::size_t>(j)], di) = b.map(j, i);
    d.psi.push_back(std::move(psi));
    d.t.push_back(std::move(ti));
  }
  return d;
}

AcyclicityReport check_acyclicity(const DescentData& d, double tol) {
  const int n = d.size();
  const int u = d.dim_u;

  // (v, w) -> (psi_i v_i - w)_i on (+V_i) + U -> U^n.
  int sum_v = 0;
  for (const auto& p : d.psi) sum_v += static_cast<int>(p.cols());
  ComplexMatrix complex_map = ComplexMatrix::Zero(n * u, sum_v + u);
  for (int i = 0, c = 0; i < n; ++i) {
    const auto& p = d.psi[static_cast<std::size_t>(i)];
    complex_map.block(i * u, c, u, p.cols()) = p;
    complex_map.block(i * u, sum_v, u, u) = -ComplexMatrix::Identity(u, u);
    c += static_cast<int>(p.cols());
  }
  const bool via_complex = complex_map.rows() == complex_map.cols() && rank(complex_map, tol) == complex_map.cols();

  bool injective = true;
  std::vector<ComplexMatrix> quotient_maps;
  for (const auto& p : d.psi) {
    if (rank(p, tol) != p.cols()) injective = false;
    quotient_maps.push_back(orthogonal_complement(p, u, tol).adjoint());
  }
  Eigen::Index rows = 0;
  for (const auto& q : quotient_maps) rows += q.rows();
  ComplexMatrix to_quotients(rows, u);
  for (Eigen::Index r = 0; const auto& q : quotient_maps) {
    to_quotients.middleRows(r, q.rows()) = q;
    r += q.rows();
  }
  const bool iso = rows == u && rank(to_quotients, tol) == u;
  const bool via_conditions = injective && iso;
  return {via_complex && via_conditions, via_complex, via_conditions};
}

Conversion descent_to_biii(const DescentData& d, const std::vector<Complex>& points, double tol) {
  d.validate(tol);
  const AcyclicityReport acyc = check_acyclicity(d, tol);
  if (!acyc.via_conditions) throw NotConvertibleError("U -> (+) U/V_i is not an isomorphism");
  const int n = d.size();
  const int u = d.dim_u;

  // U/V_i is realized by the complement W_i = intersection of im psi_k, k != i.
  std::vector<ComplexMatrix> complements;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix w = ComplexMatrix::Identity(u, u);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const ComplexMatrix& p = d.psi[static_cast<std::size_t>(k)];
      // x in span(w) and in im p: null space of [w  -p].
      ComplexMatrix both(u, w.cols() + p.cols());
      both << w, -p;
      const ComplexMatrix kernel = null_space(both, tol);
      w = column_space(w * kernel.topRows(w.cols()), tol);
    }
    complements.push_back(w);
  }
  std::vector<int> dims;
  for (const auto& w : complements) dims.push_back(static_cast<int>(w.cols()));
  for (int i = 0; i < n; ++i)
    if (dims[static_cast<std::size_t>(i)] != u - d.psi[static_cast<std::size_t>(i)].cols())
      throw NotConvertibleError("complement of V_" + std::to_string(i) + " has the wrong dimension");
  const ComplexMatrix e = hstack(complements, u);
  const Eigen::FullPivLU<ComplexMatrix> e_lu(e);
  if (!e_lu.isInvertible()) throw NotConvertibleError("complements do not span U");

  std::map<std::pair<int, int>, ComplexMatrix> maps;
  std::vector<int> offsets(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) offsets[static_cast<std::size_t>(i)] = offsets[static_cast<std::size_t>(i - 1)] + dims[static_cast<std::size_t>(i - 1)];
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix column = e_lu.solve(d.t[static_cast<std::size_t>(i)] * complements[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
      ComplexMatrix block = column.middleRows(offsets[static_cast<std::size_t>(j)], dims[static_cast<std::size_t>(j)]);
      if (j != i && max_abs(block) == 0.0) continue;
      maps.emplace(std::make_pair(j, i), std::move(block));
    }
  }
  std::vector<Complex> pts = points;
  if (pts.empty())
    for (int i = 0; i < n; ++i) pts.emplace_back(static_cast<double>(i), 0.0);
  if (static_cast<int>(pts.size()) != n) throw UsageError("one point per subspace required");
  return Conversion{BiiiData(std::move(pts), std::move(dims), std::move(maps), tol), std::move(complements)};
}

bool check_quiver_rep(const BiiiData& b, double tol, const std::vector<ComplexMatrix>* projector_override) {
  const int n = b.size();
  const int total = b.total_dim();
  const ComplexMatrix t = b.assembled();
  for (int i = 0; i < n; ++i) {
    const int di = b.dims()[static_cast<std::size_t>(i)];
    const int off = b.offset(i);
    ComplexMatrix p = ComplexMatrix::Zero(total, total);
    p.block(off, off, di, di).setIdentity();
    if (projector_override) p = projector_override->at(static_cast<std::size_t>(i));
    const ComplexMatrix tii = b.map(i, i);
    const Eigen::FullPivLU<ComplexMatrix> lu(tii);
    if (!lu.isInvertible() || rank(tii, tol) != di) return false;
    ComplexMatrix inv = ComplexMatrix::Zero(total, total);
    inv.block(off, off, di, di) = lu.inverse();
    const ComplexMatrix ptp = p * t * p;
    if (!approx_equal(p * p, p, tol)) return false;
    if (!approx_equal(inv * ptp, p, tol)) return false;
    if (!approx_equal(ptp * inv, p, tol)) return false;
  }
  return true;
}

double round_trip_deviation(const BiiiData& original, const Conversion& converted) {
  const int n = original.size();
  if (converted.data.size() != n) return std::numeric_limits<double>::infinity();
  std::vector<ComplexMatrix> p;
  for (int i = 0; i < n; ++i) {
    if (converted.data.dims()[static_cast<std::size_t>(i)] != original.dims()[static_cast<std::size_t>(i)])
      return std::numeric_limits<double>::infinity();
    // P_i: U_i' -> U_i, the block-i rows of the identification.
    p.push_back(converted.identifications[static_cast<std::size_t>(i)].middleRows(
        original.offset(i), original.dims()[static_cast<std::size_t>(i)]));
  }
  double dev = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix expect = p[static_cast<std::size_t>(i)] * converted.data.map(i, j) *
                                   p[static_cast<std::size_t>(j)].inverse();
      dev = std::max(dev, max_abs(expect - original.map(i, j)));
    }
  return dev;
}

BiiiData permute_points(const BiiiData& b, const std::vector<int>& perm) {
  const int n = b.size();
  if (static_cast<int>(perm.size()) != n) throw UsageError("permutation has wrong length");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]++) throw UsageError("not a permutation");
  }
  std::vector<Complex> pts;
  std::vector<int> dims;
  for (int p : perm) {
    pts.push_back(b.points()[static_cast<std::size_t>(p)]);
    dims.push_back(b.dims()[static_cast<std::size_t>(p)]);
  }
  std::map<std::pair<int, int>, ComplexMatrix> maps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto it = b.maps().find({perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]});
      if (it != b.maps().end()) maps.emplace(std::make_pair(i, j), it->second);
    }
  return BiiiData(std::move(pts), std::move(dims), std::move(maps));
}

BiiiData GluedStructure::data() const {
  std::vector<int> dims;
  std::map<std::pair<int, int>, ComplexMatrix> maps = gluing;
  for (std::size_t i = 0; i < regular.size(); ++i) {
    dims.push_back(regular[i].first);
    maps[{static_cast<int>(i), static_cast<int>(i)}] = regular[i].second;
  }
  return BiiiData(points, std::move(dims), std::move(maps));
}

GluedStructure glue(std::vector<std::pair<int, ComplexMatrix>> regular,
                    std::map<std::pair<int, int>, ComplexMatrix> gluing, std::vector<Complex> points,
                    double tol) {
  for (const auto& [ij, m] : gluing)
    if (ij.first == ij.second) throw UsageError("gluing data must be off-diagonal");
  GluedStructure g{std::move(regular), std::move(gluing), std::move(points)};
  std::vector<int> dims;
  std::map<std::pair<int, int>, ComplexMatrix> maps = g.gluing;
  for (std::size_t i = 0; i < g.regular.size(); ++i) {
    dims.push_back(g.regular[i].first);
    maps[{static_cast<int>(i), static_cast<int>(i)}] = g.regular[i].second;
  }
  BiiiData(g.points, std::move(dims), std::move(maps), tol);
  return g;
}

}  // namespace nchodge
