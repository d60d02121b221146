#include "nchodge/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nchodge/errors.hpp"

namespace nchodge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double pair_direction(Complex ca, Complex cb) {
  return canonical_angle(std::arg(ca - cb) - std::numbers::pi / 2.0);
}

std::vector<int> sorted_order(const ExponentSet& e, double phi) {
  std::vector<double> key(static_cast<std::size_t>(e.size()));
  for (int a = 0; a < e.size(); ++a) key[static_cast<std::size_t>(a)] = (e[a] * std::polar(1.0, -phi)).real();
  std::vector<int> order(key.size());
  for (int a = 0; a < e.size(); ++a) order[static_cast<std::size_t>(a)] = a;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return key[static_cast<std::size_t>(x)] < key[static_cast<std::size_t>(y)]; });
  double scale = 1.0;
  for (Complex c : e.values()) scale = std::max(scale, std::abs(c));
  for (std::size_t p = 1; p < order.size(); ++p)
    if (key[static_cast<std::size_t>(order[p])] - key[static_cast<std::size_t>(order[p - 1])] <= 1e-12 * scale)
      throw UsageError("labels tie inside an arc; non-generic exponents are refused");
  return order;
}

int find_direction(const ArcDecomposition& arcs, double phi) {
  for (std::size_t i = 0; i < arcs.directions.size(); ++i)
    if (angle_distance(arcs.directions[i], phi) <= kAngleTol) return static_cast<int>(i);
  return -1;
}

Crossing crossing_at(const ExponentSet& e, const ArcDecomposition& arcs, int index) {
  const int k = static_cast<int>(arcs.directions.size());
  Crossing c;
  c.direction = arcs.directions[static_cast<std::size_t>(index)];
  c.before = arcs.arcs[static_cast<std::size_t>(index)].order;
  c.after = arcs.arcs[static_cast<std::size_t>((index + 1) % k)].order;
  const int m = e.size();
  auto crosses = [&](int a, int b) {
    return angle_distance(pair_direction(e[a], e[b]), c.direction) <= 2 * kAngleTol ||
           angle_distance(pair_direction(e[b], e[a]), c.direction) <= 2 * kAngleTol;
  };
  std::vector<int> expected = c.before;
  for (int p = 0; p < m;) {
    int q = p;
    while (q + 1 < m && crosses(c.before[static_cast<std::size_t>(q)], c.before[static_cast<std::size_t>(q + 1)])) ++q;
    if (q > p) {
      c.blocks.emplace_back(p, q);
      std::reverse(expected.begin() + p, expected.begin() + q + 1);
    }
    p = q + 1;
  }
  if (expected != c.after)
    throw SelfCheckError("crossing is not a product of consecutive block reversals");
  c.permutation.resize(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p) {
    const auto it = std::find(c.before.begin(), c.before.end(), c.after[static_cast<std::size_t>(p)]);
    c.permutation[static_cast<std::size_t>(p)] = static_cast<int>(it - c.before.begin());
  }
  return c;
}

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

std::vector<ComplexMatrix> flag_from_basis(const ComplexMatrix& basis, const std::vector<int>& order,
                                           const std::vector<int>& dims) {
  std::vector<ComplexMatrix> flag;
  Eigen::Index cols = 0;
  for (int label : order) {
    cols += dims[static_cast<std::size_t>(label)];
    flag.push_back(basis.leftCols(cols));
  }
  return flag;
}

}  // namespace

ExponentSet::ExponentSet(std::vector<Complex> values, double tol) : values_(std::move(values)) {
  if (values_.empty()) throw UsageError("exponent set must be nonempty");
  double scale = 1.0;
  for (Complex c : values_) {
    require_finite(c, "exponent");
    scale = std::max(scale, std::abs(c));
  }
  for (std::size_t a = 0; a < values_.size(); ++a)
    for (std::size_t b = a + 1; b < values_.size(); ++b)
      if (std::abs(values_[a] - values_[b]) <= tol * scale)
        throw UsageError("exponents closer than tolerance; refusing to merge");
}

double canonical_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi - kAngleTol) r = 0.0;
  return r;
}

ArcDecomposition stokes_directions(const ExponentSet& e) {
  ArcDecomposition out;
  std::vector<double> all;
  for (int a = 0; a < e.size(); ++a)
    for (int b = 0; b < e.size(); ++b)
      if (a != b) all.push_back(pair_direction(e[a], e[b]));
  std::sort(all.begin(), all.end());
  for (double phi : all)
    if (out.directions.empty() || phi - out.directions.back() > kAngleTol) out.directions.push_back(phi);
  if (out.directions.size() > 1 && out.directions.front() + kTwoPi - out.directions.back() <= kAngleTol)
    out.directions.pop_back();

  const std::size_t k = out.directions.size();
  if (k == 0) {
    out.arcs.push_back({0.0, kTwoPi, sorted_order(e, 0.0)});
    return out;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double begin = i == 0 ? out.directions[k - 1] - kTwoPi : out.directions[i - 1];
    const double end = out.directions[i];
    out.arcs.push_back({begin, end, sorted_order(e, 0.5 * (begin + end))});
  }
  return out;
}

Crossing crossing_permutation(const ExponentSet& e, double phi) {
  const ArcDecomposition arcs = stokes_directions(e);
  const int index = find_direction(arcs, canonical_angle(phi));
  if (index < 0) throw UsageError("angle is not a Stokes direction");
  return crossing_at(e, arcs, index);
}

std::vector<int> label_dimensions(const FilteredLocalSystem& f, const ExponentSet& e) {
  const ArcDecomposition arcs = stokes_directions(e);
  const int m = e.size();
  if (f.rank < 1) throw UsageError("filtration rank must be positive");
  if (f.monodromy.rows() != f.rank || f.monodromy.cols() != f.rank)
    throw UsageError("monodromy has wrong shape");
  if (f.arcs.size() != arcs.arcs.size())
    throw UsageError("filtration has " + std::to_string(f.arcs.size()) + " arcs, expected " +
                     std::to_string(arcs.arcs.size()));
  std::vector<int> dims(static_cast<std::size_t>(m), 0);
  for (std::size_t a = 0; a < f.arcs.size(); ++a) {
    const auto& flag = f.arcs[a];
    if (static_cast<int>(flag.size()) != m) throw UsageError("flag on arc " + std::to_string(a) + " has wrong length");
    Eigen::Index prev = 0;
    for (int t = 0; t < m; ++t) {
      const ComplexMatrix& step = flag[static_cast<std::size_t>(t)];
      if (step.rows() != f.rank) throw UsageError("flag step has wrong ambient dimension");
      const int label = arcs.arcs[a].order[static_cast<std::size_t>(t)];
      const int d = static_cast<int>(step.cols() - prev);
      if (a == 0) {
        if (d < 1) throw UsageError("flag steps must grow");
        dims[static_cast<std::size_t>(label)] = d;
      } else if (d != dims[static_cast<std::size_t>(label)]) {
        throw UsageError("graded dimension of label " + std::to_string(label) + " differs between arcs");
      }
      prev = step.cols();
    }
    if (prev != f.rank) throw UsageError("final flag step is not the whole fiber");
  }
  return dims;
}

ValidationReport validate_filtration(const FilteredLocalSystem& f, const ExponentSet& e, double tol) {
  label_dimensions(f, e);
  const ArcDecomposition arcs = stokes_directions(e);
  const int m = e.size();
  const int k = static_cast<int>(arcs.directions.size());
  ValidationReport report;

  for (std::size_t a = 0; a < f.arcs.size(); ++a) {
    const auto& flag = f.arcs[a];
    const Arc& arc = arcs.arcs[a];
    const double mid = canonical_angle(0.5 * (arc.begin + arc.end));
    for (int t = 0; t < m; ++t) {
      const ComplexMatrix& step = flag[static_cast<std::size_t>(t)];
      if (rank(step, tol) != step.cols())
        report.issues.push_back({mid, "structure", "arc " + std::to_string(a) + " step " + std::to_string(t + 1) + " is degenerate"});
      if (t > 0) {
        const ComplexMatrix& prev = flag[static_cast<std::size_t>(t - 1)];
        ComplexMatrix both(f.rank, step.cols() + prev.cols());
        both << step, prev;
        if (rank(both, tol) != rank(step, tol))
          report.issues.push_back({mid, "structure", "arc " + std::to_string(a) + " step " + std::to_string(t) + " not contained in the next"});
      }
    }
  }
  if (rank(f.monodromy, tol) != f.rank)
    report.issues.push_back({0.0, "monodromy", "monodromy is not invertible"});
  if (!report.valid()) return report;

  std::vector<ComplexMatrix> turned;
  for (const auto& step : f.arcs.front()) turned.push_back(f.monodromy * step);

  for (int i = 0; i < k; ++i) {
    const Crossing c = crossing_at(e, arcs, i);
    const bool wrap = i == k - 1;
    const auto& lhs = f.arcs[static_cast<std::size_t>(i)];
    const auto& rhs = wrap ? turned : f.arcs[static_cast<std::size_t>(i + 1)];
    auto step = [](const std::vector<ComplexMatrix>& flag, int s) -> const ComplexMatrix& {
      return flag[static_cast<std::size_t>(s - 1)];
    };
    std::vector<int> inner_of(static_cast<std::size_t>(m + 1), -1);
    std::vector<bool> is_top(static_cast<std::size_t>(m + 1), false);
    for (std::size_t b = 0; b < c.blocks.size(); ++b) {
      const auto [lo, hi] = c.blocks[b];
      for (int s = lo + 1; s <= hi; ++s) inner_of[static_cast<std::size_t>(s)] = static_cast<int>(b);
      is_top[static_cast<std::size_t>(hi + 1)] = true;
    }
    for (int s = 1; s < m; ++s) {
      if (inner_of[static_cast<std::size_t>(s)] >= 0) continue;
      if (!same_subspace(step(lhs, s), step(rhs, s), tol)) {
        const std::string cond = wrap ? "monodromy" : is_top[static_cast<std::size_t>(s)] ? "block-top" : "unchanged";
        report.issues.push_back({c.direction, cond, "step " + std::to_string(s) + " differs across the direction"});
      }
    }
    for (const auto& [lo, hi] : c.blocks) {
      const Eigen::Index top = step(lhs, hi + 1).cols();
      for (int s = lo + 1; s <= hi; ++s) {
        const int partner = hi + 1 + lo - s;
        const ComplexMatrix& g = step(lhs, s);
        const ComplexMatrix& gp = step(rhs, partner);
        ComplexMatrix both(f.rank, g.cols() + gp.cols());
        both << g, gp;
        if (rank(both, tol) != top)
          report.issues.push_back({c.direction, wrap ? "monodromy" : "opposed",
                                   "steps " + std::to_string(s) + " and " + std::to_string(partner) +
                                       " of block [" + std::to_string(lo + 1) + "," + std::to_string(hi + 1) +
                                       "] are not opposed"});
      }
    }
  }
  return report;
}

FilteredLocalSystem generic_filtration(const ExponentSet& e, const std::vector<int>& dims,
                                       std::mt19937_64& rng) {
  const int m = e.size();
  if (static_cast<int>(dims.size()) != m) throw UsageError("one dimension per exponent required");
  int r = 0;
  for (int d : dims) {
    if (d < 1) throw UsageError("graded dimensions must be positive");
    r += d;
  }
  const ArcDecomposition arcs = stokes_directions(e);
  const int k = static_cast<int>(arcs.directions.size());
  FilteredLocalSystem f;
  f.rank = r;
  const ComplexMatrix b0 = random_matrix(r, r, rng);
  ComplexMatrix basis = b0;
  f.arcs.push_back(flag_from_basis(basis, arcs.arcs[0].order, dims));
  for (int i = 0; i < k; ++i) {
    const Crossing c = crossing_at(e, arcs, i);
    std::vector<Eigen::Index> start(static_cast<std::size_t>(m + 1), 0);
    for (int p = 0; p < m; ++p)
      start[static_cast<std::size_t>(p + 1)] = start[static_cast<std::size_t>(p)] + dims[static_cast<std::size_t>(c.before[static_cast<std::size_t>(p)])];
    for (const auto& [lo, hi] : c.blocks) {
      const Eigen::Index c0 = start[static_cast<std::size_t>(lo)];
      const Eigen::Index w = start[static_cast<std::size_t>(hi + 1)] - c0;
      basis.middleCols(c0, w) = (basis.middleCols(c0, w) * random_matrix(w, w, rng)).eval();
    }
    if (i + 1 < k) f.arcs.push_back(flag_from_basis(basis, c.after, dims));
  }
  f.monodromy = k == 0 ? random_matrix(r, r, rng) : ComplexMatrix(basis * b0.inverse());
  return f;
}

Skeleton skeleton_from_connection(const MeromorphicConnection& conn, double dedup_tol) {
  std::vector<Complex> values;
  std::vector<int> mult;
  for (const auto& c : exponent_clusters(conn, dedup_tol)) {
    values.push_back(c.value);
    mult.push_back(c.multiplicity);
  }
  return Skeleton{ExponentSet(std::move(values), dedup_tol), std::move(mult)};
}

}  // namespace nchodge
