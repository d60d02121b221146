#include "nchodge/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "nchodge/errors.hpp"

namespace nchodge::gen {

namespace {

int uniform_int(int lo, int hi, std::mt19937_64& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(double lo, double hi, std::mt19937_64& rng) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

Complex random_unit_scalar(std::mt19937_64& rng) {
  return std::polar(uniform(0.5, 2.0, rng), uniform(0.0, 2.0 * std::numbers::pi, rng));
}

/// T = 1 + Y (1 - P) with P the projector onto im psi and |Y| <= 1/2.
ComplexMatrix fixing_automorphism(const ComplexMatrix& psi, std::mt19937_64& rng) {
  const Eigen::Index u = psi.rows();
  const ComplexMatrix q = column_space(psi);
  const ComplexMatrix proj = q * q.adjoint();
  ComplexMatrix y = random_matrix(u, u, rng);
  const double norm = Eigen::JacobiSVD<ComplexMatrix>(y).singularValues()(0);
  if (norm > 0) y *= 0.5 / norm;
  return ComplexMatrix::Identity(u, u) + y * (ComplexMatrix::Identity(u, u) - proj);
}

DescentData assemble(int u, std::vector<ComplexMatrix> psi, std::mt19937_64& rng) {
  DescentData d;
  d.dim_u = u;
  for (const auto& p : psi) d.t.push_back(fixing_automorphism(p, rng));
  d.psi = std::move(psi);
  return d;
}

ComplexMatrix grassmann_monomial(const BVAlgebra& g, int mask) { return g.left_matrix(g.basis(mask)); }

/// d = theta_S d/dtheta_i with |S| in {0, 2}, i not in S.
std::vector<ComplexMatrix> grassmann_differentials(int n) {
  const BVAlgebra g = grassmann(n);
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < n; ++i)
    for (int mask = 0; mask < (1 << n); ++mask) {
      const int pc = std::popcount(static_cast<unsigned>(mask));
      if (pc % 2 != 0 || pc > 2 || (mask & (1 << i))) continue;
      ComplexMatrix d = grassmann_monomial(g, mask) * grassmann_derivative(n, i);
      if (max_abs(d * d) > 1e-12) continue;
      out.push_back(std::move(d));
    }
  return out;
}

double bracket_activity(const BVAlgebra& a, std::mt19937_64& rng) {
  const ComplexVector c1 = random_homogeneous(a, 1, rng);
  const ComplexVector c2 = random_homogeneous(a, 1, rng);
  double act = 0.0;
  for (const ComplexVector& x : {ComplexVector(a.d() * c1), ComplexVector(a.delta() * c1)})
    for (const ComplexVector& y : {ComplexVector(a.d() * c2), ComplexVector(a.delta() * c2)})
      act = std::max(act, a.bracket(x, y).cwiseAbs().maxCoeff());
  return act;
}

}  // namespace

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

ComplexVector random_vector(Eigen::Index size, std::mt19937_64& rng) {
  ComplexVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = random_complex(rng);
  return v;
}

ComplexVector random_homogeneous(const BVAlgebra& a, int parity, std::mt19937_64& rng) {
  ComplexVector v = ComplexVector::Zero(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    if (a.parity(i) == parity) v(i) = random_complex(rng);
  return v;
}

DescentData random_descent(std::mt19937_64& rng) {
  const int n = uniform_int(1, 4, rng);
  const int u = uniform_int(1, 4, rng);
  std::vector<int> dims(static_cast<std::size_t>(n), u);
  if (uniform_int(0, 1, rng) == 0) {
    for (int removed = 0; removed < u;) {
      auto& d = dims[static_cast<std::size_t>(uniform_int(0, n - 1, rng))];
      if (d > 0) {
        --d;
        ++removed;
      }
    }
  } else {
    for (auto& d : dims) d = uniform_int(0, u, rng);
  }
  std::vector<ComplexMatrix> psi;
  for (int d : dims) psi.push_back(random_matrix(u, d, rng));
  return assemble(u, std::move(psi), rng);
}

std::vector<Adversary> all_adversaries() {
  return {Adversary::near_equal_lines, Adversary::equal_lines, Adversary::near_dependent_columns,
          Adversary::dependent_columns, Adversary::near_flag};
}

DescentData adversarial_descent(Adversary kind, std::mt19937_64& rng) {
  switch (kind) {
    case Adversary::near_equal_lines:
    case Adversary::equal_lines: {
      const double eps = kind == Adversary::equal_lines ? 1e-14 : 1e-4;
      const ComplexMatrix l1 = random_matrix(2, 1, rng);
      const ComplexMatrix l2 = random_complex(rng) * l1 + eps * random_matrix(2, 1, rng);
      return assemble(2, {l1, l2}, rng);
    }
    case Adversary::near_dependent_columns:
    case Adversary::dependent_columns: {
      const double eps = kind == Adversary::dependent_columns ? 1e-14 : 1e-4;
      ComplexMatrix p1 = random_matrix(4, 2, rng);
      p1.col(1) = random_complex(rng) * p1.col(0) + eps * random_vector(4, rng);
      return assemble(4, {p1, random_matrix(4, 2, rng)}, rng);
    }
    case Adversary::near_flag: {
      const double eps = uniform_int(0, 1, rng) == 0 ? 1e-14 : 1e-4;
      const ComplexMatrix l = random_matrix(2, 1, rng);
      return assemble(2, {random_matrix(2, 2, rng), l, random_complex(rng) * l + eps * random_matrix(2, 1, rng)},
                      rng);
    }
  }
  throw UsageError("unknown adversary");
}

BiiiData random_biii(std::mt19937_64& rng) {
  const int n = uniform_int(1, 4, rng);
  std::vector<Complex> points;
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    points.emplace_back(static_cast<double>(i) + uniform(-0.3, 0.3, rng), uniform(-1.0, 1.0, rng));
    dims.push_back(uniform_int(1, 3, rng));
  }
  std::map<std::pair<int, int>, ComplexMatrix> maps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j || uniform(0.0, 1.0, rng) < 0.7)
        maps.emplace(std::make_pair(i, j),
                     random_matrix(dims[static_cast<std::size_t>(i)], dims[static_cast<std::size_t>(j)], rng));
  return BiiiData(std::move(points), std::move(dims), std::move(maps));
}

ExponentSet random_exponents(int m, int shape, std::mt19937_64& rng) {
  std::vector<Complex> c;
  if (shape == 1 && m >= 3) {
    const Complex base = random_complex(rng), w = random_complex(rng);
    c = {base, base + w * uniform(0.5, 1.5, rng), base - w * uniform(0.5, 1.5, rng)};
  } else if (shape == 2 && m >= 4) {
    const Complex w = random_complex(rng);
    const Complex p = random_complex(rng) * 2.0, q = random_complex(rng) * 2.0;
    c = {p, p + w, q, q + w * uniform(0.5, 1.5, rng)};
  } else if (shape == 3 && m >= 3) {
    for (int k = 0; k < 3; ++k) c.push_back(3.0 * std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
  }
  while (static_cast<int>(c.size()) < m) c.push_back(2.0 * random_complex(rng));
  return ExponentSet(std::move(c));
}

std::vector<std::pair<int, int>> corruptible_steps(const FilteredLocalSystem& f, const ExponentSet& e) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < static_cast<int>(f.arcs.size()); ++a)
    for (int s = 1; s < e.size(); ++s) out.emplace_back(a, s);
  return out;
}

FilteredLocalSystem corrupt_step(const FilteredLocalSystem& f, const ExponentSet& e, int arc, int step,
                                 std::mt19937_64& rng) {
  const ArcDecomposition arcs = stokes_directions(e);
  const int k = static_cast<int>(arcs.directions.size());
  const int m = e.size();
  if (k == 0 || arc < 0 || arc >= k || step < 1 || step >= m) throw UsageError("no such corruptible step");
  const auto& flag = f.arcs[static_cast<std::size_t>(arc)];
  const ComplexMatrix& old = flag[static_cast<std::size_t>(step - 1)];
  const ComplexMatrix lower = step > 1 ? flag[static_cast<std::size_t>(step - 2)] : ComplexMatrix(f.rank, 0);
  const ComplexMatrix& upper = flag[static_cast<std::size_t>(step)];

  auto inner_block = [&](int index) -> std::optional<std::pair<int, int>> {
    const Crossing c = crossing_permutation(e, arcs.directions[static_cast<std::size_t>(index)]);
    for (auto [lo, hi] : c.blocks)
      if (step >= lo + 1 && step <= hi) return std::make_pair(lo, hi);
    return std::nullopt;
  };
  const auto out_block = inner_block(arc);
  const auto in_block = inner_block((arc + k - 1) % k);

  const Eigen::Index extra = old.cols() - lower.cols();
  ComplexMatrix replacement(f.rank, old.cols());
  if (!out_block || !in_block) {
    replacement << lower, upper * random_matrix(upper.cols(), extra, rng);
  } else {
    const auto [lo, hi] = *out_block;
    const int partner = hi + 1 + lo - step;
    const ComplexMatrix g = arc + 1 < k ? f.arcs[static_cast<std::size_t>(arc + 1)][static_cast<std::size_t>(partner - 1)]
                                        : ComplexMatrix(f.monodromy * f.arcs[0][static_cast<std::size_t>(partner - 1)]);
    ComplexMatrix both(f.rank, upper.cols() + g.cols());
    both << upper, -g;
    const ComplexMatrix kernel = null_space(both);
    if (kernel.cols() == 0) throw SelfCheckError("partner step does not meet the next step");
    const ComplexVector w = upper * (kernel.topRows(upper.cols()) * random_vector(kernel.cols(), rng));
    replacement << lower, w, upper * random_matrix(upper.cols(), extra - 1, rng);
  }
  FilteredLocalSystem out = f;
  out.arcs[static_cast<std::size_t>(arc)][static_cast<std::size_t>(step - 1)] = replacement;
  return out;
}

BVAlgebra grassmann_contraction_example() {
  const BVAlgebra g = grassmann(2);
  const ComplexMatrix delta = grassmann_monomial(g, 1 << 1) * grassmann_derivative(2, 0) * grassmann_derivative(2, 1);
  return g.with_delta(delta);
}

const std::vector<BVAlgebra>& active_bv_family() {
  static const std::vector<BVAlgebra> family = [] {
    constexpr int n = 4;
    const BVAlgebra g = grassmann(n);
    std::vector<BVAlgebra> out;
    std::mt19937_64 rng(11);
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (y == a || y == b) continue;
          const ComplexMatrix delta =
              grassmann_monomial(g, 1 << y) * grassmann_derivative(n, a) * grassmann_derivative(n, b);
          for (const auto& d : grassmann_differentials(n)) {
            if (max_abs(d * delta + delta * d) > 1e-12) continue;
            BVAlgebra alg = g.with_d(d).with_delta(delta);
            if (!check_bv_axioms(alg).ok() || bracket_activity(alg, rng) < 1e-6) continue;
            out.push_back(std::move(alg));
          }
        }
    return out;
  }();
  return family;
}

const std::vector<BVAlgebra>& degenerate_bv_family() {
  static const std::vector<BVAlgebra> family = [] {
    constexpr int n = 4;
    const BVAlgebra g = grassmann(n);
    std::vector<BVAlgebra> out;
    std::mt19937_64 rng(13);
    for (int mask = 0; mask < (1 << n); ++mask) {
      const int pc = std::popcount(static_cast<unsigned>(mask));
      if (pc != 0 && pc != 2) continue;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (mask & ((1 << a) | (1 << b))) continue;
          const ComplexMatrix r = grassmann_monomial(g, mask) * grassmann_derivative(n, a) * grassmann_derivative(n, b);
          for (const auto& d : grassmann_differentials(n)) {
            const ComplexMatrix delta = d * r - r * d;
            if (max_abs(delta) == 0.0) continue;
            BVAlgebra alg = g.with_d(d).with_delta(delta);
            if (!check_bv_axioms(alg).ok()) continue;
            bool free = true;
            for (const auto& entry : check_degeneration(alg, 3)) free = free && entry.free;
            if (!free) continue;
            const Splitting s = build_splitting(alg);
            if (s.dim_h() == 0 || transferred_differential_norm(alg, s, 3) > 1e-10) continue;
            const ComplexVector a1 = alg.even_part(s.i * s.p * random_homogeneous(alg, 0, rng));
            if ((s.p * alg.bracket(a1, a1)).cwiseAbs().maxCoeff() > 1e-10) continue;
            if (alg.bracket(a1, random_homogeneous(alg, 1, rng)).cwiseAbs().maxCoeff() < 1e-6) continue;
            out.push_back(std::move(alg));
          }
        }
    }
    return out;
  }();
  return family;
}

BVAlgebra random_abelian_algebra(std::mt19937_64& rng) {
  switch (uniform_int(0, 3, rng)) {
    case 0:
      return grassmann(3);
    case 1: {
      const auto ders = grassmann_differentials(4);
      const ComplexMatrix d = random_unit_scalar(rng) * ders[static_cast<std::size_t>(uniform_int(0, static_cast<int>(ders.size()) - 1, rng))];
      return grassmann(4).with_d(d);
    }
    case 2:
      return truncated_polynomial(uniform_int(2, 5, rng));
    default: {
      std::vector<int> parities(static_cast<std::size_t>(uniform_int(1, 4, rng)));
      for (auto& p : parities) p = uniform_int(0, 1, rng);
      return square_zero(parities);
    }
  }
}

BVAlgebra random_rescaling(const BVAlgebra& a, std::mt19937_64& rng) {
  const Complex alpha = random_unit_scalar(rng);
  const Complex beta = random_unit_scalar(rng);
  return a.with_d(alpha * a.d()).with_delta(beta * a.delta());
}

MixedSeries random_mc_order2(const BVAlgebra& a, std::mt19937_64& rng) {
  const ComplexVector c1 = random_homogeneous(a, 1, rng);
  const ComplexVector c2 = random_homogeneous(a, 1, rng);
  MixedSeries c(a.dim(), 2, 0, 0);
  c.at(1, 0) = c1;
  c.at(2, 0) = c2;
  const MixedSeries dc = apply_D(a, c);
  MixedSeries out(a.dim(), 2, 0, 1);
  for (int j = 0; j <= 1; ++j) {
    out.at(1, j) = dc.at(1, j);
    out.at(2, j) = dc.at(2, j) + 0.5 * a.bracket(c1, dc.at(1, j));
  }
  return out;
}

FormalArc random_closed_arc(const BVAlgebra& a, int order, std::mt19937_64& rng) {
  const ComplexMatrix kernel = null_space(a.d());
  FormalArc arc;
  for (int k = 0; k < order; ++k) arc.coeffs.push_back(a.even_part(kernel * random_vector(kernel.cols(), rng)));
  return arc;
}

FormalArc harmonic_mc_arc(const BVAlgebra& a, const Splitting& s, std::mt19937_64& rng) {
  const ComplexVector a1 = a.even_part(s.i * s.p * random_homogeneous(a, 0, rng));
  const ComplexVector x = a.bracket(a1, a1);
  if ((s.p * x).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, x.cwiseAbs().maxCoeff()))
    throw UsageError("p[a_1, a_1] does not vanish; no order-2 arc through a_1");
  const ComplexVector a2 = 0.5 * (s.h * x) + a.even_part(s.i * s.p * random_homogeneous(a, 0, rng));
  return FormalArc{{a1, a2}};
}

FormalArc gauge_order2(const BVAlgebra& a, const FormalArc& arc, const ComplexVector& c) {
  if (arc.order() != 2) throw UsageError("gauge_order2 needs an arc of order 2");
  const ComplexVector dc = a.d() * c;
  return FormalArc{{arc.coeffs[0] + dc, arc.coeffs[1] + a.bracket(arc.coeffs[0], c) + 0.5 * a.bracket(dc, c)}};
}

}  // namespace nchodge::gen
