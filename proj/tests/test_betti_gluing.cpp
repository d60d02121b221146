#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "nchodge/betti_gluing.hpp"
#include "nchodge/errors.hpp"
#include "nchodge/generators.hpp"
#include "nchodge/quantum_connection.hpp"
#include "nchodge/stokes.hpp"

using namespace nchodge;

namespace {

ComplexMatrix scalar(Complex z) { return ComplexMatrix::Constant(1, 1, z); }

ComplexMatrix column(Complex a, Complex b) {
  ComplexMatrix m(2, 1);
  m << a, b;
  return m;
}

/// Rank of the map U -> (+) U/V_i, computed from projections onto orthogonal complements.
bool acyclic_oracle(const DescentData& d) {
  int quotient_dim = 0;
  ComplexMatrix stacked(0, d.dim_u);
  for (const auto& psi : d.psi) {
    const ComplexMatrix comp = orthogonal_complement(psi, d.dim_u);
    quotient_dim += static_cast<int>(comp.cols());
    ComplexMatrix next(stacked.rows() + comp.cols(), d.dim_u);
    next << stacked, comp.adjoint();
    stacked = next;
  }
  return quotient_dim == d.dim_u && rank(stacked) == d.dim_u;
}

}  // namespace

TEST_CASE("B(iii) to descent examples") {
  const BiiiData one({0.0}, {2}, {{{0, 0}, ComplexMatrix::Identity(2, 2) * 3.0}});
  const DescentData d1 = biii_to_descent(one);
  CHECK(d1.dim_u == 2);
  CHECK(d1.psi[0].cols() == 0);
  CHECK(approx_equal(d1.t[0], one.map(0, 0), 1e-15));

  const Complex t11(2.0, 1.0), t12(-1.0, 0.5), t21(0.3, 0.0), t22(0.0, -4.0);
  const BiiiData two({0.0, 1.0}, {1, 1},
                     {{{0, 0}, scalar(t11)}, {{0, 1}, scalar(t12)}, {{1, 0}, scalar(t21)}, {{1, 1}, scalar(t22)}});
  const DescentData d2 = biii_to_descent(two);
  ComplexMatrix expected1(2, 2), expected2(2, 2);
  expected1 << t11, 0.0, t21, 1.0;
  expected2 << 1.0, t12, 0.0, t22;
  CHECK(approx_equal(d2.t[0], expected1, 1e-15));
  CHECK(approx_equal(d2.t[1], expected2, 1e-15));
  CHECK_NOTHROW(d2.validate());
}

TEST_CASE("det T_i equals det T_ii") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const BiiiData b = gen::random_biii(rng);
    const DescentData d = biii_to_descent(b);
    for (int i = 0; i < b.size(); ++i) {
      const Complex lhs = d.t[static_cast<std::size_t>(i)].determinant(), rhs = b.map(i, i).determinant();
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("singular T_ii is rejected") {
  CHECK_THROWS_AS(BiiiData({0.0, 1.0}, {1, 1}, {{{0, 0}, scalar(0.0)}, {{1, 1}, scalar(1.0)}}), UsageError);
  CHECK_THROWS_AS(BiiiData({0.0, 0.0}, {1, 1}, {{{0, 0}, scalar(1.0)}, {{1, 1}, scalar(1.0)}}), UsageError);
}

TEST_CASE("round trip on random instances") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const BiiiData b = gen::random_biii(rng);
    const Conversion c = descent_to_biii(biii_to_descent(b), b.points());
    CHECK(round_trip_deviation(b, c) < 1e-10);
    CHECK(check_quiver_rep(c.data));
  }
}

TEST_CASE("descent to B(iii) examples") {
  const ComplexMatrix t = scalar(Complex(0.0, 2.0));
  const DescentData d{1, {ComplexMatrix(1, 0)}, {t}};
  const Conversion c = descent_to_biii(d);
  REQUIRE(c.data.size() == 1);
  CHECK(c.data.dims() == std::vector<int>{1});
  CHECK(approx_equal(c.data.map(0, 0), t, 1e-15));

  const DescentData bad{1, {ComplexMatrix(1, 0), ComplexMatrix(1, 0)}, {scalar(1.0), scalar(1.0)}};
  CHECK_THROWS_AS(descent_to_biii(bad), NotConvertibleError);
}

TEST_CASE("acyclicity examples") {
  const DescentData trivial{1, {ComplexMatrix(1, 0)}, {scalar(1.0)}};
  const auto r0 = check_acyclicity(trivial);
  CHECK(r0.acyclic);
  CHECK(r0.via_complex);
  CHECK(r0.via_conditions);

  ComplexMatrix t1 = ComplexMatrix::Identity(2, 2), t2 = ComplexMatrix::Identity(2, 2);
  t1(0, 1) = 1.0;
  t2(1, 0) = 2.0;
  const DescentData lines{2, {column(1.0, 0.0), column(0.0, 1.0)}, {t1, t2}};
  CHECK(check_acyclicity(lines).acyclic);
  const DescentData same{2, {column(1.0, 0.0), column(1.0, 0.0)}, {t1, t1}};
  const auto r2 = check_acyclicity(same);
  CHECK_FALSE(r2.acyclic);
  CHECK_FALSE(r2.via_complex);
  CHECK_FALSE(r2.via_conditions);
}

TEST_CASE("both acyclicity tests agree with the oracle") {
  std::mt19937_64 rng(71);
  int acyclic = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const DescentData d = gen::random_descent(rng);
    const auto r = check_acyclicity(d);
    CHECK(r.via_complex == r.via_conditions);
    CHECK(r.acyclic == acyclic_oracle(d));
    acyclic += r.acyclic ? 1 : 0;
  }
  CHECK(acyclic > 20);
  CHECK(acyclic < 180);
}

TEST_CASE("adversarial descent data") {
  std::mt19937_64 rng(73);
  for (auto kind : gen::all_adversaries())
    for (int trial = 0; trial < 5; ++trial) {
      const DescentData d = gen::adversarial_descent(kind, rng);
      const auto r = check_acyclicity(d);
      CHECK(r.via_complex == r.via_conditions);
    }
}

TEST_CASE("acyclicity and conversion are invariant under permuting points") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 40; ++trial) {
    const BiiiData b = gen::random_biii(rng);
    std::vector<int> perm(static_cast<std::size_t>(b.size()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const BiiiData p = permute_points(b, perm);
    for (int i = 0; i < p.size(); ++i)
      for (int j = 0; j < p.size(); ++j)
        CHECK(approx_equal(p.map(i, j), b.map(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]), 1e-15));
    CHECK(check_acyclicity(biii_to_descent(p)).acyclic);
    CHECK(round_trip_deviation(p, descent_to_biii(biii_to_descent(p), p.points())) < 1e-10);

    const DescentData d = gen::random_descent(rng);
    std::vector<int> dperm(static_cast<std::size_t>(d.size()));
    std::iota(dperm.begin(), dperm.end(), 0);
    std::shuffle(dperm.begin(), dperm.end(), rng);
    DescentData dp{d.dim_u, {}, {}};
    for (int k : dperm) {
      dp.psi.push_back(d.psi[static_cast<std::size_t>(k)]);
      dp.t.push_back(d.t[static_cast<std::size_t>(k)]);
    }
    CHECK(check_acyclicity(dp).acyclic == check_acyclicity(d).acyclic);
  }
}

TEST_CASE("quiver relations") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) CHECK(check_quiver_rep(gen::random_biii(rng)));
  const BiiiData b({0.0, 1.0, 2.0}, {1, 2, 1},
                   {{{0, 0}, scalar(2.0)}, {{1, 1}, ComplexMatrix::Identity(2, 2)}, {{2, 2}, scalar(-1.0)},
                    {{0, 1}, ComplexMatrix::Ones(1, 2)}});
  CHECK(check_quiver_rep(b));
  std::vector<ComplexMatrix> projectors;
  for (int i = 0; i < b.size(); ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(b.total_dim(), b.total_dim());
    p.block(b.offset(i), b.offset(i), b.dims()[static_cast<std::size_t>(i)], b.dims()[static_cast<std::size_t>(i)]).setIdentity();
    projectors.push_back(p);
  }
  CHECK(check_quiver_rep(b, kDefaultTol, &projectors));
  projectors[1](0, 0) = 0.5;
  CHECK_FALSE(check_quiver_rep(b, kDefaultTol, &projectors));
}

TEST_CASE("gluing") {
  const auto single = glue({{2, ComplexMatrix::Identity(2, 2)}}, {}, {0.0});
  CHECK(single.data().maps().size() == 1);

  const auto split = glue({{1, scalar(2.0)}, {1, scalar(3.0)}}, {{{0, 1}, scalar(0.0)}, {{1, 0}, scalar(0.0)}}, {0.0, 1.0});
  const ComplexMatrix a = split.data().assembled();
  CHECK(std::abs(a(0, 1)) == 0.0);
  CHECK(std::abs(a(1, 0)) == 0.0);
  const DescentData d = biii_to_descent(split.data());
  CHECK(approx_equal(d.t[0] * d.t[1], a, 1e-15));

  const auto skeleton = skeleton_from_connection(build_cpn_u_connection(2, 1.0));
  std::vector<std::pair<int, ComplexMatrix>> regular;
  for (int m : skeleton.multiplicities) regular.emplace_back(m, ComplexMatrix::Identity(m, m));
  const auto cp1 = glue(regular, {{{0, 1}, scalar(2.0)}, {{1, 0}, scalar(-1.0)}}, skeleton.exponents.values());
  CHECK(check_quiver_rep(cp1.data()));
  CHECK(check_acyclicity(biii_to_descent(cp1.data())).acyclic);

  CHECK_THROWS_AS(glue({{1, scalar(0.0)}}, {}, {0.0}), UsageError);
  CHECK_THROWS_AS(glue({{1, scalar(1.0)}}, {{{0, 0}, scalar(1.0)}}, {0.0}), UsageError);
}
