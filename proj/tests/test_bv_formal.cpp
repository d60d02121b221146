#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "nchodge/bv_formal.hpp"
#include "nchodge/errors.hpp"
#include "nchodge/generators.hpp"

using namespace nchodge;

namespace {

double vmax(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

int lu_rank(const ComplexMatrix& m) {
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

/// dim H(A[u]/u^N, d + u Delta) from the assembled block matrix.
int truncated_cohomology_oracle(const BVAlgebra& a, int n) {
  const int dim = a.dim();
  ComplexMatrix big = ComplexMatrix::Zero(n * dim, n * dim);
  for (int j = 0; j < n; ++j) {
    big.block(j * dim, j * dim, dim, dim) = a.d();
    if (j + 1 < n) big.block((j + 1) * dim, j * dim, dim, dim) = a.delta();
  }
  return n * dim - 2 * lu_rank(big);
}

bool has_condition(const AxiomReport& r, const std::string& c) {
  return std::any_of(r.issues.begin(), r.issues.end(), [&](const AxiomIssue& i) { return i.condition == c; });
}

ComplexVector theta(int g, int n = 2) { return grassmann(n).basis(grassmann_generator(g)); }

MixedSeries constant_in_u(const FormalArc& arc, int dim) {
  MixedSeries s(dim, arc.order(), 0, 0);
  for (int k = 1; k <= arc.order(); ++k) s.at(k, 0) = arc.coeffs[static_cast<std::size_t>(k - 1)];
  return s;
}

}  // namespace

TEST_CASE("model algebras") {
  const BVAlgebra g = grassmann(2);
  CHECK(g.dim() == 4);
  CHECK(check_bv_axioms(g).ok());
  const ComplexVector t1 = theta(0), t2 = theta(1);
  CHECK(vmax(g.mul(t1, t2) + g.mul(t2, t1)) < 1e-15);
  CHECK(vmax(g.mul(t1, t1)) < 1e-15);
  CHECK(g.parity_of(g.mul(t1, t2)) == 0);
  CHECK(g.parity_of(t1 + g.basis(0)) == -1);
  CHECK(check_bv_axioms(truncated_polynomial(4)).ok());
  CHECK(check_bv_axioms(square_zero({0, 1, 1})).ok());
  for (int g_idx = 0; g_idx < 3; ++g_idx) {
    const ComplexMatrix dg = grassmann_derivative(3, g_idx);
    CHECK(max_abs(dg * dg) < 1e-15);
    CHECK(check_bv_axioms(grassmann(3).with_delta(dg)).ok());
  }
}

TEST_CASE("contraction example") {
  const BVAlgebra a = gen::grassmann_contraction_example();
  CHECK(check_bv_axioms(a).ok());
  CHECK(rank(a.delta()) == 1);
  const ComplexVector t1 = theta(0), t2 = theta(1);
  CHECK(vmax(a.bracket(t1, t2) + t2) < 1e-14);
  const ComplexVector a1 = a.mul(t1, t2);
  CHECK(vmax(a.bracket(a1, a1)) < 1e-14);

  const auto entries = check_degeneration(a, 3);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].free);
  CHECK(entries[1].dim == 6);
  CHECK(entries[1].expected == 8);
  CHECK_FALSE(entries[1].free);
}

TEST_CASE("first-order Delta has a vanishing bracket") {
  const BVAlgebra a = grassmann(2).with_delta(grassmann_derivative(2, 0));
  CHECK(check_bv_axioms(a).ok());
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexVector x = gen::random_vector(4, rng), y = gen::random_vector(4, rng);
    CHECK(vmax(a.bracket(x, y)) < 1e-13);
  }
}

TEST_CASE("axiom failures are reported") {
  const BVAlgebra g = grassmann(2);
  std::vector<ComplexMatrix> left = g.left_mult();
  left[3](3, 0) = 2.0;
  const BVAlgebra broken(g.parities(), g.unit(), left, g.d(), g.delta());
  CHECK(has_condition(check_bv_axioms(broken), "associativity"));

  const BVAlgebra even_delta = g.with_delta(grassmann_derivative(2, 0) * grassmann_derivative(2, 1));
  CHECK(has_condition(check_bv_axioms(even_delta), "delta-parity"));

  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(1, 3) = 1.0;  // theta1 theta2 -> theta1, not a derivation of odd degree
  CHECK_FALSE(check_bv_axioms(g.with_d(d)).ok());
}

TEST_CASE("generated families satisfy the axioms") {
  std::mt19937_64 rng(97);
  for (const auto& a : gen::active_bv_family()) CHECK(check_bv_axioms(a).ok());
  for (const auto& a : gen::degenerate_bv_family()) {
    CHECK(check_bv_axioms(a).ok());
    CHECK(check_bv_axioms(gen::random_rescaling(a, rng)).ok());
  }
  for (int trial = 0; trial < 10; ++trial) CHECK(check_bv_axioms(gen::random_abelian_algebra(rng)).ok());
}

TEST_CASE("degeneration against the block-matrix oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    for (const auto& e : check_degeneration(a, 4)) {
      CHECK(e.free);
      CHECK(e.dim == truncated_cohomology_oracle(a, e.n));
    }
  }
  for (const auto& a : gen::degenerate_bv_family()) {
    const auto entries = check_degeneration(a, 3);
    for (const auto& e : entries) {
      CHECK(e.free);
      CHECK(e.dim == truncated_cohomology_oracle(a, e.n));
      CHECK(e.expected == e.n * cohomology_dim(a));
    }
  }
  const BVAlgebra a = gen::grassmann_contraction_example();
  for (const auto& e : check_degeneration(a, 4)) CHECK(e.dim == truncated_cohomology_oracle(a, e.n));
}

TEST_CASE("odd line with Delta = d/dtheta") {
  const BVAlgebra base = square_zero({1});
  ComplexMatrix delta = ComplexMatrix::Zero(2, 2);
  delta(base.unit(), 1 - base.unit()) = 1.0;
  const BVAlgebra a = base.with_delta(delta);
  CHECK(check_bv_axioms(a).ok());
  CHECK(vmax(a.bracket(a.basis(1), a.basis(1))) < 1e-15);
  const auto e = check_degeneration(a, 2);
  CHECK(e[0].free);
  CHECK(e[1].dim == 2);
  CHECK(e[1].expected == 4);
  CHECK_FALSE(e[1].free);
}

TEST_CASE("Maurer-Cartan residual") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    for (const auto& r : maurer_cartan_residual(a, gen::random_closed_arc(a, 3, rng))) CHECK(vmax(r) < 1e-12);
  }
  const BVAlgebra c = gen::grassmann_contraction_example();
  const FormalArc arc{{c.mul(theta(0), theta(1)), ComplexVector::Zero(4)}};
  for (const auto& r : maurer_cartan_residual(c, arc)) CHECK(vmax(r) < 1e-15);

  double largest = 0.0;
  for (const auto& a : gen::active_bv_family()) {
    const FormalArc random{{gen::random_homogeneous(a, 0, rng), gen::random_homogeneous(a, 0, rng)}};
    largest = std::max(largest, vmax(maurer_cartan_residual(a, random)[1]));
  }
  CHECK(largest > 1e-3);
}

TEST_CASE("F transform examples") {
  const BVAlgebra g = grassmann(2);
  const ComplexVector t12 = g.mul(theta(0), theta(1));
  const MixedSeries f = F_transform(g, constant_in_u(FormalArc{{t12, ComplexVector::Zero(4)}}, 4));
  for (int k = 1; k <= 2; ++k)
    for (int j = f.u_min(); j <= f.u_max(); ++j)
      CHECK(vmax(f.get(k, j) - (k == 1 && j == 0 ? t12 : ComplexVector::Zero(4))) < 1e-15);

  const BVAlgebra x3 = truncated_polynomial(3);
  const MixedSeries fx = F_transform(x3, constant_in_u(FormalArc{{x3.basis(1), ComplexVector::Zero(3)}}, 3));
  CHECK(vmax(fx.get(1, 0) - x3.basis(1)) < 1e-15);
  CHECK(vmax(fx.get(2, -1) - 0.5 * x3.basis(2)) < 1e-15);
  CHECK(vmax(fx.get(2, 0)) < 1e-15);
  CHECK(vmax(fx.get(1, -1)) < 1e-15);
}

TEST_CASE("F linearizes Maurer-Cartan elements") {
  std::mt19937_64 rng(107);
  std::vector<BVAlgebra> algebras = gen::active_bv_family();
  algebras.push_back(gen::grassmann_contraction_example());
  for (const auto& a : algebras) {
    const MixedSeries mc = gen::random_mc_order2(a, rng);
    const MixedSeries res = mixed_mc_residual(a, mc);
    const MixedSeries df = apply_D(a, F_transform(a, mc));
    for (int k = 1; k <= 2; ++k) {
      for (int j = res.u_min(); j <= res.u_max(); ++j) CHECK(vmax(res.at(k, j)) < 1e-12);
      for (int j = df.u_min(); j <= df.u_max(); ++j) CHECK(vmax(df.at(k, j)) < 1e-10);
    }
  }
}

TEST_CASE("window cap") {
  const BVAlgebra x3 = truncated_polynomial(3);
  const MixedSeries s = constant_in_u(FormalArc{{x3.basis(1), x3.basis(1), x3.basis(1)}}, 3);
  CHECK_THROWS_AS(F_transform(x3, s, {}, 1), WindowOverflow);
}

TEST_CASE("splittings") {
  const BVAlgebra x3 = truncated_polynomial(3);
  const Splitting s0 = build_splitting(x3);
  CHECK(approx_equal(s0.i * s0.p, ComplexMatrix::Identity(3, 3), 1e-15));
  CHECK(max_abs(s0.h) == 0.0);

  const BVAlgebra dg = grassmann(2).with_d(grassmann_derivative(2, 0));
  CHECK(check_bv_axioms(dg).ok());
  CHECK(lu_rank(dg.d()) == 2);
  CHECK(cohomology_dim(dg) == 0);
  CHECK(build_splitting(dg).dim_h() == 0);
  CHECK(splitting_residual(dg, build_splitting(dg)) < 1e-12);

  const BVAlgebra dg3 = grassmann(3).with_d(grassmann_derivative(3, 0));
  CHECK(cohomology_dim(dg3) == 0);

  std::mt19937_64 rng(109);
  for (const auto& a : gen::degenerate_bv_family()) {
    const Splitting s = build_splitting(a);
    CHECK(s.dim_h() == cohomology_dim(a));
    CHECK(s.dim_h() == a.dim() - 2 * lu_rank(a.d()));
    CHECK(splitting_residual(a, s) < 1e-10);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    CHECK(splitting_residual(a, build_splitting(a)) < 1e-10);
  }
}

TEST_CASE("Phi_T on abelian algebras is the class map") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    const Splitting s = build_splitting(a);
    const FormalArc arc = gen::random_closed_arc(a, 3, rng);
    const PhiTResult r = phi_T(a, arc, s);
    REQUIRE(r.classes.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(vmax(r.classes[static_cast<std::size_t>(k)] - s.p * arc.coeffs[static_cast<std::size_t>(k)]) < 1e-9);
    CHECK(r.constraint_residual < 1e-10);
  }
}

TEST_CASE("Phi_T on the truncated polynomial ring") {
  const BVAlgebra x3 = truncated_polynomial(3);
  const Splitting s = build_splitting(x3);
  const FormalArc arc{{x3.basis(1), ComplexVector::Zero(3)}};
  const PhiTResult r = phi_T(x3, arc, s);
  REQUIRE(r.classes.size() == 2);
  CHECK(vmax(r.classes[0] - s.p * x3.basis(1)) < 1e-12);
  CHECK(vmax(r.classes[1]) < 1e-12);
  CHECK(std::abs(r.u_residual - 0.5) < 1e-12);
  PhiTOptions strict;
  strict.require_u_free = true;
  CHECK_THROWS_AS(phi_T(x3, arc, s, strict), UnsolvableOrder);
}

TEST_CASE("Phi_T with Delta = 0 is linear") {
  const BVAlgebra g = grassmann(3);
  const Splitting s = build_splitting(g);
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 5; ++trial) {
    const FormalArc arc{{gen::random_homogeneous(g, 0, rng), gen::random_homogeneous(g, 0, rng), gen::random_homogeneous(g, 0, rng)}};
    const PhiTResult r = phi_T(g, arc, s);
    for (int k = 0; k < 3; ++k) CHECK(vmax(r.classes[static_cast<std::size_t>(k)] - s.p * arc.coeffs[static_cast<std::size_t>(k)]) < 1e-9);
  }
}

TEST_CASE("Phi_T is gauge invariant on degenerate algebras") {
  std::mt19937_64 rng(131);
  for (const auto& base : gen::degenerate_bv_family()) {
    const BVAlgebra a = gen::random_rescaling(base, rng);
    const Splitting s = build_splitting(a);
    const FormalArc arc = gen::harmonic_mc_arc(a, s, rng);
    for (const auto& r : maurer_cartan_residual(a, arc)) CHECK(vmax(r) < 1e-10);
    const FormalArc moved = gen::gauge_order2(a, arc, gen::random_homogeneous(a, 1, rng));
    for (const auto& r : maurer_cartan_residual(a, moved)) CHECK(vmax(r) < 1e-10);
    const PhiTResult r1 = phi_T(a, arc, s), r2 = phi_T(a, moved, s);
    for (int k = 0; k < 2; ++k) CHECK(vmax(r1.classes[static_cast<std::size_t>(k)] - r2.classes[static_cast<std::size_t>(k)]) < 1e-8);
  }
}

TEST_CASE("Phi_T rejects malformed input") {
  const BVAlgebra x3 = truncated_polynomial(3);
  const Splitting s = build_splitting(x3);
  CHECK_THROWS_AS(phi_T(x3, FormalArc{{ComplexVector::Zero(2)}}, s), UsageError);
  CHECK_THROWS_AS(phi_T(x3, FormalArc{}, s), UsageError);
  const BVAlgebra g = grassmann(2);
  CHECK_THROWS_AS(phi_T(g, FormalArc{{theta(0)}}, build_splitting(g)), UsageError);
}

TEST_CASE("transferred operations") {
  std::mt19937_64 rng(137);
  for (int trial = 0; trial < 5; ++trial) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    const auto r = minimal_model_products(a, build_splitting(a), 3);
    CHECK(r.m2 < 1e-12);
    CHECK(r.m3 < 1e-12);
  }
  const BVAlgebra g = grassmann(3);
  const auto r = minimal_model_products(g, build_splitting(g), 2);
  CHECK(r.m2 < 1e-12);
  for (const auto& a : gen::degenerate_bv_family()) {
    const Splitting s = build_splitting(a);
    CHECK(transferred_differential_norm(a, s, 3) < 1e-10);
    CHECK(minimal_model_products(a, s, 2).m2 < 1e-10);
  }
  CHECK_THROWS_AS(minimal_model_products(g, build_splitting(g), 4), UsageError);
}
