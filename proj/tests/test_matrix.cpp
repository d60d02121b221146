#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nchodge/errors.hpp"
#include "nchodge/generators.hpp"
#include "nchodge/matrix.hpp"

using namespace nchodge;

TEST_CASE("matrix exponential examples") {
  CHECK(approx_equal(matrix_exp_poly(ComplexMatrix::Zero(3, 3), ExpKind::nilpotent), ComplexMatrix::Identity(3, 3), 1e-15));
  ComplexMatrix n(2, 2);
  n << 0.0, 0.0, 1.0, 0.0;
  const Complex c(0.3, -2.0);
  ComplexMatrix expected(2, 2);
  expected << 1.0, 0.0, c, 1.0;
  CHECK(approx_equal(matrix_exp_poly(c * n, ExpKind::nilpotent), expected, 1e-15));

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = -0.5 * std::log(4.0);
  d(1, 1) = 0.5 * std::log(4.0);
  const ComplexMatrix e = matrix_exp_poly(d, ExpKind::diagonal);
  CHECK(std::abs(e(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(e(1, 1) - 2.0) < 1e-15);

  CHECK_THROWS_AS(matrix_exp_poly(ComplexMatrix::Identity(2, 2), ExpKind::nilpotent), UsageError);
  CHECK_THROWS_AS(matrix_exp_poly(n, ExpKind::diagonal), UsageError);
}

TEST_CASE("rank examples") {
  CHECK(rank(ComplexMatrix::Identity(3, 3)) == 3);
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK(rank(m) == 1);
  std::mt19937_64 rng(5);
  const ComplexMatrix a = gen::random_matrix(4, 2, rng), b = gen::random_matrix(2, 6, rng);
  CHECK(rank(a * b) == 2);
  CHECK(rank(ComplexMatrix::Zero(3, 2)) == 0);
}

TEST_CASE("rank is invariant under unitary change of basis") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = trial % 4;
    const ComplexMatrix m = gen::random_matrix(5, r, rng) * gen::random_matrix(r, 5, rng);
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(gen::random_matrix(5, 5, rng)).householderQ();
    CHECK(rank(m) == r);
    CHECK(rank(q * m * q.adjoint()) == r);
  }
}

TEST_CASE("exp of a nilpotent matrix inverts exp of its negative") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + trial % 4;
    ComplexMatrix n = gen::random_matrix(dim, dim, rng).triangularView<Eigen::StrictlyLower>();
    const ComplexMatrix p = matrix_exp_poly(n, ExpKind::nilpotent) * matrix_exp_poly(-n, ExpKind::nilpotent);
    CHECK(approx_equal(p, ComplexMatrix::Identity(dim, dim), 1e-10));
  }
}

TEST_CASE("subspaces and solves") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix a = gen::random_matrix(6, 2, rng) * gen::random_matrix(2, 4, rng);
    const ComplexMatrix col = column_space(a), ker = null_space(a);
    CHECK(col.cols() == 2);
    CHECK(ker.cols() == 2);
    CHECK(max_abs(a * ker) < 1e-10);
    CHECK(same_subspace(col, a));
    const ComplexMatrix comp = orthogonal_complement(col, 6);
    CHECK(comp.cols() == 4);
    CHECK(max_abs(col.adjoint() * comp) < 1e-12);
    const ComplexMatrix pinv = pseudo_inverse(a);
    CHECK(approx_equal(a * pinv * a, a, 1e-9));
    const ComplexVector rhs = a * gen::random_vector(4, rng);
    CHECK(approx_equal(a * least_squares(a, rhs), rhs, 1e-9));
  }
  ComplexMatrix x(2, 1), y(2, 1);
  x << 1.0, 0.0;
  y << 1.0, 1e-3;
  CHECK_FALSE(same_subspace(x, y));
  CHECK(same_subspace(x, 3.0 * x));
}
