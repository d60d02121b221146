#pragma once

#include <random>
#include <utility>
#include <vector>

#include "nchodge/betti_gluing.hpp"
#include "nchodge/bv_formal.hpp"
#include "nchodge/stokes.hpp"

/// Random instances for property tests, the acceptance suite and fixtures.
namespace nchodge::gen {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
ComplexVector random_vector(Eigen::Index size, std::mt19937_64& rng);
/// Random element of the given parity.
ComplexVector random_homogeneous(const BVAlgebra& a, int parity, std::mt19937_64& rng);

/// Descent data with dim U <= 4 and at most 4 points; about half of the
/// instances have sum dim V_i = (n - 1) dim U, the only case that can be acyclic.
DescentData random_descent(std::mt19937_64& rng);

enum class Adversary { near_equal_lines, equal_lines, near_dependent_columns, dependent_columns, near_flag };

/// Near-degenerate descent data: perturbations of 1e-14 (degenerate within
/// tolerance) or 1e-4 (clearly nondegenerate).
DescentData adversarial_descent(Adversary kind, std::mt19937_64& rng);
std::vector<Adversary> all_adversaries();

/// Random B(iii) data with at most 4 points of dimension at most 3.
BiiiData random_biii(std::mt19937_64& rng);

/// m distinct exponents; `shape` 0 is generic, 1 puts three on a line,
/// 2 adds a parallelogram (two simultaneous blocks), 3 uses the cube roots of unity.
ExponentSet random_exponents(int m, int shape, std::mt19937_64& rng);

/// Steps that can be replaced without changing the flag's shape: (arc, step)
/// with 1 <= step < m.
std::vector<std::pair<int, int>> corruptible_steps(const FilteredLocalSystem& f, const ExponentSet& e);

/// Replaces one step of one arc by a nested subspace of the same dimension
/// that violates a gluing condition. Steps fixed by an equality get a random
/// subspace; steps constrained only by opposedness get one meeting the partner step.
FilteredLocalSystem corrupt_step(const FilteredLocalSystem& f, const ExponentSet& e, int arc, int step,
                                 std::mt19937_64& rng);

/// Grassmann algebra on two generators with Delta = theta_2 d/dtheta_1 d/dtheta_2.
BVAlgebra grassmann_contraction_example();

/// Grassmann(4) algebras with d = theta_S d/dtheta_i and Delta = theta_y d/dtheta_a d/dtheta_b
/// satisfying all axioms with a nonvanishing bracket on Im(d + u Delta).
const std::vector<BVAlgebra>& active_bv_family();

/// Grassmann(4) algebras with Delta = [d, R] for R = theta_S d/dtheta_a d/dtheta_b;
/// all satisfy the axioms, degenerate to N = 3 and have a nonzero bracket on H.
const std::vector<BVAlgebra>& degenerate_bv_family();

/// Delta = 0 algebras: Grassmann(3), Grassmann(4) with random-scaled d from the
/// family above, truncated polynomials and square-zero extensions.
BVAlgebra random_abelian_algebra(std::mt19937_64& rng);

/// Multiplies d and Delta by random nonzero scalars (preserves the axioms).
BVAlgebra random_rescaling(const BVAlgebra& a, std::mt19937_64& rng);

/// Maurer-Cartan-to-order-2 element of A[u]: a_1 = D c_1, a_2 = D c_2 + (1/2)[c_1, D c_1]
/// with D = d + u Delta and random odd c_1, c_2.
MixedSeries random_mc_order2(const BVAlgebra& a, std::mt19937_64& rng);

/// Arc of eps-order K with every coefficient a random even d-closed element.
FormalArc random_closed_arc(const BVAlgebra& a, int order, std::mt19937_64& rng);

/// Order-2 MC arc a_1 = i p x, a_2 = (1/2) h [a_1, a_1] + i p y with random even x, y.
/// Requires p [a_1, a_1] = 0.
FormalArc harmonic_mc_arc(const BVAlgebra& a, const Splitting& s, std::mt19937_64& rng);

/// Gauge transform of an order-2 arc by an odd c:
/// a_1 + dc, a_2 + [a_1, c] + (1/2)[dc, c].
FormalArc gauge_order2(const BVAlgebra& a, const FormalArc& arc, const ComplexVector& c);

}  // namespace nchodge::gen
