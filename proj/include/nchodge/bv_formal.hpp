#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nchodge/matrix.hpp"

namespace nchodge {

/// Finite-dimensional Z/2-graded algebra with odd operators d and Delta.
/// Multiplication is stored as left-multiplication matrices:
/// e_i * e_j = sum_k left(i)(k, j) e_k.
class BVAlgebra {
 public:
  BVAlgebra(std::vector<int> parity, int unit, std::vector<ComplexMatrix> left_mult, ComplexMatrix d,
            ComplexMatrix delta);

  int dim() const noexcept { return static_cast<int>(parity_.size()); }
  int parity(int i) const { return parity_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& parities() const noexcept { return parity_; }
  int unit() const noexcept { return unit_; }
  const ComplexMatrix& left(int i) const { return left_.at(static_cast<std::size_t>(i)); }
  const std::vector<ComplexMatrix>& left_mult() const noexcept { return left_; }
  const ComplexMatrix& d() const noexcept { return d_; }
  const ComplexMatrix& delta() const noexcept { return delta_; }

  BVAlgebra with_d(ComplexMatrix d) const;
  BVAlgebra with_delta(ComplexMatrix delta) const;

  ComplexVector basis(int i) const;
  /// Matrix of v * (.) .
  ComplexMatrix left_matrix(const ComplexVector& v) const;
  ComplexVector mul(const ComplexVector& a, const ComplexVector& b) const;
  /// [a, b] = Delta(ab) - Delta(a) b - (-1)^{|a|} a Delta(b), extended bilinearly.
  /// With this sign it obeys [a,[b,c]] = (-1)^{|a|+1} [[a,b],c] + (-1)^{(|a|+1)(|b|+1)} [b,[a,c]].
  ComplexVector bracket(const ComplexVector& a, const ComplexVector& b) const;

  /// Even and odd parts of v.
  ComplexVector even_part(const ComplexVector& v) const;
  ComplexVector odd_part(const ComplexVector& v) const;
  /// 0 or 1 for homogeneous v (zero counts as even), -1 otherwise.
  int parity_of(const ComplexVector& v, double tol = kDefaultTol) const;

 private:
  ComplexVector bracket_homogeneous(const ComplexVector& a, int pa, const ComplexVector& b) const;

  std::vector<int> parity_;
  int unit_;
  std::vector<ComplexMatrix> left_;
  ComplexMatrix d_;
  ComplexMatrix delta_;
};

/// Exterior algebra on n odd generators with d = Delta = 0. Basis element b
/// (0 <= b < 2^n) is the ordered product of the generators in the bitmask b.
BVAlgebra grassmann(int n);
/// Left derivative d/d theta_g on grassmann(n).
ComplexMatrix grassmann_derivative(int n, int g);
/// Basis index of generator g in grassmann(n).
int grassmann_generator(int g);
/// C[x]/(x^order), all even, d = Delta = 0.
BVAlgebra truncated_polynomial(int order);
/// C 1 + V with V * V = 0 and the given parities on V; d = Delta = 0.
BVAlgebra square_zero(const std::vector<int>& parities);

struct AxiomIssue {
  std::string condition;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
};

AxiomReport check_bv_axioms(const BVAlgebra& a, double tol = kDefaultTol);

struct DegenerationEntry {
  int n;
  int dim;       // dim H(A[u]/(u^N), d + u Delta)
  int expected;  // N dim H(A, d)
  bool free;
};

int cohomology_dim(const BVAlgebra& a, double tol = kDefaultTol);
std::vector<DegenerationEntry> check_degeneration(const BVAlgebra& a, int n_max, double tol = kDefaultTol);

/// a(eps) = sum_{k=1..K} eps^k coeffs[k-1], coefficients even.
struct FormalArc {
  std::vector<ComplexVector> coeffs;
  int order() const noexcept { return static_cast<int>(coeffs.size()); }
};

/// Coefficients of eps^k in d a + (1/2)[a, a], k = 1..K.
std::vector<ComplexVector> maurer_cartan_residual(const BVAlgebra& a, const FormalArc& arc);

/// sum_{k=1..K} sum_{j=u_min..u_max} eps^k u^j c(k, j).
class MixedSeries {
 public:
  MixedSeries(int dim, int k_order, int u_min, int u_max);

  int dim() const noexcept { return dim_; }
  int k_order() const noexcept { return k_order_; }
  int u_min() const noexcept { return u_min_; }
  int u_max() const noexcept { return u_max_; }
  ComplexVector& at(int k, int j);
  const ComplexVector& at(int k, int j) const;
  /// Zero outside the window.
  ComplexVector get(int k, int j) const;

 private:
  int dim_, k_order_, u_min_, u_max_;
  std::vector<ComplexVector> c_;
};

inline constexpr int kMaxEpsOrder = 6;
inline constexpr int kMaxLiftOrder = 8;
inline constexpr int kMaxWindow = 16;

/// F(a) = u (exp(a/u) - 1) truncated at the eps-order of a. Coefficients above
/// `u_max_out` are dropped when given. Throws WindowOverflow when the result
/// needs more than `window_cap` u-powers.
MixedSeries F_transform(const BVAlgebra& a, const MixedSeries& s, std::optional<int> u_max_out = {},
                        int window_cap = kMaxWindow);

/// (d + u Delta) applied coefficientwise; the window grows by one on top.
MixedSeries apply_D(const BVAlgebra& a, const MixedSeries& s);
/// Coefficients of eps^k in (d + u Delta) s + (1/2)[s, s].
MixedSeries mixed_mc_residual(const BVAlgebra& a, const MixedSeries& s);

/// i: H -> A, p: A -> H and h on A with p i = 1, i p = 1 + d h + h d,
/// h h = h i = p h = 0. H is the orthogonal complement of im d inside ker d.
struct Splitting {
  ComplexMatrix i;
  ComplexMatrix p;
  ComplexMatrix h;
  int dim_h() const noexcept { return static_cast<int>(i.cols()); }
};

Splitting build_splitting(const BVAlgebra& a, double tol = kDefaultTol);
/// Largest violation among the splitting identities and side conditions.
double splitting_residual(const BVAlgebra& a, const Splitting& s);

/// Coefficient of u^k in T = p sum_k u^k (Delta h)^k.
ComplexMatrix transfer_coefficient(const BVAlgebra& a, const Splitting& s, int k);
/// Largest coefficient (u^1 .. u^{k_max}) of the transferred differential on H[[u]].
double transferred_differential_norm(const BVAlgebra& a, const Splitting& s, int k_max);

struct PhiTOptions {
  /// Number of positive u-powers in the lift; defaults to min(K + 2, 8).
  std::optional<int> lift_order;
  /// Throw UnsolvableOrder when the u-dependence cannot be removed.
  bool require_u_free = false;
  double tol = 1e-8;
};

struct PhiTResult {
  std::vector<ComplexVector> classes;  // eps^k coefficient in H coordinates, k = 1..K
  MixedSeries lift;                    // the chosen lift of a
  double constraint_residual = 0.0;    // lift equation, worst order
  double u_residual = 0.0;             // largest u^{j != 0} component of T([b_k])
  std::vector<double> u_residual_by_order;
};

PhiTResult phi_T(const BVAlgebra& a, const FormalArc& arc, const Splitting& s, const PhiTOptions& options = {});

struct MinimalModelReport {
  double m2 = 0.0;
  double m3 = 0.0;
};

/// Norms of the transferred binary and ternary operations of (A, d, [,]) on H.
MinimalModelReport minimal_model_products(const BVAlgebra& a, const Splitting& s, int order);

}  // namespace nchodge
