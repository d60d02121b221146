#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nchodge/matrix.hpp"
#include "nchodge/quantum_connection.hpp"

namespace nchodge {

/// Distinct exponents c_1..c_m.
class ExponentSet {
 public:
  explicit ExponentSet(std::vector<Complex> values, double tol = kDefaultTol);

  const std::vector<Complex>& values() const noexcept { return values_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  Complex operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }

 private:
  std::vector<Complex> values_;
};

/// Open arc of the circle of directions with the labels sorted by Re(c e^{-i phi}).
struct Arc {
  double begin;  // arc 0 starts below zero: (directions.back() - 2 pi, directions.front())
  double end;
  std::vector<int> order;  // exponent indices, ascending
};

struct ArcDecomposition {
  std::vector<double> directions;  // sorted, in [0, 2 pi)
  std::vector<Arc> arcs;           // arc i ends at directions[i]
};

/// Angles closer than this are the same direction.
inline constexpr double kAngleTol = 1e-10;

double canonical_angle(double phi);

ArcDecomposition stokes_directions(const ExponentSet& e);

struct Crossing {
  double direction;
  std::vector<int> before;  // label order on the arc ending at `direction`
  std::vector<int> after;   // label order on the following arc
  /// Maximal reversed intervals [i, j] of positions (0-based, inclusive).
  std::vector<std::pair<int, int>> blocks;
  /// after[p] == before[permutation[p]].
  std::vector<int> permutation;
};

/// Throws UsageError if phi is not a Stokes direction of e.
Crossing crossing_permutation(const ExponentSet& e, double phi);

/// Flags on every arc of a local system on the circle. Step t of an arc's flag
/// (t = 1..m) is spanned by the columns of arcs[a][t-1] and collects the first t
/// labels of that arc's order. Continuing arc 0's flag once counterclockwise
/// gives monodromy * (arc 0 flag).
struct FilteredLocalSystem {
  int rank = 0;
  ComplexMatrix monodromy;
  std::vector<std::vector<ComplexMatrix>> arcs;
};

struct ValidationIssue {
  double direction;
  std::string condition;  // "unchanged", "block-top", "opposed", "monodromy", "structure"
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const noexcept { return issues.empty(); }
};

/// Dimension of each label's graded piece read from arc 0; throws UsageError on
/// shape mismatches.
std::vector<int> label_dimensions(const FilteredLocalSystem& f, const ExponentSet& e);

ValidationReport validate_filtration(const FilteredLocalSystem& f, const ExponentSet& e,
                                     double tol = kDefaultTol);

/// Flags in general position propagated across every Stokes direction.
FilteredLocalSystem generic_filtration(const ExponentSet& e, const std::vector<int>& dims,
                                       std::mt19937_64& rng);

struct Skeleton {
  ExponentSet exponents;
  std::vector<int> multiplicities;
};

Skeleton skeleton_from_connection(const MeromorphicConnection& conn, double dedup_tol = 1e-8);

}  // namespace nchodge
