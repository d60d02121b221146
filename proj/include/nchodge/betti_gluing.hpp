#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nchodge/matrix.hpp"

namespace nchodge {

/// Linear maps T_ij : U_j -> U_i between the spaces attached to the points.
/// Indices are 0-based.
class BiiiData {
 public:
  BiiiData(std::vector<Complex> points, std::vector<int> dims,
           std::map<std::pair<int, int>, ComplexMatrix> maps, double tol = kDefaultTol);

  int size() const noexcept { return static_cast<int>(points_.size()); }
  const std::vector<Complex>& points() const noexcept { return points_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  /// T_ij; absent entries are zero maps.
  ComplexMatrix map(int i, int j) const;
  const std::map<std::pair<int, int>, ComplexMatrix>& maps() const noexcept { return maps_; }
  int total_dim() const;
  /// Offset of U_i inside the direct sum.
  int offset(int i) const;
  /// The block matrix (T_ij) on the direct sum.
  ComplexMatrix assembled() const;

 private:
  std::vector<Complex> points_;
  std::vector<int> dims_;
  std::map<std::pair<int, int>, ComplexMatrix> maps_;
};

/// Generic stalk U with subspaces psi_i : V_i -> U and automorphisms T_i.
struct DescentData {
  int dim_u = 0;
  std::vector<ComplexMatrix> psi;  // dim_u x dim V_i
  std::vector<ComplexMatrix> t;    // dim_u x dim_u

  int size() const noexcept { return static_cast<int>(psi.size()); }
  /// Shapes, invertibility of T_i and im psi_i inside ker(T_i - 1); throws UsageError.
  void validate(double tol = kDefaultTol) const;
};

DescentData biii_to_descent(const BiiiData& b);

struct Conversion {
  BiiiData data;
  /// identifications[i] : U_i -> U (dim_u x dims[i]), the chosen complement of V_i.
  std::vector<ComplexMatrix> identifications;
};

/// Throws NotConvertibleError when the acyclicity conditions fail.
Conversion descent_to_biii(const DescentData& d, const std::vector<Complex>& points = {},
                           double tol = kDefaultTol);

struct AcyclicityReport {
  bool acyclic;
  bool via_complex;
  bool via_conditions;
};

AcyclicityReport check_acyclicity(const DescentData& d, double tol = kDefaultTol);

/// Relations T_ii^{-1} p_i T p_i = p_i T p_i T_ii^{-1} = p_i and p_i^2 = p_i
/// for the block projectors p_i. `projector_override` replaces the computed p_i.
bool check_quiver_rep(const BiiiData& b, double tol = kDefaultTol,
                      const std::vector<ComplexMatrix>* projector_override = nullptr);

/// Maximum deviation of T_ij from P_i T'_ij P_j^{-1} over all blocks, where
/// P_i = p_i^T E_i compares a converted instance back to the original.
double round_trip_deviation(const BiiiData& original, const Conversion& converted);

/// Reorder points: the new i-th point is old point perm[i].
BiiiData permute_points(const BiiiData& b, const std::vector<int>& perm);

struct GluedStructure {
  std::vector<std::pair<int, ComplexMatrix>> regular;  // (dim U_i, T_ii)
  std::map<std::pair<int, int>, ComplexMatrix> gluing;  // T_ij, i != j
  std::vector<Complex> points;                          // linear order of the points

  BiiiData data() const;
};

GluedStructure glue(std::vector<std::pair<int, ComplexMatrix>> regular,
                    std::map<std::pair<int, int>, ComplexMatrix> gluing, std::vector<Complex> points,
                    double tol = kDefaultTol);

}  // namespace nchodge
