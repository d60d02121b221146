#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nchodge/matrix.hpp"
#include "nchodge/quantum_connection.hpp"

namespace nchodge {

/// Matrix A(z) of a connection d + A(z) dz; flat sections solve psi' = -A psi.
using ConnectionMatrix = std::function<ComplexMatrix(Complex)>;

/// A path in the complex plane, parametrized by arclength.
class PlanePath {
 public:
  enum class Kind { polyline, circle };

  static PlanePath polyline(std::vector<Complex> waypoints);
  /// Circle of the given radius around `center`, starting at angle
  /// `start_angle` and winding `turns` times (+1 = once counterclockwise).
  static PlanePath circle(Complex center, double radius, double start_angle, double turns);
  /// Circle around `center` through `basepoint`, once counterclockwise.
  static PlanePath loop_around(Complex center, Complex basepoint, double turns = 1.0);

  Kind kind() const noexcept { return kind_; }
  const std::vector<Complex>& waypoints() const noexcept { return waypoints_; }
  Complex center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  double start_angle() const noexcept { return start_angle_; }
  double turns() const noexcept { return turns_; }

  double length() const;
  Complex start() const { return point(0.0); }
  Complex end() const { return point(length()); }
  bool is_closed(double tol = 1e-12) const;

  Complex point(double s) const;
  /// dz/ds (unit modulus away from polyline corners).
  Complex tangent(double s) const;
  /// Arclength positions of the smooth pieces' endpoints, including 0 and length().
  std::vector<double> breakpoints() const;

  /// Smallest distance to the given points, sampled at `samples_per_unit` per unit length.
  double min_distance_to(const std::vector<Complex>& points, int samples_per_unit = 256) const;
  /// Throws DomainError if the path passes within `clearance` of a singular point.
  void require_avoids(const std::vector<Complex>& singular, double clearance = 1e-9) const;

 private:
  Kind kind_ = Kind::polyline;
  std::vector<Complex> waypoints_;
  std::vector<double> cumulative_;
  Complex center_{};
  double radius_ = 0.0;
  double start_angle_ = 0.0;
  double turns_ = 0.0;
};

struct TrajectorySample {
  double s;  // arclength
  Complex z;
  ComplexVector value;
};

struct TransportOptions {
  double tol = 1e-10;
  long max_steps = 1'000'000;
  /// When set, every accepted step is appended here.
  std::vector<TrajectorySample>* trajectory = nullptr;
};

/// Solves psi'(z) = -A(z) psi(z) along the path with an embedded 5(4)
/// Runge-Kutta pair; local error per unit arclength is kept below tol.
ComplexVector transport(const ConnectionMatrix& a, const PlanePath& path, const ComplexVector& v0,
                        double tol = 1e-10);
ComplexVector transport(const ConnectionMatrix& a, const PlanePath& path, const ComplexVector& v0,
                        const TransportOptions& options);

/// Continuation matrix of a closed loop, built column by column.
ComplexMatrix monodromy(const ConnectionMatrix& a, const PlanePath& loop, double tol = 1e-10);

/// u-plane connection matrix of CP^{n-1} at fixed q.
ConnectionMatrix cpn_u_matrix(int n, Complex q);
/// q-plane connection matrix of CP^{n-1} at fixed u.
ConnectionMatrix cpn_q_matrix(int n, Complex u);

/// Monodromy of the u-connection around u = 0 along the circle through `basepoint`.
ComplexMatrix cpn_u_monodromy(int n, Complex q, Complex basepoint = -1.0, double tol = 1e-10);
/// Monodromy of the q-connection around q = 0 along the circle through `q0`.
ComplexMatrix cpn_q_monodromy(int n, Complex u, Complex q0, double tol = 1e-10);

/// log(-u) on the principal branch; u on the closed positive real axis is rejected.
Complex log_minus_u(Complex u);

/// Classical-limit flat section at u from the Mellin expansion of
/// (-u)^{(1-n)/2} (-u)^{ns} Gamma(s)^n; component k multiplies h^k.
ComplexVector psi_cl_coeffs(int n, Complex u);

/// exp(log(-u) Gr) exp((log(-u)/u) K), with K the classical kappa-matrix.
ComplexMatrix classical_conjugator(int n, Complex u, const std::optional<GradingOperator>& gr = {});

/// classical_conjugator(n, u) * psi_cl_coeffs(n, u); independent of u.
ComplexVector psi_const(int n, Complex u);

/// Max-norm difference between (d/du + K/u^2 + Gr/u) v and M^{-1} d/du (M v),
/// with M = classical_conjugator and d/du of M taken by Richardson-extrapolated
/// central differences.
/// `gr` overrides the grading operator on both sides.
double check_conjugation_identity(int n, Complex u, const ComplexVector& v,
                                  const std::optional<GradingOperator>& gr = {});

}  // namespace nchodge
