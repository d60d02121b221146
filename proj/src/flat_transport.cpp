#include "nchodge/flat_transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "nchodge/constants.hpp"
#include "nchodge/errors.hpp"

namespace nchodge {

// ---------------------------------------------------------------- paths

PlanePath PlanePath::polyline(std::vector<Complex> waypoints) {
  if (waypoints.size() < 2) throw UsageError("polyline needs at least two waypoints");
  PlanePath p;
  p.kind_ = Kind::polyline;
  p.cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    require_finite(waypoints[i], "path waypoint");
    if (i > 0) p.cumulative_.push_back(p.cumulative_.back() + std::abs(waypoints[i] - waypoints[i - 1]));
  }
  p.waypoints_ = std::move(waypoints);
  return p;
}

PlanePath PlanePath::circle(Complex center, double radius, double start_angle, double turns) {
  require_finite(center, "circle center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("circle radius must be positive");
  if (turns == 0.0 || !std::isfinite(turns)) throw UsageError("circle needs a nonzero number of turns");
  PlanePath p;
  p.kind_ = Kind::circle;
  p.center_ = center;
  p.radius_ = radius;
  p.start_angle_ = start_angle;
  p.turns_ = turns;
  return p;
}

PlanePath PlanePath::loop_around(Complex center, Complex basepoint, double turns) {
  const Complex offset = basepoint - center;
  return circle(center, std::abs(offset), std::arg(offset), turns);
}

double PlanePath::length() const {
  if (kind_ == Kind::circle) return 2.0 * std::numbers::pi * radius_ * std::abs(turns_);
  return cumulative_.back();
}

bool PlanePath::is_closed(double tol) const {
  if (kind_ == Kind::circle) return std::abs(turns_ - std::round(turns_)) <= tol;
  return std::abs(waypoints_.front() - waypoints_.back()) <= tol * std::max(1.0, length());
}

Complex PlanePath::point(double s) const {
  if (kind_ == Kind::circle) {
    const double dir = turns_ > 0 ? 1.0 : -1.0;
    return center_ + radius_ * std::polar(1.0, start_angle_ + dir * s / radius_);
  }
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t seg = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  seg = std::clamp<std::size_t>(seg, 1, waypoints_.size() - 1);
  const double seg_len = cumulative_[seg] - cumulative_[seg - 1];
  if (seg_len == 0.0) return waypoints_[seg];
  const double t = (s - cumulative_[seg - 1]) / seg_len;
  return waypoints_[seg - 1] + t * (waypoints_[seg] - waypoints_[seg - 1]);
}

Complex PlanePath::tangent(double s) const {
  if (kind_ == Kind::circle) {
    const double dir = turns_ > 0 ? 1.0 : -1.0;
    return Complex{0.0, dir} * std::polar(1.0, start_angle_ + dir * s / radius_);
  }
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t seg = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  seg = std::clamp<std::size_t>(seg, 1, waypoints_.size() - 1);
  const Complex delta = waypoints_[seg] - waypoints_[seg - 1];
  const double len = std::abs(delta);
  return len == 0.0 ? Complex{} : delta / len;
}

std::vector<double> PlanePath::breakpoints() const {
  if (kind_ == Kind::circle) return {0.0, length()};
  std::vector<double> b;
  for (double c : cumulative_)
    if (b.empty() || c > b.back()) b.push_back(c);
  if (b.size() == 1) b.push_back(b.front());
  return b;
}

double PlanePath::min_distance_to(const std::vector<Complex>& points, int samples_per_unit) const {
  double best = std::numeric_limits<double>::infinity();
  if (points.empty()) return best;
  const double len = length();
  const long samples = std::max<long>(64, static_cast<long>(std::ceil(len * samples_per_unit)));
  for (long i = 0; i <= samples; ++i) {
    const Complex z = point(len * static_cast<double>(i) / static_cast<double>(samples));
    for (const Complex& p : points) best = std::min(best, std::abs(z - p));
  }
  return best;
}

void PlanePath::require_avoids(const std::vector<Complex>& singular, double clearance) const {
  if (min_distance_to(singular) <= clearance) throw DomainError("path passes through a singular point");
}

// ---------------------------------------------------------------- integrator

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr std::array<double, 7> kB = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                      -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kBStar = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                          -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

double inf_norm(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Integrates one smooth piece [s0, s1] of the path.
ComplexVector integrate_piece(const ConnectionMatrix& a, const PlanePath& path, double s0, double s1,
                              ComplexVector y, const TransportOptions& opt, long& steps) {
  const double span = s1 - s0;
  if (span <= 0.0) return y;
  auto rhs = [&](double s, const ComplexVector& v) -> ComplexVector {
    const ComplexMatrix m = a(path.point(s));
    return -(m * v) * path.tangent(s);
  };
  double h = std::min(span, 1e-2 * std::max(1.0, span));
  double s = s0;
  std::array<ComplexVector, 7> k;
  k[0] = rhs(s, y);
  while (s < s1) {
    if (s + h > s1) h = s1 - s;
    if (h < 1e-14 * std::max(1.0, std::abs(s1)))
      throw TransportError("step size underflow (singularity near path?)", s);
    if (++steps > opt.max_steps) throw TransportError("step budget exhausted", s);
    for (int i = 1; i < 7; ++i) {
      ComplexVector yi = y;
      for (int j = 0; j < i; ++j)
        if (kA[i][j] != 0.0) yi += (h * kA[i][j]) * k[static_cast<std::size_t>(j)];
      k[static_cast<std::size_t>(i)] = rhs(s + kC[static_cast<std::size_t>(i)] * h, yi);
    }
    ComplexVector y_new = y;
    ComplexVector err = ComplexVector::Zero(y.size());
    for (std::size_t i = 0; i < 7; ++i) {
      if (kB[i] != 0.0) y_new += (h * kB[i]) * k[i];
      err += (h * (kB[i] - kBStar[i])) * k[i];
    }
    if (!y_new.allFinite()) {
      h *= 0.25;
      continue;
    }
    const double scale = std::max(1.0, std::max(inf_norm(y), inf_norm(y_new)));
    const double err_per_unit = inf_norm(err) / (h * scale);
    if (err_per_unit <= opt.tol) {
      s += h;
      y = std::move(y_new);
      k[0] = k[6];  // first-same-as-last
      if (opt.trajectory) opt.trajectory->push_back({s, path.point(s), y});
      const double grow = err_per_unit == 0.0 ? 5.0 : 0.9 * std::pow(opt.tol / err_per_unit, 0.25);
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(opt.tol / err_per_unit, 0.25), 0.1, 0.9);
    }
  }
  return y;
}

}  // namespace

ComplexVector transport(const ConnectionMatrix& a, const PlanePath& path, const ComplexVector& v0,
                        const TransportOptions& options) {
  if (!(options.tol > 0.0)) throw UsageError("transport tolerance must be positive");
  require_finite(v0, "transport initial vector");
  if (options.trajectory) options.trajectory->push_back({0.0, path.start(), v0});
  const auto bp = path.breakpoints();
  ComplexVector y = v0;
  long steps = 0;
  for (std::size_t i = 1; i < bp.size(); ++i) y = integrate_piece(a, path, bp[i - 1], bp[i], y, options, steps);
  return y;
}

ComplexVector transport(const ConnectionMatrix& a, const PlanePath& path, const ComplexVector& v0,
                        double tol) {
  TransportOptions opt;
  opt.tol = tol;
  return transport(a, path, v0, opt);
}

ComplexMatrix monodromy(const ConnectionMatrix& a, const PlanePath& loop, double tol) {
  if (!loop.is_closed()) throw UsageError("monodromy needs a closed loop");
  const ComplexMatrix a0 = a(loop.start());
  const Eigen::Index r = a0.rows();
  ComplexMatrix m(r, r);
  for (Eigen::Index j = 0; j < r; ++j) m.col(j) = transport(a, loop, ComplexVector::Unit(r, j), tol);
  return m;
}

ConnectionMatrix cpn_u_matrix(int n, Complex q) {
  return [conn = build_cpn_u_connection(n, q)](Complex u) { return conn.matrix_at(u); };
}

ConnectionMatrix cpn_q_matrix(int n, Complex u) {
  return [qc = build_cpn_q_connection(n, u)](Complex q) { return qc(q); };
}

ComplexMatrix cpn_u_monodromy(int n, Complex q, Complex basepoint, double tol) {
  const PlanePath loop = PlanePath::loop_around(0.0, basepoint);
  loop.require_avoids({0.0});
  return monodromy(cpn_u_matrix(n, q), loop, tol);
}

ComplexMatrix cpn_q_monodromy(int n, Complex u, Complex q0, double tol) {
  const PlanePath loop = PlanePath::loop_around(0.0, q0);
  loop.require_avoids({0.0});
  return monodromy(cpn_q_matrix(n, u), loop, tol);
}

// ---------------------------------------------------------------- classical limit

Complex log_minus_u(Complex u) {
  require_finite(u, "u");
  if (u == Complex{}) throw DomainError("u = 0 is the irregular singular point");
  if (u.imag() == 0.0 && u.real() > 0.0) throw DomainError("u lies on the branch cut of log(-u)");
  // Signed zero in Im(-u) would select the lower side of the cut; approach from above.
  const Complex w{-u.real(), u.imag() == 0.0 ? 0.0 : -u.imag()};
  return std::log(w);
}

ComplexVector psi_cl_coeffs(int n, Complex u) {
  if (n < 1) throw UsageError("psi_cl_coeffs needs n >= 1");
  const Complex log_w = log_minus_u(u);
  // Gamma(s)^n = s^{-n} exp(n log Gamma(1+s)), known through s^{-1}.
  const TruncatedSeries gamma_n = series_exp(log_gamma_taylor(n).scaled(static_cast<double>(n)));
  const LaurentSeries gamma_power = LaurentSeries::shifted(gamma_n, -n);
  // (-u)^{ns} = exp(n s log(-u)).
  const TruncatedSeries ns_log =
      TruncatedSeries::variable(Var::s, n).scaled(static_cast<double>(n) * log_w);
  const LaurentSeries mellin = (gamma_power * LaurentSeries::shifted(series_exp(ns_log), 0))
                                   .scaled(std::exp(0.5 * (1.0 - n) * log_w));
  // mellin = sum_k psi_k / ((-u)^{n-k} s^{n-k+1}) + O(1), k = 1..n.
  ComplexVector psi(n);
  for (int k = 1; k <= n; ++k)
    psi(k - 1) = std::exp(static_cast<double>(n - k) * log_w) * mellin.coeff(-(n - k + 1));
  return psi;
}

ComplexMatrix classical_conjugator(int n, Complex u, const std::optional<GradingOperator>& gr) {
  const Complex log_w = log_minus_u(u);
  const GradingOperator grading = gr.value_or(GradingOperator::cpn(n));
  if (grading.rank() != n) throw UsageError("grading operator rank mismatch");
  const ComplexMatrix kappa = build_cpn_u_connection(n, 0.0).term(-2);
  return matrix_exp_poly(log_w * grading.matrix(), ExpKind::diagonal) *
         matrix_exp_poly((log_w / u) * kappa, ExpKind::nilpotent);
}

ComplexVector psi_const(int n, Complex u) {
  if (n < 2) {
    if (n == 1) {
      log_minus_u(u);
      return ComplexVector::Ones(1);
    }
    throw UsageError("psi_const needs n >= 1");
  }
  return classical_conjugator(n, u) * psi_cl_coeffs(n, u);
}

double check_conjugation_identity(int n, Complex u, const ComplexVector& v,
                                  const std::optional<GradingOperator>& gr) {
  if (v.size() != n) throw UsageError("check_conjugation_identity: vector has wrong length");
  const GradingOperator grading = gr.value_or(GradingOperator::cpn(n));
  const ComplexMatrix kappa = build_cpn_u_connection(n, 0.0).term(-2);
  const ComplexVector lhs = (kappa / (u * u) + grading.matrix() / u) * v;
  const double step = 1e-4 * std::abs(u);
  const ComplexMatrix m = classical_conjugator(n, u, grading);
  auto central = [&](double h) {
    return ComplexMatrix((classical_conjugator(n, u + h, grading) - classical_conjugator(n, u - h, grading)) / (2.0 * h));
  };
  // One Richardson step removes the h^2 term.
  const ComplexMatrix dm = (4.0 * central(0.5 * step) - central(step)) / 3.0;
  const ComplexVector rhs = m.lu().solve(dm * v);
  return v.size() == 0 ? 0.0 : (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace nchodge
