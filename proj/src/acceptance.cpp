#include "nchodge/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "nchodge/betti_gluing.hpp"
#include "nchodge/bv_formal.hpp"
#include "nchodge/char_class.hpp"
#include "nchodge/constants.hpp"
#include "nchodge/flat_transport.hpp"
#include "nchodge/generators.hpp"
#include "nchodge/quantum_connection.hpp"
#include "nchodge/stokes.hpp"

namespace nchodge::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double vmax(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CriterionResult finish(int id, std::string name, bool pass, std::string detail, Clock::time_point t0) {
  return {id, std::move(name), pass, std::move(detail), seconds_since(t0)};
}

/// Label order at angle phi, sorted directly by Re(c e^{-i phi}).
std::vector<int> order_at(const ExponentSet& e, double phi) {
  std::vector<int> order(static_cast<std::size_t>(e.size()));
  for (int a = 0; a < e.size(); ++a) order[static_cast<std::size_t>(a)] = a;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return (e[x] * std::polar(1.0, -phi)).real() < (e[y] * std::polar(1.0, -phi)).real();
  });
  return order;
}

}  // namespace

CriterionResult gamma_class_reproduction(const SuiteOptions&) {
  const auto t0 = Clock::now();
  const double gamma = oracle::euler_gamma_richardson();
  const double zeta2 = oracle::zeta_direct(2);
  double err = 0.0, oracle_err = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const ComplexVector psi = psi_const(n, -1.0);
    const CohomologyElement g = gamma_hat_cpn(n);
    for (int k = 0; k < n; ++k) err = std::max(err, std::abs(psi(k) - g.series()[k]));
    // Gamma(1+h)^n = 1 - n gamma h + (n^2 gamma^2 + n zeta(2))/2 h^2 + ...
    const double expect[3] = {1.0, -n * gamma, 0.5 * (n * n * gamma * gamma + n * zeta2)};
    for (int k = 0; k < std::min(n, 3); ++k) oracle_err = std::max(oracle_err, std::abs(psi(k) - expect[k]));
  }
  const double t = seconds_since(t0);
  const bool pass = err <= 1e-10 && oracle_err <= 1e-10 && t < 1.0;
  return finish(1, "Gamma-class reproduction", pass,
                "max |psi_const - Gamma-hat| = " + sci(err) + " (tol 1e-10), vs constant oracles " + sci(oracle_err) +
                    ", runtime " + sci(t) + " s (limit 1 s)",
                t0);
}

CriterionResult u_independence(const SuiteOptions&) {
  const auto t0 = Clock::now();
  double err = 0.0;
  for (int n : {2, 3, 4}) {
    const ComplexVector ref = psi_const(n, -1.0);
    for (double u : {-0.5, -2.0, -4.0}) err = std::max(err, vmax(psi_const(n, u) - ref));
  }
  return finish(2, "u-independence", err <= 1e-8, "max spread over u in {-0.5,-1,-2,-4} = " + sci(err) + " (tol 1e-8)",
                t0);
}

CriterionResult conjugation_identity(const SuiteOptions& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 3);
  std::uniform_real_distribution<double> radius(0.8, 2.5), angle(-1.0, 1.0);
  const int count = o.fast ? 20 : 100;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + i % 4;
    const Complex u = -std::polar(radius(rng), angle(rng));
    worst = std::max(worst, check_conjugation_identity(n, u, gen::random_vector(n, rng)));
  }
  return finish(3, "conjugation identity", worst < 1e-8,
                std::to_string(count) + " vectors, n = 2..5, worst residual " + sci(worst) + " (tol 1e-8)", t0);
}

CriterionResult q_monodromy(const SuiteOptions&) {
  const auto t0 = Clock::now();
  const Complex u = -1.0;
  std::ostringstream detail;
  bool pass = true;
  for (auto [n, tol] : {std::pair{2, 2e-2}, std::pair{3, 5e-2}}) {
    const ComplexMatrix nil = ShiftMatrix{n, 0.0}.matrix();
    const ComplexMatrix expect = matrix_exp_poly((kTwoPiI / u) * nil, ExpKind::nilpotent);
    std::vector<double> errs;
    for (double r : {1e-2, 1e-3, 1e-4}) errs.push_back(vmax(cpn_q_monodromy(n, u, r) - expect));
    const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];
    pass = pass && monotone && errs[1] <= tol;
    detail << "n=" << n << " errors " << sci(errs[0]) << "/" << sci(errs[1]) << "/" << sci(errs[2])
           << " at |q|=1e-2/1e-3/1e-4 (tol " << sci(tol) << " at 1e-3" << (monotone ? ", monotone" : ", NOT monotone")
           << "); ";
  }
  const double t = seconds_since(t0);
  pass = pass && t < 30.0;
  detail << "runtime " << sci(t) << " s (limit 30 s)";
  return finish(4, "q-monodromy branches", pass, detail.str(), t0);
}

CriterionResult u_monodromy(const SuiteOptions&) {
  const auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream detail;
  std::optional<Complex> reference;
  double spread = 0.0, worst_fit = 0.0, worst_unipotent = 0.0;
  for (int n : {2, 3, 4}) {
    const ComplexMatrix m = cpn_u_monodromy(n, 0.0, -1.0);
    const ComplexMatrix unip = (n % 2 == 1 ? 1.0 : -1.0) * m;
    const ComplexMatrix x = unip - ComplexMatrix::Identity(n, n);
    ComplexMatrix power = x;
    for (int k = 1; k < n; ++k) power = power * x;
    worst_unipotent = std::max(worst_unipotent, vmax(power) / std::max(1.0, vmax(m)));
    ComplexMatrix log = ComplexMatrix::Zero(n, n);
    ComplexMatrix xk = ComplexMatrix::Identity(n, n);
    for (int k = 1; k < n; ++k) {
      xk = xk * x;
      log += ((k % 2 == 1) ? 1.0 : -1.0) / k * xk;
    }
    const ComplexMatrix kappa = build_cpn_u_connection(n, 0.0).term(-2);
    const Complex c = (kappa.adjoint() * log).trace() / (kappa.adjoint() * kappa).trace();
    worst_fit = std::max(worst_fit, vmax(log - c * kappa) / vmax(log));
    if (!reference) reference = c;
    spread = std::max(spread, std::abs(c - *reference));
  }
  const double oracle_gap = std::abs(*reference - kTwoPiI);
  pass = worst_unipotent <= 1e-8 && worst_fit <= 1e-6 && spread <= 1e-6 && oracle_gap <= 1e-6;
  detail << "(-1)^(n-1) M unipotent to " << sci(worst_unipotent) << ", log M proportional to kappa to "
         << sci(worst_fit) << ", constant " << sci(reference->real()) << (reference->imag() < 0 ? "" : "+")
         << sci(reference->imag()) << "i (2 pi i gap " << sci(oracle_gap) << "), spread over n=2,3,4 " << sci(spread)
         << " (tol 1e-6)";
  return finish(5, "u-monodromy at q=0", pass, detail.str(), t0);
}

CriterionResult mayer_vietoris(const SuiteOptions& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 6);
  const int random_count = o.fast ? 40 : 150;
  const int adversarial_count = o.fast ? 10 : 50;
  int disagreements = 0, acyclic = 0, wrong_verdicts = 0;
  auto record = [&](const DescentData& d) {
    const AcyclicityReport r = check_acyclicity(d);
    if (r.via_complex != r.via_conditions) ++disagreements;
    if (r.acyclic) ++acyclic;
    return r;
  };
  for (int i = 0; i < random_count; ++i) record(gen::random_descent(rng));
  const auto kinds = gen::all_adversaries();
  for (int i = 0; i < adversarial_count; ++i) {
    const gen::Adversary kind = kinds[static_cast<std::size_t>(i) % kinds.size()];
    const AcyclicityReport r = record(gen::adversarial_descent(kind, rng));
    if ((kind == gen::Adversary::equal_lines || kind == gen::Adversary::dependent_columns) && r.acyclic) ++wrong_verdicts;
    if ((kind == gen::Adversary::near_equal_lines || kind == gen::Adversary::near_dependent_columns) && !r.acyclic)
      ++wrong_verdicts;
  }
  const int total = random_count + adversarial_count;
  return finish(6, "Mayer-Vietoris equivalence", disagreements == 0 && wrong_verdicts == 0,
                std::to_string(total) + " instances (" + std::to_string(adversarial_count) + " adversarial), " +
                    std::to_string(acyclic) + " acyclic, " + std::to_string(disagreements) + " disagreements, " +
                    std::to_string(wrong_verdicts) + " wrong adversarial verdicts",
                t0);
}

CriterionResult round_trip(const SuiteOptions& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 7);
  const int count = o.fast ? 20 : 100;
  double worst = 0.0;
  int quiver_failures = 0;
  for (int i = 0; i < count; ++i) {
    const BiiiData b = gen::random_biii(rng);
    const Conversion c = descent_to_biii(biii_to_descent(b), b.points());
    worst = std::max(worst, round_trip_deviation(b, c));
    if (!check_quiver_rep(c.data)) ++quiver_failures;
  }
  return finish(7, "B(iii) <-> descent round trip", worst <= 1e-10 && quiver_failures == 0,
                std::to_string(count) + " instances, max deviation " + sci(worst) + " (tol 1e-10), " +
                    std::to_string(quiver_failures) + " quiver-relation failures",
                t0);
}

CriterionResult stokes_structure(const SuiteOptions& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 8);
  std::uniform_int_distribution<int> dim_dist(1, 2);
  const int count = o.fast ? 10 : 50;
  int bad_crossings = 0, bad_composites = 0, rejected_generic = 0, accepted_corruptions = 0;
  int crossings = 0, corruptions = 0;
  for (int i = 0; i < count; ++i) {
    const int m = 2 + i % 4;
    const ExponentSet e = gen::random_exponents(m, i % 4, rng);
    const ArcDecomposition arcs = stokes_directions(e);
    const int k = static_cast<int>(arcs.directions.size());
    double gap = 1.0;
    for (int a = 0; a < k; ++a) {
      const double next = a + 1 < k ? arcs.directions[static_cast<std::size_t>(a + 1)]
                                    : arcs.directions[0] + 2.0 * std::numbers::pi;
      gap = std::min(gap, next - arcs.directions[static_cast<std::size_t>(a)]);
    }
    const double delta = std::min(1e-6, gap / 4.0);

    std::vector<int> composite(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) composite[static_cast<std::size_t>(p)] = p;
    for (double phi : arcs.directions) {
      ++crossings;
      const Crossing c = crossing_permutation(e, phi);
      bool ok = c.before == order_at(e, phi - delta) && c.after == order_at(e, phi + delta);
      std::vector<int> reversed = c.before;
      int last_hi = -1;
      for (auto [lo, hi] : c.blocks) {
        ok = ok && lo > last_hi && hi > lo && hi < m;
        if (!ok) break;
        std::reverse(reversed.begin() + lo, reversed.begin() + hi + 1);
        last_hi = hi;
      }
      ok = ok && reversed == c.after && !c.blocks.empty();
      for (int p = 0; ok && p < m; ++p)
        ok = c.after[static_cast<std::size_t>(p)] == c.before[static_cast<std::size_t>(c.permutation[static_cast<std::size_t>(p)])];
      if (!ok) ++bad_crossings;
      // Track which original label sits at each position.
      std::vector<int> next(static_cast<std::size_t>(m));
      for (int p = 0; p < m; ++p)
        next[static_cast<std::size_t>(p)] = composite[static_cast<std::size_t>(c.permutation[static_cast<std::size_t>(p)])];
      composite = next;
    }
    for (int p = 0; p < m; ++p)
      if (composite[static_cast<std::size_t>(p)] != p) {
        ++bad_composites;
        break;
      }

    std::vector<int> dims(static_cast<std::size_t>(m));
    for (auto& d : dims) d = dim_dist(rng);
    const FilteredLocalSystem f = generic_filtration(e, dims, rng);
    if (!validate_filtration(f, e).valid()) ++rejected_generic;
    for (auto [arc, step] : gen::corruptible_steps(f, e)) {
      ++corruptions;
      if (validate_filtration(gen::corrupt_step(f, e, arc, step, rng), e).valid()) ++accepted_corruptions;
    }
  }
  const bool pass = bad_crossings == 0 && bad_composites == 0 && rejected_generic == 0 && accepted_corruptions == 0;
  return finish(8, "Stokes crossing structure", pass,
                std::to_string(count) + " exponent sets, " + std::to_string(crossings) + " crossings (" +
                    std::to_string(bad_crossings) + " not block reversals), " + std::to_string(bad_composites) +
                    " non-identity composites, " + std::to_string(rejected_generic) + " generic filtrations rejected, " +
                    std::to_string(accepted_corruptions) + "/" + std::to_string(corruptions) + " corruptions accepted",
                t0);
}

CriterionResult bv_degeneration(const SuiteOptions& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(o.seed + 9);
  std::ostringstream detail;

  const int abelian_count = o.fast ? 8 : 20;
  int not_free = 0;
  for (int i = 0; i < abelian_count; ++i) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    bool ok = check_bv_axioms(a).ok();
    for (const auto& entry : check_degeneration(a, 4)) ok = ok && entry.free;
    if (!ok) ++not_free;
  }
  detail << "Delta=0 family: " << abelian_count - not_free << "/" << abelian_count << " free for N<=4; ";

  const BVAlgebra example = gen::grassmann_contraction_example();
  const auto entries = check_degeneration(example, 2);
  const bool example_ok = check_bv_axioms(example).ok() && entries.size() == 2 && entries[1].dim == 6 &&
                          entries[1].expected == 8 && !entries[1].free;
  detail << "contraction example N=2: dim " << (entries.size() == 2 ? entries[1].dim : -1) << " vs expected "
         << (entries.size() == 2 ? entries[1].expected : -1) << (example_ok ? " (non-free); " : " (MISMATCH); ");

  const int mc_count = o.fast ? 20 : 100;
  const auto& active = gen::active_bv_family();
  double worst_df = 0.0, worst_mc = 0.0;
  for (int i = 0; i < mc_count; ++i) {
    const BVAlgebra a = gen::random_rescaling(active[static_cast<std::size_t>(i) % active.size()], rng);
    const MixedSeries s = gen::random_mc_order2(a, rng);
    const MixedSeries mc = mixed_mc_residual(a, s);
    const MixedSeries df = apply_D(a, F_transform(a, s));
    for (int k = 1; k <= 2; ++k) {
      for (int j = mc.u_min(); j <= mc.u_max(); ++j) worst_mc = std::max(worst_mc, vmax(mc.at(k, j)));
      for (int j = df.u_min(); j <= df.u_max(); ++j) worst_df = std::max(worst_df, vmax(df.at(k, j)));
    }
  }
  detail << "(d+u Delta)F(a) on " << mc_count << " MC inputs: " << sci(worst_df) << " (tol 1e-10, input MC "
         << sci(worst_mc) << "); ";

  const int identity_count = o.fast ? 5 : 20;
  double worst_identity = 0.0;
  for (int i = 0; i < identity_count; ++i) {
    const BVAlgebra a = gen::random_abelian_algebra(rng);
    const Splitting s = build_splitting(a);
    const FormalArc arc = gen::random_closed_arc(a, 4, rng);
    const PhiTResult r = phi_T(a, arc, s);
    for (int k = 0; k < 4; ++k)
      worst_identity = std::max(worst_identity, vmax(r.classes[static_cast<std::size_t>(k)] - s.p * arc.coeffs[static_cast<std::size_t>(k)]));
  }
  detail << "Phi_T identity to order 4 on " << identity_count << " abelian algebras: " << sci(worst_identity)
         << " (tol 1e-9); ";

  const auto& degenerate = gen::degenerate_bv_family();
  const int gauge_count = o.fast ? 5 : 20;
  double worst_gauge = 0.0, worst_gauge_mc = 0.0, min_shift = INFINITY, min_class = INFINITY;
  for (int i = 0; i < gauge_count && !degenerate.empty(); ++i) {
    const BVAlgebra a = gen::random_rescaling(degenerate[static_cast<std::size_t>(i) % degenerate.size()], rng);
    const Splitting s = build_splitting(a);
    const FormalArc arc = gen::harmonic_mc_arc(a, s, rng);
    const FormalArc moved = gen::gauge_order2(a, arc, gen::random_homogeneous(a, 1, rng));
    for (const auto& r : maurer_cartan_residual(a, moved)) worst_gauge_mc = std::max(worst_gauge_mc, vmax(r));
    const PhiTResult r1 = phi_T(a, arc, s);
    const PhiTResult r2 = phi_T(a, moved, s);
    double scale = 1.0;
    for (const auto& c : moved.coeffs) scale = std::max(scale, vmax(c));
    min_shift = std::min(min_shift, vmax(moved.coeffs[0] - arc.coeffs[0]) + vmax(moved.coeffs[1] - arc.coeffs[1]));
    min_class = std::min(min_class, vmax(r1.classes[1]));
    for (int k = 0; k < 2; ++k)
      worst_gauge = std::max(worst_gauge, vmax(r1.classes[static_cast<std::size_t>(k)] - r2.classes[static_cast<std::size_t>(k)]) / scale);
  }
  detail << "gauge invariance to order 2 on " << gauge_count << " degenerate examples (" << degenerate.size()
         << " algebras): " << sci(worst_gauge) << " (tol 1e-8, gauged MC " << sci(worst_gauge_mc)
         << ", smallest gauge shift " << sci(min_shift) << ", smallest order-2 class " << sci(min_class) << ")";

  const bool pass = not_free == 0 && example_ok && worst_df <= 1e-10 && worst_identity <= 1e-9 &&
                    !degenerate.empty() && worst_gauge <= 1e-8;
  return finish(9, "BV degeneration classification", pass, detail.str(), t0);
}

CriterionResult constants_self_check(const SuiteOptions&) {
  const auto t0 = Clock::now();
  const TruncatedSeries series = log_gamma_taylor(10);
  double taylor = 0.0;
  for (double s : {0.1, -0.1})
    taylor = std::max(taylor, std::abs(series.evaluate(s).real() - oracle::log_gamma_lanczos(1.0 + s)) +
                                  std::abs(series.evaluate(s).imag()));
  double consts = std::abs(euler_gamma() - oracle::euler_gamma_richardson());
  for (int k = 2; k <= 8; ++k) consts = std::max(consts, std::abs(zeta(k) - oracle::zeta_direct(k)));
  return finish(10, "constants self-check", taylor <= 1e-8 && consts <= 1e-11,
                "log Gamma Taylor(10) at +-0.1 vs Lanczos " + sci(taylor) + " (tol 1e-8), gamma and zeta(2..8) " +
                    sci(consts) + " (tol 1e-11)",
                t0);
}

std::vector<CriterionResult> run_all(const SuiteOptions& o) {
  using Fn = CriterionResult (*)(const SuiteOptions&);
  const Fn criteria[] = {gamma_class_reproduction, u_independence, conjugation_identity, q_monodromy,
                         u_monodromy, mayer_vietoris, round_trip, stokes_structure,
                         bv_degeneration, constants_self_check};
  std::vector<CriterionResult> out;
  for (Fn f : criteria) {
    const auto t0 = Clock::now();
    try {
      out.push_back(f(o));
    } catch (const std::exception& e) {
      out.push_back({static_cast<int>(out.size()) + 1, "criterion", false, std::string("exception: ") + e.what(),
                     seconds_since(t0)});
    }
  }
  return out;
}

std::string format(const CriterionResult& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.2f", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + r.detail + " (" +
         t + " s)";
}

}  // namespace nchodge::acceptance
