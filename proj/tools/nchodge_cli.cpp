#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nchodge/acceptance.hpp"
#include "nchodge/betti_gluing.hpp"
#include "nchodge/bv_formal.hpp"
#include "nchodge/char_class.hpp"
#include "nchodge/constants.hpp"
#include "nchodge/errors.hpp"
#include "nchodge/flat_transport.hpp"
#include "nchodge/generators.hpp"
#include "nchodge/json_io.hpp"
#include "nchodge/quantum_connection.hpp"
#include "nchodge/stokes.hpp"

namespace {

using namespace nchodge;
using io::Json;

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;

/// Relative output paths are resolved against NCHODGE_OUTPUT_DIR when it is set.
std::filesystem::path output_path(const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_relative())
    if (const char* base = std::getenv("NCHODGE_OUTPUT_DIR"); base && *base) p = std::filesystem::path(base) / p;
  return p;
}

Complex parse_complex(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw UsageError(flag + " expects RE or RE,IM, got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError(flag + " expects RE or RE,IM, got '" + text + "'");
  }
  std::string rest;
  if (in >> rest) throw UsageError(flag + " expects RE or RE,IM, got '" + text + "'");
  return {re, im};
}

/// An argument starting with '{' or '[' is inline JSON; anything else is a file name.
Json load(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw io::JsonInputError("/", std::string("inline JSON: ") + e.what());
    }
  }
  return io::read_file(arg);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError(flag + " expects a comma-separated list of integers, got '" + text + "'");
    }
  }
  return out;
}

struct Options {
  std::string output;
  std::uint64_t seed = 20240611;
  double tol = kDefaultTol;
  int n = 2;
  std::string q = "0";
  std::string u = "-1";
  std::string base;
  std::string plane = "u";
  std::string csv;
  int column = 0;
  double transport_tol = 1e-10;
  std::string exponents_file, filtration_file, descent_file, input_file, algebra_file, arc_file;
  std::string direction;
  std::string dims;
  int nmax = 4;
  int lift_order = 0;
  bool require_u_free = false;
  bool full = false;
  std::string out_dir = "fixtures";
};

void emit(const Options& o, const Json& j) {
  if (o.output.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_file(output_path(o.output).string(), j);
  }
}

int cmd_gamma_class(const Options& o) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  emit(o, io::to_json(gamma_hat_cpn(o.n).series()));
  return kOk;
}

int cmd_qconn_build(const Options& o) {
  emit(o, io::to_json(build_cpn_u_connection(o.n, parse_complex(o.q, "--q"))));
  return kOk;
}

int cmd_qconn_monodromy(const Options& o) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  ConnectionMatrix a;
  Complex base;
  Json meta;
  if (o.plane == "u") {
    const Complex q = parse_complex(o.q, "--q");
    base = o.base.empty() ? Complex(-1.0) : parse_complex(o.base, "--base");
    a = cpn_u_matrix(o.n, q);
    meta = {{"plane", "u"}, {"n", o.n}, {"q", io::to_json(q)}};
  } else if (o.plane == "q") {
    const Complex u = parse_complex(o.u, "--u");
    base = o.base.empty() ? Complex(1e-3) : parse_complex(o.base, "--base");
    a = cpn_q_matrix(o.n, u);
    meta = {{"plane", "q"}, {"n", o.n}, {"u", io::to_json(u)}};
  } else {
    throw UsageError("--plane must be u or q");
  }
  if (std::abs(base) == 0.0) throw DomainError("basepoint must be nonzero");
  const PlanePath loop = PlanePath::loop_around(0.0, base);
  const ComplexMatrix m = monodromy(a, loop, o.transport_tol);
  meta["basepoint"] = io::to_json(base);
  meta["path"] = io::to_json(loop);
  meta["monodromy"] = io::to_json(m);
  if (!o.csv.empty()) {
    if (o.column < 0 || o.column >= o.n) throw UsageError("--column out of range");
    std::vector<TrajectorySample> samples;
    TransportOptions topt;
    topt.tol = o.transport_tol;
    topt.trajectory = &samples;
    transport(a, loop, ComplexVector::Unit(o.n, o.column), topt);
    const auto path = output_path(o.csv);
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw UsageError("cannot write '" + path.string() + "'");
    csv << "t";
    for (int k = 0; k < o.n; ++k) csv << ",re_" << k << ",im_" << k;
    csv << '\n' << std::setprecision(17);
    for (const auto& s : samples) {
      csv << s.s;
      for (int k = 0; k < o.n; ++k) csv << ',' << s.value(k).real() << ',' << s.value(k).imag();
      csv << '\n';
    }
    meta["csv"] = path.string();
  }
  emit(o, meta);
  return kOk;
}

int cmd_psi_const(const Options& o) {
  const Complex u = parse_complex(o.u, "--u");
  emit(o, {{"n", o.n}, {"u", io::to_json(u)}, {"psi_const", io::to_json(psi_const(o.n, u))}});
  return kOk;
}

int cmd_stokes_rays(const Options& o) {
  const ExponentSet e = io::exponents_from_json(load(o.exponents_file));
  io::RaysResult r{stokes_directions(e), {}};
  for (double phi : r.decomposition.directions) r.crossings.push_back(crossing_permutation(e, phi));
  emit(o, io::to_json(r));
  return kOk;
}

int cmd_stokes_validate(const Options& o) {
  const auto [f, e] = io::filtration_from_json(load(o.filtration_file));
  const ValidationReport r = validate_filtration(f, e, o.tol);
  emit(o, io::to_json(r));
  return r.valid() ? kOk : kValidationFailure;
}

int cmd_stokes_generate(const Options& o) {
  const ExponentSet e = io::exponents_from_json(load(o.exponents_file));
  std::vector<int> dims = o.dims.empty() ? std::vector<int>(static_cast<std::size_t>(e.size()), 1)
                                         : parse_int_list(o.dims, "--dims");
  std::mt19937_64 rng(o.seed);
  emit(o, io::to_json(generic_filtration(e, dims, rng), e));
  return kOk;
}

int cmd_betti_check(const Options& o) {
  const DescentData d = io::descent_from_json(load(o.descent_file));
  const AcyclicityReport r = check_acyclicity(d, o.tol);
  emit(o, io::to_json(r));
  return r.acyclic ? kOk : kValidationFailure;
}

int cmd_betti_convert(const Options& o) {
  const Json input = load(o.input_file);
  if (o.direction == "b3-to-descent") {
    emit(o, io::to_json(biii_to_descent(io::biii_from_json(input))));
  } else if (o.direction == "descent-to-b3") {
    emit(o, io::to_json(descent_to_biii(io::descent_from_json(input), {}, o.tol)));
  } else {
    throw UsageError("--direction must be b3-to-descent or descent-to-b3");
  }
  return kOk;
}

int cmd_bv_axioms(const Options& o) {
  const AxiomReport r = check_bv_axioms(io::bv_from_json(load(o.algebra_file)), o.tol);
  emit(o, io::to_json(r));
  return r.ok() ? kOk : kValidationFailure;
}

int cmd_bv_degeneration(const Options& o) {
  emit(o, io::to_json(check_degeneration(io::bv_from_json(load(o.algebra_file)), o.nmax, o.tol)));
  return kOk;
}

int cmd_bv_phi_t(const Options& o) {
  if (o.arc_file.empty()) throw UsageError("bv phi-t needs --arc");
  const BVAlgebra a = io::bv_from_json(load(o.algebra_file));
  const FormalArc arc = io::arc_from_json(load(o.arc_file));
  PhiTOptions popt;
  if (o.lift_order > 0) popt.lift_order = o.lift_order;
  popt.require_u_free = o.require_u_free;
  emit(o, io::to_json(phi_T(a, arc, build_splitting(a, o.tol), popt)));
  return kOk;
}

int cmd_selftest(const Options& o) {
  verify_constants();
  acceptance::SuiteOptions so;
  so.seed = o.seed;
  so.fast = !o.full;
  int failed = 0;
  for (const auto& r : acceptance::run_all(so)) {
    std::cout << acceptance::format(r) << '\n';
    if (!r.pass) ++failed;
  }
  std::cout << (failed == 0 ? "selftest passed" : "selftest failed") << '\n';
  return failed == 0 ? kOk : kValidationFailure;
}

int cmd_fixtures(const Options& o) {
  const std::filesystem::path dir = output_path(o.out_dir);
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(o.seed);
  auto write = [&](const std::string& name, const Json& j) { io::write_file((dir / name).string(), j); };

  write("descent_trivial.json", io::to_json(DescentData{1, {ComplexMatrix(1, 0)}, {ComplexMatrix::Identity(1, 1)}}));
  ComplexMatrix l1(2, 1), l2(2, 1);
  l1 << 1.0, 0.0;
  l2 << 0.0, 1.0;
  ComplexMatrix t1 = ComplexMatrix::Identity(2, 2), t2 = ComplexMatrix::Identity(2, 2);
  t1(0, 1) = 1.0;
  t2(1, 0) = 2.0;
  write("descent_two_lines.json", io::to_json(DescentData{2, {l1, l2}, {t1, t2}}));
  write("descent_same_line.json", io::to_json(DescentData{2, {l1, l1}, {t1, t1}}));
  write("biii_random.json", io::to_json(gen::random_biii(rng)));

  const ExponentSet cube = gen::random_exponents(3, 3, rng);
  write("exponents_cube_roots.json", io::to_json(cube));
  write("filtration_cube_roots.json", io::to_json(generic_filtration(cube, {1, 1, 1}, rng), cube));
  write("path_unit_circle.json", io::to_json(PlanePath::circle(0.0, 1.0, 0.0, 1.0)));

  write("bv_grassmann_contraction.json", io::to_json(gen::grassmann_contraction_example()));
  write("bv_truncated_x3.json", io::to_json(truncated_polynomial(3)));
  FormalArc eps_x;
  eps_x.coeffs = {ComplexVector::Unit(3, 1), ComplexVector::Zero(3)};
  write("arc_eps_x.json", io::to_json(eps_x));
  const BVAlgebra degenerate = gen::degenerate_bv_family().front();
  write("bv_degenerate.json", io::to_json(degenerate));
  write("arc_degenerate.json", io::to_json(gen::harmonic_mc_arc(degenerate, build_splitting(degenerate), rng)));

  emit(o, {{"directory", dir.string()}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nchodge: quantum connections, Stokes data, gluing data and formal BV computations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-o,--output", o.output, "Write the JSON result to this file instead of stdout");
  app.add_option("--seed", o.seed, "Seed for randomized verbs")->capture_default_str();
  app.add_option("--tol", o.tol, "Relative tolerance for rank and subspace decisions")->capture_default_str();

  std::function<int(const Options&)> run;
  auto verb = [&](CLI::App* sub, int (*fn)(const Options&)) { sub->final_callback([&run, fn] { run = fn; }); };

  auto* gamma = app.add_subcommand("gamma-class", "Gamma-hat class of CP^{n-1} as a series in h");
  gamma->add_option("--n", o.n, "n (CP^{n-1})")->required();
  verb(gamma, cmd_gamma_class);

  auto* qconn = app.add_subcommand("qconn", "Quantum connection of CP^{n-1}");
  qconn->require_subcommand(1);
  auto* qbuild = qconn->add_subcommand("build", "u-connection at fixed q");
  qbuild->add_option("--n", o.n)->required();
  qbuild->add_option("--q", o.q, "RE,IM")->capture_default_str();
  verb(qbuild, cmd_qconn_build);
  auto* qmono = qconn->add_subcommand("monodromy", "Numerical monodromy around 0 in the u- or q-plane");
  qmono->add_option("--plane", o.plane, "u or q")->capture_default_str();
  qmono->add_option("--n", o.n)->required();
  qmono->add_option("--q", o.q, "fixed q for the u-plane loop")->capture_default_str();
  qmono->add_option("--u", o.u, "fixed u for the q-plane loop")->capture_default_str();
  qmono->add_option("--base", o.base, "loop basepoint (default -1 in the u-plane, 1e-3 in the q-plane)");
  qmono->add_option("--transport-tol", o.transport_tol)->capture_default_str();
  qmono->add_option("--csv", o.csv, "write the flat section of basis vector --column along the loop");
  qmono->add_option("--column", o.column)->capture_default_str();
  verb(qmono, cmd_qconn_monodromy);

  auto* psi = app.add_subcommand("psi-const", "u-independent flat section, compared with Gamma-hat");
  psi->add_option("--n", o.n)->required();
  psi->add_option("--u", o.u, "RE,IM")->capture_default_str();
  verb(psi, cmd_psi_const);

  auto* stokes = app.add_subcommand("stokes", "Stokes directions and filtered local systems");
  stokes->require_subcommand(1);
  auto* rays = stokes->add_subcommand("rays", "Stokes directions, arcs and crossing permutations");
  rays->add_option("--exponents", o.exponents_file, "FILE or inline JSON")->required();
  verb(rays, cmd_stokes_rays);
  auto* validate = stokes->add_subcommand("validate", "Check the gluing conditions of a filtration");
  validate->add_option("--filtration", o.filtration_file, "FILE or inline JSON")->required();
  verb(validate, cmd_stokes_validate);
  auto* generate = stokes->add_subcommand("generate", "Random filtration in general position");
  generate->add_option("--exponents", o.exponents_file, "FILE or inline JSON")->required();
  generate->add_option("--dims", o.dims, "graded dimensions, comma-separated (default all 1)");
  verb(generate, cmd_stokes_generate);

  auto* betti = app.add_subcommand("betti", "Gluing data and descent data");
  betti->require_subcommand(1);
  auto* check = betti->add_subcommand("check", "Mayer-Vietoris acyclicity of descent data");
  check->add_option("--descent", o.descent_file, "FILE or inline JSON")->required();
  verb(check, cmd_betti_check);
  auto* convert = betti->add_subcommand("convert", "Convert between B(iii) data and descent data");
  convert->add_option("--direction", o.direction, "b3-to-descent or descent-to-b3")->required();
  convert->add_option("--input", o.input_file, "FILE or inline JSON")->required();
  verb(convert, cmd_betti_convert);

  auto* bv = app.add_subcommand("bv", "Finite-dimensional BV algebras");
  bv->require_subcommand(1);
  auto* axioms = bv->add_subcommand("axioms", "Check the BV axioms");
  axioms->add_option("--algebra", o.algebra_file, "FILE or inline JSON")->required();
  verb(axioms, cmd_bv_axioms);
  auto* degen = bv->add_subcommand("degeneration", "dim H(A[u]/u^N) against N dim H(A)");
  degen->add_option("--algebra", o.algebra_file, "FILE or inline JSON")->required();
  degen->add_option("--nmax", o.nmax)->capture_default_str();
  verb(degen, cmd_bv_degeneration);
  auto* phit = bv->add_subcommand("phi-t", "Canonical coordinates of a formal arc");
  phit->add_option("--algebra", o.algebra_file, "FILE or inline JSON")->required();
  phit->add_option("--arc", o.arc_file, "FILE or inline JSON")->required();
  phit->add_option("--lift-order", o.lift_order, "positive u-powers in the lift (default min(K+2, 8))");
  phit->add_flag("--require-u-free", o.require_u_free, "fail when the u-dependence cannot be removed");
  verb(phit, cmd_bv_phi_t);

  auto* self = app.add_subcommand("selftest", "Constants oracles and the fast acceptance subset");
  self->add_flag("--full", o.full, "run the full acceptance instance counts");
  verb(self, cmd_selftest);

  auto* fixtures = app.add_subcommand("fixtures", "Write example input files");
  fixtures->add_option("--out", o.out_dir, "directory (relative to NCHODGE_OUTPUT_DIR when set)")->capture_default_str();
  verb(fixtures, cmd_fixtures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    return run(o);
  } catch (const io::JsonInputError& e) {
    std::cerr << Json{{"error", e.what()}, {"path", e.path()}}.dump() << '\n';
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump() << '\n';
    return kValidationFailure;
  }
}
