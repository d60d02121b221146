#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "nchodge/generators.hpp"
#include "nchodge/json_io.hpp"

using namespace nchodge;
using io::Json;

namespace {

std::string error_path(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::JsonInputError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("scalars, matrices and series round trip") {
  std::mt19937_64 rng(139);
  const Complex z(1.5, -2.25);
  CHECK(io::complex_from_json(io::to_json(z)) == z);
  CHECK(io::complex_from_json(Json(3.0)) == Complex(3.0));
  const ComplexMatrix m = gen::random_matrix(3, 2, rng);
  CHECK(io::matrix_from_json(io::to_json(m)) == m);
  CHECK(io::matrix_from_json(io::to_json(ComplexMatrix(2, 0))).cols() == 0);
  const ComplexVector v = gen::random_vector(4, rng);
  CHECK(io::vector_from_json(io::to_json(v)) == v);
  const TruncatedSeries s(Var::h, std::vector<Complex>{1.0, Complex(0.0, 2.0), -3.0});
  const auto s2 = io::series_from_json(io::to_json(s));
  CHECK(s2.var() == Var::h);
  CHECK(s2.order() == 3);
  CHECK(s2[1] == Complex(0.0, 2.0));
}

TEST_CASE("connections, paths and exponents round trip") {
  const auto c = build_cpn_u_connection(3, Complex(0.5, 0.1));
  const auto c2 = io::connection_from_json(io::to_json(c));
  CHECK(c2.rank() == 3);
  CHECK(c2.term(-2) == c.term(-2));
  CHECK(c2.term(-1) == c.term(-1));
  REQUIRE(c2.meta().has_value());
  CHECK(c2.meta()->q == Complex(0.5, 0.1));

  const auto circle = PlanePath::circle(Complex(1.0, 1.0), 2.0, 0.5, -1.0);
  const auto circle2 = io::path_from_json(io::to_json(circle));
  CHECK(circle2.kind() == PlanePath::Kind::circle);
  CHECK(circle2.turns() == -1.0);
  CHECK(std::abs(circle2.end() - circle.end()) < 1e-15);
  const auto poly = PlanePath::polyline({0.0, 1.0, Complex(1.0, 1.0)});
  CHECK(io::path_from_json(io::to_json(poly)).waypoints() == poly.waypoints());
  CHECK(io::path_from_json(Json::parse("[[0,0],[1,0]]")).kind() == PlanePath::Kind::polyline);

  const ExponentSet e({2.0, -2.0, Complex(0.0, 1.0)});
  CHECK(io::exponents_from_json(io::to_json(e)).values() == e.values());
  CHECK(io::exponents_from_json(Json{{"exponents", io::to_json(e)}}).values() == e.values());
}

TEST_CASE("Stokes data round trip") {
  std::mt19937_64 rng(149);
  const ExponentSet e = gen::random_exponents(3, 3, rng);
  const auto f = generic_filtration(e, {1, 2, 1}, rng);
  const auto [f2, e2] = io::filtration_from_json(io::to_json(f, e));
  CHECK(e2.values() == e.values());
  CHECK(f2.rank == f.rank);
  CHECK(f2.monodromy == f.monodromy);
  REQUIRE(f2.arcs.size() == f.arcs.size());
  for (std::size_t a = 0; a < f.arcs.size(); ++a) CHECK(f2.arcs[a] == f.arcs[a]);
  CHECK(validate_filtration(f2, e2).valid());

  io::RaysResult rays{stokes_directions(e), {}};
  for (double phi : rays.decomposition.directions) rays.crossings.push_back(crossing_permutation(e, phi));
  const auto rays2 = io::rays_from_json(io::to_json(rays));
  CHECK(rays2.decomposition.directions == rays.decomposition.directions);
  REQUIRE(rays2.crossings.size() == rays.crossings.size());
  CHECK(rays2.crossings[0].permutation == rays.crossings[0].permutation);
  CHECK(rays2.crossings[0].blocks == rays.crossings[0].blocks);
  CHECK(rays2.decomposition.arcs.back().order == rays.decomposition.arcs.back().order);

  ValidationReport r{{{1.0, "opposed", "steps 1 and 1 meet"}}};
  const auto r2 = io::report_from_json(io::to_json(r));
  REQUIRE(r2.issues.size() == 1);
  CHECK(r2.issues[0].condition == "opposed");
}

TEST_CASE("gluing data round trip") {
  std::mt19937_64 rng(151);
  const BiiiData b = gen::random_biii(rng);
  const BiiiData b2 = io::biii_from_json(io::to_json(b));
  CHECK(b2.points() == b.points());
  CHECK(b2.dims() == b.dims());
  CHECK(b2.assembled() == b.assembled());
  const DescentData d = biii_to_descent(b);
  const DescentData d2 = io::descent_from_json(io::to_json(d));
  CHECK(d2.dim_u == d.dim_u);
  for (int i = 0; i < d.size(); ++i) CHECK(d2.t[static_cast<std::size_t>(i)] == d.t[static_cast<std::size_t>(i)]);
  const Conversion c = descent_to_biii(d, b.points());
  const Conversion c2 = io::conversion_from_json(io::to_json(c));
  CHECK(c2.data.assembled() == c.data.assembled());
  CHECK(c2.identifications.size() == c.identifications.size());
  const auto a = io::acyclicity_from_json(io::to_json(AcyclicityReport{true, true, false}));
  CHECK(a.acyclic);
  CHECK_FALSE(a.via_conditions);
  CHECK(io::to_json(b)["maps"].contains("0,0"));
}

TEST_CASE("BV data round trip") {
  const BVAlgebra a = gen::degenerate_bv_family().front();
  const BVAlgebra a2 = io::bv_from_json(io::to_json(a));
  CHECK(a2.parities() == a.parities());
  CHECK(a2.unit() == a.unit());
  CHECK(a2.d() == a.d());
  CHECK(a2.delta() == a.delta());
  for (int i = 0; i < a.dim(); ++i) CHECK(a2.left(i) == a.left(i));

  std::mt19937_64 rng(157);
  const Splitting s = build_splitting(a);
  const FormalArc arc = gen::harmonic_mc_arc(a, s, rng);
  const FormalArc arc2 = io::arc_from_json(io::to_json(arc));
  CHECK(arc2.coeffs == arc.coeffs);

  const PhiTResult r = phi_T(a, arc, s);
  const PhiTResult r2 = io::phi_t_from_json(io::to_json(r));
  CHECK(r2.classes == r.classes);
  CHECK(r2.u_residual == r.u_residual);
  CHECK(r2.lift.u_min() == r.lift.u_min());
  CHECK(r2.lift.get(2, 1) == r.lift.get(2, 1));

  const auto deg = check_degeneration(gen::grassmann_contraction_example(), 3);
  const auto deg2 = io::degeneration_from_json(io::to_json(deg));
  REQUIRE(deg2.size() == 3);
  CHECK(deg2[1].dim == 6);
  CHECK_FALSE(deg2[1].free);
  CHECK_FALSE(io::to_json(deg)["free"].get<bool>());

  AxiomReport ax{{{"jacobi", "e1, e2, e3"}}};
  CHECK(io::axioms_from_json(io::to_json(ax)).issues[0].condition == "jacobi");
}

TEST_CASE("malformed input reports a JSON pointer") {
  CHECK(error_path([] { io::complex_from_json(Json::parse("[1]")); }) == "/");
  CHECK(error_path([] { io::matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"entries":[[1,0]]})")); }) == "/entries");
  CHECK(error_path([] { io::matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"entries":[["a",0]]})")); }) == "/entries/0/0");
  CHECK(error_path([] { io::descent_from_json(Json::parse(R"({"dim_u":1,"psi":[]})")); }) == "/t");
  CHECK(error_path([] { io::biii_from_json(Json::parse(R"({"points":[[0,0]],"dims":[1],"maps":{"x":{"rows":1,"cols":1,"entries":[[1,0]]}}})")); }) == "/maps/x");
  CHECK(error_path([] { io::bv_from_json(Json::parse(R"({"dim":2})")); }) != "<no error>");
  CHECK(error_path([] { io::exponents_from_json(Json::parse("[[1,0],[1,0]]")); }) == "/");
  CHECK(error_path([] { io::series_from_json(Json::parse(R"({"var":"z","order":1,"coeffs":[[1,0]]})")); }) == "/var");

  const auto bad = std::filesystem::temp_directory_path() / "nchodge_bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK(error_path([&] { io::read_file(bad.string()); }) == "/");
  CHECK(error_path([] { io::read_file("/nonexistent/nchodge.json"); }) == "/");
  std::filesystem::remove(bad);
}

TEST_CASE("files end with a single line feed") {
  const auto path = std::filesystem::temp_directory_path() / "nchodge_out.json";
  io::write_file(path.string(), Json{{"a", 1}});
  std::ifstream in(path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  CHECK(io::read_file(path.string())["a"] == 1);
  std::filesystem::remove(path);
}
