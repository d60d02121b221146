#include "nchodge/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nchodge::io {

namespace {

std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw JsonInputError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw JsonInputError(child(path, key), "missing field");
  return *it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw JsonInputError(path, "expected an array");
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw JsonInputError(path, "expected a number");
  double x = j.get<double>();
  if (!std::isfinite(x)) throw JsonInputError(path, "non-finite number");
  return x;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw JsonInputError(path, "expected an integer");
  return j.get<int>();
}

int nonnegative(const Json& j, const std::string& path) {
  int v = integer(j, path);
  if (v < 0) throw JsonInputError(path, "expected a nonnegative integer");
  return v;
}

bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw JsonInputError(path, "expected a boolean");
  return j.get<bool>();
}

std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw JsonInputError(path, "expected a string");
  return j.get<std::string>();
}

/// Library constructors report bad input as UsageError; attach the JSON path.
template <typename F>
auto at_path(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const JsonInputError&) {
    throw;
  } catch (const UsageError& e) {
    throw JsonInputError(path, e.what());
  }
}

std::pair<int, int> pair_key(const std::string& key, const std::string& path) {
  auto comma = key.find(',');
  if (comma == std::string::npos) throw JsonInputError(path, "map key must be \"i,j\"");
  try {
    std::size_t used_i = 0, used_j = 0;
    int i = std::stoi(key.substr(0, comma), &used_i);
    int j = std::stoi(key.substr(comma + 1), &used_j);
    if (used_i != comma || used_j != key.size() - comma - 1) throw std::invalid_argument("trailing");
    return {i, j};
  } catch (const std::exception&) {
    throw JsonInputError(path, "map key must be \"i,j\"");
  }
}

std::vector<ComplexMatrix> matrices_from_json(const Json& j, const std::string& path) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(matrix_from_json(j[i], child(path, i)));
  return out;
}

Json matrices_to_json(const std::vector<ComplexMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(to_json(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const TruncatedSeries& s) {
  Json coeffs = Json::array();
  for (Complex c : s.coeffs()) coeffs.push_back(to_json(c));
  return {{"var", to_string(s.var())}, {"order", s.order()}, {"coeffs", coeffs}};
}

Json to_json(const MeromorphicConnection& c) {
  Json terms = Json::object();
  for (const auto& [k, m] : c.terms()) terms[std::to_string(k)] = to_json(m);
  Json out = {{"rank", c.rank()}, {"terms", terms}};
  if (c.meta()) out["meta"] = {{"n", c.meta()->n}, {"q", to_json(c.meta()->q)}};
  return out;
}

Json to_json(const PlanePath& p) {
  if (p.kind() == PlanePath::Kind::circle)
    return {{"kind", "circle"},
            {"center", to_json(p.center())},
            {"radius", p.radius()},
            {"start_angle", p.start_angle()},
            {"turns", p.turns()}};
  Json pts = Json::array();
  for (Complex z : p.waypoints()) pts.push_back(to_json(z));
  return {{"kind", "polyline"}, {"waypoints", pts}};
}

Json to_json(const ExponentSet& e) {
  Json out = Json::array();
  for (Complex c : e.values()) out.push_back(to_json(c));
  return out;
}

Json to_json(const ArcDecomposition& d) {
  Json arcs = Json::array();
  for (const auto& a : d.arcs) arcs.push_back({{"begin", a.begin}, {"end", a.end}, {"order", a.order}});
  return {{"directions", d.directions}, {"arcs", arcs}};
}

Json to_json(const Crossing& c) {
  Json blocks = Json::array();
  for (auto [lo, hi] : c.blocks) blocks.push_back(Json::array({lo, hi}));
  return {{"direction", c.direction},
          {"before", c.before},
          {"after", c.after},
          {"blocks", blocks},
          {"permutation", c.permutation}};
}

Json to_json(const RaysResult& r) {
  Json out = to_json(r.decomposition);
  Json crossings = Json::array();
  for (const auto& c : r.crossings) crossings.push_back(to_json(c));
  out["crossings"] = crossings;
  return out;
}

Json to_json(const FilteredLocalSystem& f, const ExponentSet& e) {
  Json arcs = Json::array();
  for (const auto& arc : f.arcs) arcs.push_back(matrices_to_json(arc));
  return {{"exponents", to_json(e)}, {"rank", f.rank}, {"monodromy", to_json(f.monodromy)}, {"arcs", arcs}};
}

Json to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues)
    issues.push_back({{"direction", i.direction}, {"condition", i.condition}, {"detail", i.detail}});
  return {{"valid", r.valid()}, {"issues", issues}};
}

Json to_json(const BiiiData& b) {
  Json pts = Json::array();
  for (Complex z : b.points()) pts.push_back(to_json(z));
  Json maps = Json::object();
  for (const auto& [key, m] : b.maps()) maps[std::to_string(key.first) + "," + std::to_string(key.second)] = to_json(m);
  return {{"points", pts}, {"dims", b.dims()}, {"maps", maps}};
}

Json to_json(const DescentData& d) {
  return {{"dim_u", d.dim_u}, {"psi", matrices_to_json(d.psi)}, {"t", matrices_to_json(d.t)}};
}

Json to_json(const Conversion& c) {
  return {{"biii", to_json(c.data)}, {"identifications", matrices_to_json(c.identifications)}};
}

Json to_json(const AcyclicityReport& r) {
  return {{"acyclic", r.acyclic}, {"via_complex", r.via_complex}, {"via_conditions", r.via_conditions}};
}

Json to_json(const BVAlgebra& a) {
  const int n = a.dim();
  Json mult = Json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Json terms = Json::array();
      for (int k = 0; k < n; ++k) {
        Complex c = a.left(i)(k, j);
        if (c != Complex{}) terms.push_back(Json::array({k, to_json(c)}));
      }
      mult.push_back(terms);
    }
  return {{"dim", n},
          {"parity", a.parities()},
          {"unit", a.unit()},
          {"mult", mult},
          {"d", to_json(a.d())},
          {"delta", to_json(a.delta())}};
}

Json to_json(const FormalArc& arc) {
  Json coeffs = Json::array();
  for (const auto& c : arc.coeffs) coeffs.push_back(to_json(c));
  return {{"coeffs", coeffs}};
}

Json to_json(const MixedSeries& s) {
  Json coeffs = Json::array();
  for (int k = 1; k <= s.k_order(); ++k) {
    Json row = Json::array();
    for (int j = s.u_min(); j <= s.u_max(); ++j) row.push_back(to_json(s.at(k, j)));
    coeffs.push_back(row);
  }
  return {{"dim", s.dim()}, {"k_order", s.k_order()}, {"u_min", s.u_min()}, {"u_max", s.u_max()}, {"coeffs", coeffs}};
}

Json to_json(const AxiomReport& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues) issues.push_back({{"condition", i.condition}, {"detail", i.detail}});
  return {{"ok", r.ok()}, {"issues", issues}};
}

Json to_json(const std::vector<DegenerationEntry>& entries) {
  Json rows = Json::array();
  bool all_free = true;
  for (const auto& e : entries) {
    rows.push_back({{"N", e.n}, {"dim", e.dim}, {"expected", e.expected}, {"free", e.free}});
    all_free = all_free && e.free;
  }
  return {{"free", all_free}, {"entries", rows}};
}

Json to_json(const PhiTResult& r) {
  Json classes = Json::array();
  for (const auto& c : r.classes) classes.push_back(to_json(c));
  return {{"classes", classes},
          {"constraint_residual", r.constraint_residual},
          {"u_residual", r.u_residual},
          {"u_residual_by_order", r.u_residual_by_order},
          {"lift", to_json(r.lift)}};
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw JsonInputError(path, "expected [re, im]");
  return {number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  int rows = nonnegative(field(j, "rows", path), child(path, "rows"));
  int cols = nonnegative(field(j, "cols", path), child(path, "cols"));
  const std::string epath = child(path, "entries");
  const Json& entries = array(field(j, "entries", path), epath);
  if (entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw JsonInputError(epath, "expected rows * cols entries");
  ComplexMatrix m(rows, cols);
  std::size_t idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++idx) m(r, c) = complex_from_json(entries[idx], child(epath, idx));
  return m;
}

ComplexVector vector_from_json(const Json& j, const std::string& path) {
  array(j, path);
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], child(path, i));
  return v;
}

TruncatedSeries series_from_json(const Json& j, const std::string& path) {
  const std::string var_name = string(field(j, "var", path), child(path, "var"));
  Var var = at_path(child(path, "var"), [&] { return var_from_string(var_name); });
  int order = integer(field(j, "order", path), child(path, "order"));
  const std::string cpath = child(path, "coeffs");
  const Json& cj = array(field(j, "coeffs", path), cpath);
  if (order < 1 || cj.size() != static_cast<std::size_t>(order))
    throw JsonInputError(cpath, "expected exactly `order` coefficients");
  std::vector<Complex> coeffs;
  for (std::size_t i = 0; i < cj.size(); ++i) coeffs.push_back(complex_from_json(cj[i], child(cpath, i)));
  return TruncatedSeries(var, std::move(coeffs));
}

MeromorphicConnection connection_from_json(const Json& j, const std::string& path) {
  int rank = integer(field(j, "rank", path), child(path, "rank"));
  const std::string tpath = child(path, "terms");
  const Json& tj = field(j, "terms", path);
  if (!tj.is_object()) throw JsonInputError(tpath, "expected an object");
  std::map<int, ComplexMatrix> terms;
  for (const auto& [key, value] : tj.items()) {
    const std::string kpath = child(tpath, key);
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw JsonInputError(kpath, "term key must be an integer power of u");
    }
    terms[k] = matrix_from_json(value, kpath);
  }
  std::optional<MeromorphicConnection::Meta> meta;
  if (j.contains("meta")) {
    const std::string mpath = child(path, "meta");
    const Json& mj = j["meta"];
    meta = MeromorphicConnection::Meta{integer(field(mj, "n", mpath), child(mpath, "n")),
                                       complex_from_json(field(mj, "q", mpath), child(mpath, "q"))};
  }
  return at_path(path, [&] { return MeromorphicConnection(rank, std::move(terms), meta); });
}

PlanePath path_from_json(const Json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<Complex> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(complex_from_json(j[i], child(path, i)));
    return at_path(path, [&] { return PlanePath::polyline(std::move(pts)); });
  }
  const std::string kind = string(field(j, "kind", path), child(path, "kind"));
  if (kind == "circle") {
    Complex center = complex_from_json(field(j, "center", path), child(path, "center"));
    double radius = number(field(j, "radius", path), child(path, "radius"));
    double turns = number(field(j, "turns", path), child(path, "turns"));
    double start = j.contains("start_angle") ? number(j["start_angle"], child(path, "start_angle")) : 0.0;
    return at_path(path, [&] { return PlanePath::circle(center, radius, start, turns); });
  }
  if (kind == "polyline") return path_from_json(field(j, "waypoints", path), child(path, "waypoints"));
  throw JsonInputError(child(path, "kind"), "unknown path kind '" + kind + "'");
}

ExponentSet exponents_from_json(const Json& j, const std::string& path) {
  if (j.is_object()) return exponents_from_json(field(j, "exponents", path), child(path, "exponents"));
  array(j, path);
  std::vector<Complex> values;
  for (std::size_t i = 0; i < j.size(); ++i) values.push_back(complex_from_json(j[i], child(path, i)));
  return at_path(path, [&] { return ExponentSet(std::move(values)); });
}

std::pair<FilteredLocalSystem, ExponentSet> filtration_from_json(const Json& j, const std::string& path) {
  ExponentSet e = exponents_from_json(field(j, "exponents", path), child(path, "exponents"));
  FilteredLocalSystem f;
  f.rank = nonnegative(field(j, "rank", path), child(path, "rank"));
  f.monodromy = matrix_from_json(field(j, "monodromy", path), child(path, "monodromy"));
  const std::string apath = child(path, "arcs");
  const Json& aj = array(field(j, "arcs", path), apath);
  for (std::size_t a = 0; a < aj.size(); ++a) f.arcs.push_back(matrices_from_json(aj[a], child(apath, a)));
  at_path(path, [&] { return label_dimensions(f, e); });
  return {std::move(f), std::move(e)};
}

ValidationReport report_from_json(const Json& j, const std::string& path) {
  ValidationReport r;
  const std::string ipath = child(path, "issues");
  const Json& ij = array(field(j, "issues", path), ipath);
  for (std::size_t i = 0; i < ij.size(); ++i) {
    const std::string p = child(ipath, i);
    r.issues.push_back({number(field(ij[i], "direction", p), child(p, "direction")),
                        string(field(ij[i], "condition", p), child(p, "condition")),
                        string(field(ij[i], "detail", p), child(p, "detail"))});
  }
  return r;
}

BiiiData biii_from_json(const Json& j, const std::string& path) {
  const std::string ppath = child(path, "points");
  const Json& pj = array(field(j, "points", path), ppath);
  std::vector<Complex> points;
  for (std::size_t i = 0; i < pj.size(); ++i) points.push_back(complex_from_json(pj[i], child(ppath, i)));
  const std::string dpath = child(path, "dims");
  const Json& dj = array(field(j, "dims", path), dpath);
  std::vector<int> dims;
  for (std::size_t i = 0; i < dj.size(); ++i) dims.push_back(nonnegative(dj[i], child(dpath, i)));
  const std::string mpath = child(path, "maps");
  const Json& mj = field(j, "maps", path);
  if (!mj.is_object()) throw JsonInputError(mpath, "expected an object");
  std::map<std::pair<int, int>, ComplexMatrix> maps;
  for (const auto& [key, value] : mj.items()) {
    const std::string kpath = child(mpath, key);
    maps[pair_key(key, kpath)] = matrix_from_json(value, kpath);
  }
  return at_path(path, [&] { return BiiiData(std::move(points), std::move(dims), std::move(maps)); });
}

DescentData descent_from_json(const Json& j, const std::string& path) {
  DescentData d;
  d.dim_u = nonnegative(field(j, "dim_u", path), child(path, "dim_u"));
  d.psi = matrices_from_json(field(j, "psi", path), child(path, "psi"));
  d.t = matrices_from_json(field(j, "t", path), child(path, "t"));
  at_path(path, [&] {
    d.validate();
    return 0;
  });
  return d;
}

BVAlgebra bv_from_json(const Json& j, const std::string& path) {
  int n = integer(field(j, "dim", path), child(path, "dim"));
  if (n < 1) throw JsonInputError(child(path, "dim"), "dimension must be positive");
  const std::string ppath = child(path, "parity");
  const Json& pj = array(field(j, "parity", path), ppath);
  if (pj.size() != static_cast<std::size_t>(n)) throw JsonInputError(ppath, "expected `dim` parities");
  std::vector<int> parity;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    int p = integer(pj[i], child(ppath, i));
    if (p != 0 && p != 1) throw JsonInputError(child(ppath, i), "parity must be 0 or 1");
    parity.push_back(p);
  }
  int unit = integer(field(j, "unit", path), child(path, "unit"));
  if (unit < 0 || unit >= n) throw JsonInputError(child(path, "unit"), "unit index out of range");
  const std::string mpath = child(path, "mult");
  const Json& mj = array(field(j, "mult", path), mpath);
  if (mj.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw JsonInputError(mpath, "expected dim * dim entries indexed by i * dim + j");
  std::vector<ComplexMatrix> left(static_cast<std::size_t>(n), ComplexMatrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      const std::size_t idx = static_cast<std::size_t>(i * n + jj);
      const std::string epath = child(mpath, idx);
      const Json& terms = array(mj[idx], epath);
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tpath = child(epath, t);
        if (!terms[t].is_array() || terms[t].size() != 2) throw JsonInputError(tpath, "expected [k, [re, im]]");
        int k = integer(terms[t][0], child(tpath, 0));
        if (k < 0 || k >= n) throw JsonInputError(child(tpath, 0), "basis index out of range");
        left[static_cast<std::size_t>(i)](k, jj) += complex_from_json(terms[t][1], child(tpath, 1));
      }
    }
  ComplexMatrix d = matrix_from_json(field(j, "d", path), child(path, "d"));
  ComplexMatrix delta = matrix_from_json(field(j, "delta", path), child(path, "delta"));
  return at_path(path, [&] { return BVAlgebra(std::move(parity), unit, std::move(left), std::move(d), std::move(delta)); });
}

FormalArc arc_from_json(const Json& j, const std::string& path) {
  const std::string cpath = child(path, "coeffs");
  const Json& cj = array(field(j, "coeffs", path), cpath);
  if (cj.empty()) throw JsonInputError(cpath, "an arc needs at least one coefficient");
  FormalArc arc;
  for (std::size_t k = 0; k < cj.size(); ++k) arc.coeffs.push_back(vector_from_json(cj[k], child(cpath, k)));
  return arc;
}

MixedSeries mixed_series_from_json(const Json& j, const std::string& path) {
  int dim = integer(field(j, "dim", path), child(path, "dim"));
  int k_order = integer(field(j, "k_order", path), child(path, "k_order"));
  int u_min = integer(field(j, "u_min", path), child(path, "u_min"));
  int u_max = integer(field(j, "u_max", path), child(path, "u_max"));
  MixedSeries s = at_path(path, [&] { return MixedSeries(dim, k_order, u_min, u_max); });
  const std::string cpath = child(path, "coeffs");
  const Json& cj = array(field(j, "coeffs", path), cpath);
  if (cj.size() != static_cast<std::size_t>(k_order)) throw JsonInputError(cpath, "expected k_order rows");
  for (int k = 1; k <= k_order; ++k) {
    const std::string rpath = child(cpath, static_cast<std::size_t>(k - 1));
    const Json& row = array(cj[static_cast<std::size_t>(k - 1)], rpath);
    if (row.size() != static_cast<std::size_t>(u_max - u_min + 1))
      throw JsonInputError(rpath, "expected one vector per u-power");
    for (int jj = u_min; jj <= u_max; ++jj) {
      const std::size_t idx = static_cast<std::size_t>(jj - u_min);
      ComplexVector v = vector_from_json(row[idx], child(rpath, idx));
      if (v.size() != dim) throw JsonInputError(child(rpath, idx), "vector length must equal dim");
      s.at(k, jj) = v;
    }
  }
  return s;
}

RaysResult rays_from_json(const Json& j, const std::string& path) {
  RaysResult r;
  const std::string dpath = child(path, "directions");
  const Json& dj = array(field(j, "directions", path), dpath);
  for (std::size_t i = 0; i < dj.size(); ++i) r.decomposition.directions.push_back(number(dj[i], child(dpath, i)));
  const std::string apath = child(path, "arcs");
  const Json& aj = array(field(j, "arcs", path), apath);
  auto ints = [](const Json& v, const std::string& p) {
    std::vector<int> out;
    for (std::size_t i = 0; i < array(v, p).size(); ++i) out.push_back(integer(v[i], child(p, i)));
    return out;
  };
  for (std::size_t a = 0; a < aj.size(); ++a) {
    const std::string p = child(apath, a);
    r.decomposition.arcs.push_back({number(field(aj[a], "begin", p), child(p, "begin")),
                                    number(field(aj[a], "end", p), child(p, "end")),
                                    ints(field(aj[a], "order", p), child(p, "order"))});
  }
  const std::string cpath = child(path, "crossings");
  const Json& cj = array(field(j, "crossings", path), cpath);
  for (std::size_t c = 0; c < cj.size(); ++c) {
    const std::string p = child(cpath, c);
    Crossing x;
    x.direction = number(field(cj[c], "direction", p), child(p, "direction"));
    x.before = ints(field(cj[c], "before", p), child(p, "before"));
    x.after = ints(field(cj[c], "after", p), child(p, "after"));
    x.permutation = ints(field(cj[c], "permutation", p), child(p, "permutation"));
    const std::string bpath = child(p, "blocks");
    const Json& bj = array(field(cj[c], "blocks", p), bpath);
    for (std::size_t b = 0; b < bj.size(); ++b) {
      auto pair = ints(bj[b], child(bpath, b));
      if (pair.size() != 2) throw JsonInputError(child(bpath, b), "expected [lo, hi]");
      x.blocks.emplace_back(pair[0], pair[1]);
    }
    r.crossings.push_back(std::move(x));
  }
  return r;
}

Conversion conversion_from_json(const Json& j, const std::string& path) {
  return Conversion{biii_from_json(field(j, "biii", path), child(path, "biii")),
                    matrices_from_json(field(j, "identifications", path), child(path, "identifications"))};
}

AcyclicityReport acyclicity_from_json(const Json& j, const std::string& path) {
  return {boolean(field(j, "acyclic", path), child(path, "acyclic")),
          boolean(field(j, "via_complex", path), child(path, "via_complex")),
          boolean(field(j, "via_conditions", path), child(path, "via_conditions"))};
}

AxiomReport axioms_from_json(const Json& j, const std::string& path) {
  AxiomReport r;
  const std::string ipath = child(path, "issues");
  const Json& ij = array(field(j, "issues", path), ipath);
  for (std::size_t i = 0; i < ij.size(); ++i) {
    const std::string p = child(ipath, i);
    r.issues.push_back({string(field(ij[i], "condition", p), child(p, "condition")),
                        string(field(ij[i], "detail", p), child(p, "detail"))});
  }
  return r;
}

std::vector<DegenerationEntry> degeneration_from_json(const Json& j, const std::string& path) {
  std::vector<DegenerationEntry> out;
  const std::string epath = child(path, "entries");
  const Json& ej = array(field(j, "entries", path), epath);
  for (std::size_t i = 0; i < ej.size(); ++i) {
    const std::string p = child(epath, i);
    out.push_back({integer(field(ej[i], "N", p), child(p, "N")), integer(field(ej[i], "dim", p), child(p, "dim")),
                   integer(field(ej[i], "expected", p), child(p, "expected")),
                   boolean(field(ej[i], "free", p), child(p, "free"))});
  }
  return out;
}

PhiTResult phi_t_from_json(const Json& j, const std::string& path) {
  PhiTResult r{{}, mixed_series_from_json(field(j, "lift", path), child(path, "lift")), 0.0, 0.0, {}};
  const std::string cpath = child(path, "classes");
  const Json& cj = array(field(j, "classes", path), cpath);
  for (std::size_t k = 0; k < cj.size(); ++k) r.classes.push_back(vector_from_json(cj[k], child(cpath, k)));
  r.constraint_residual = number(field(j, "constraint_residual", path), child(path, "constraint_residual"));
  r.u_residual = number(field(j, "u_residual", path), child(path, "u_residual"));
  const std::string upath = child(path, "u_residual_by_order");
  const Json& uj = array(field(j, "u_residual_by_order", path), upath);
  for (std::size_t k = 0; k < uj.size(); ++k) r.u_residual_by_order.push_back(number(uj[k], child(upath, k)));
  return r;
}

Json read_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw JsonInputError("", "cannot open '" + filename + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw JsonInputError("", std::string("invalid JSON in '") + filename + "': " + e.what());
  }
}

void write_file(const std::string& filename, const Json& j) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + filename + "'");
  out << j.dump(2) << '\n';
}

}  // namespace nchodge::io
