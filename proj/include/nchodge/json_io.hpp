#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nchodge/betti_gluing.hpp"
#include "nchodge/bv_formal.hpp"
#include "nchodge/errors.hpp"
#include "nchodge/flat_transport.hpp"
#include "nchodge/quantum_connection.hpp"
#include "nchodge/stokes.hpp"

namespace nchodge::io {

using Json = nlohmann::json;

/// Malformed JSON input; `path` is a JSON pointer to the offending value.
class JsonInputError : public UsageError {
 public:
  JsonInputError(const std::string& path, const std::string& message)
      : UsageError(message + " at " + (path.empty() ? "/" : path)), path_(path.empty() ? "/" : path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);  // array of [re, im]
Json to_json(const TruncatedSeries& s);
Json to_json(const MeromorphicConnection& c);
Json to_json(const PlanePath& p);
Json to_json(const ExponentSet& e);
/// Stokes directions, arcs and the crossing at every direction.
struct RaysResult {
  ArcDecomposition decomposition;
  std::vector<Crossing> crossings;
};

Json to_json(const ArcDecomposition& d);
Json to_json(const Crossing& c);
Json to_json(const RaysResult& r);
Json to_json(const MixedSeries& s);
Json to_json(const FilteredLocalSystem& f, const ExponentSet& e);
Json to_json(const ValidationReport& r);
Json to_json(const BiiiData& b);
Json to_json(const DescentData& d);
Json to_json(const Conversion& c);
Json to_json(const AcyclicityReport& r);
Json to_json(const BVAlgebra& a);
Json to_json(const FormalArc& arc);
Json to_json(const AxiomReport& r);
Json to_json(const std::vector<DegenerationEntry>& entries);
Json to_json(const PhiTResult& r);

// Readers take the JSON pointer of `j` for error messages.
Complex complex_from_json(const Json& j, const std::string& path = "");
ComplexMatrix matrix_from_json(const Json& j, const std::string& path = "");
ComplexVector vector_from_json(const Json& j, const std::string& path = "");
TruncatedSeries series_from_json(const Json& j, const std::string& path = "");
MeromorphicConnection connection_from_json(const Json& j, const std::string& path = "");
PlanePath path_from_json(const Json& j, const std::string& path = "");
/// Either an array of [re, im] or an object with an "exponents" array.
ExponentSet exponents_from_json(const Json& j, const std::string& path = "");
/// {"exponents", "rank", "monodromy", "arcs"}.
std::pair<FilteredLocalSystem, ExponentSet> filtration_from_json(const Json& j, const std::string& path = "");
ValidationReport report_from_json(const Json& j, const std::string& path = "");
BiiiData biii_from_json(const Json& j, const std::string& path = "");
DescentData descent_from_json(const Json& j, const std::string& path = "");
BVAlgebra bv_from_json(const Json& j, const std::string& path = "");
FormalArc arc_from_json(const Json& j, const std::string& path = "");
MixedSeries mixed_series_from_json(const Json& j, const std::string& path = "");
RaysResult rays_from_json(const Json& j, const std::string& path = "");
Conversion conversion_from_json(const Json& j, const std::string& path = "");
AcyclicityReport acyclicity_from_json(const Json& j, const std::string& path = "");
AxiomReport axioms_from_json(const Json& j, const std::string& path = "");
std::vector<DegenerationEntry> degeneration_from_json(const Json& j, const std::string& path = "");
PhiTResult phi_t_from_json(const Json& j, const std::string& path = "");

/// Reads and parses a file; parse errors become JsonInputError at "/".
Json read_file(const std::string& filename);
/// Writes `j` indented with a trailing LF.
void write_file(const std::string& filename, const Json& j);

}  // namespace nchodge::io
