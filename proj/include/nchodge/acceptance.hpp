#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nchodge::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  /// Reduced instance counts for `selftest`; tolerances are unchanged.
  bool fast = false;
};

CriterionResult gamma_class_reproduction(const SuiteOptions& o);
CriterionResult u_independence(const SuiteOptions& o);
CriterionResult conjugation_identity(const SuiteOptions& o);
CriterionResult q_monodromy(const SuiteOptions& o);
CriterionResult u_monodromy(const SuiteOptions& o);
CriterionResult mayer_vietoris(const SuiteOptions& o);
CriterionResult round_trip(const SuiteOptions& o);
CriterionResult stokes_structure(const SuiteOptions& o);
CriterionResult bv_degeneration(const SuiteOptions& o);
CriterionResult constants_self_check(const SuiteOptions& o);

std::vector<CriterionResult> run_all(const SuiteOptions& o);

/// "PASS [id] name: detail (t s)" or "FAIL ...".
std::string format(const CriterionResult& r);

}  // namespace nchodge::acceptance
