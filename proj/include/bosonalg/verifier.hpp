#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosonalg/realizations.hpp"

namespace bosonalg {

// One binding of every symbol the instances use; the deformation pair is set
// consistently and the free couplings get fixed generic values.
struct OracleBinding {
  std::string label;
  Bindings values;
};

std::vector<OracleBinding> default_oracle_bindings();
OracleBinding oracle_binding(double gamma, double mu);

struct NumericSample {
  std::string binding;
  std::string sector;
  std::size_t columns = 0;
  double residual_norm = 0.0;  // matrix-arithmetic residual on safe columns
  double symbolic_norm = 0.0;  // represented symbolic residual on the same columns
  double difference = 0.0;
  double scale = 0.0;
  std::size_t condition_states = 0;  // conditional relations only
  bool agrees = false;
};

struct RelationResult {
  std::string instance;
  std::string id;
  std::string title;
  std::string kind;   // equation | pt | matrix
  std::string claim;  // zero | nonzero
  bool exact_zero = false;
  std::string residual;
  std::size_t residual_terms = 0;
  std::vector<std::string> conditions;
  std::vector<NumericSample> numeric;
  bool oracle_ok = true;
  // confirmed | finding | confirmed on condition states | finding on condition states | untestable
  std::string verdict;
  std::string note;
  double seconds = 0.0;

  std::string status() const { return exact_zero ? "exact-zero" : "nonzero-residual"; }
};

struct VerifyOptions {
  std::vector<OracleBinding> bindings = default_oracle_bindings();
  // The box plan is used at bound and bound - sector_step.
  int sectors = 2;
  long sector_step = 1;
  bool numeric = true;
  // Residual texts longer than this are cut in the report.
  std::size_t residual_chars = 4000;
};

RelationResult check_relation(const AlgebraInstance& inst, const RelationSpec& r, const VerifyOptions& o = {});

struct SuiteReport {
  std::string suite;
  std::map<std::string, std::string> params;
  std::vector<RelationResult> results;

  bool oracle_ok() const;
  std::size_t count(const std::string& verdict) const;
  const RelationResult* find(const std::string& id) const;
  nlohmann::ordered_json json(bool timing = true) const;
};

std::vector<std::string> suite_names();
// Instances a suite runs, in order; pauli runs no instance.
std::vector<AlgebraInstance> suite_instances(const std::string& suite, const InstanceOptions& o = {});
SuiteReport run_suite(const std::string& suite, const InstanceOptions& o = {}, const VerifyOptions& v = {});
SuiteReport run_instance(const AlgebraInstance& inst, const VerifyOptions& v = {});

// The 2x2 matrix checks: structure constants, traces, limits, biorthogonality.
std::vector<RelationResult> pauli_checks(const VerifyOptions& v = {});

// Structure constants f[a][b][c] of the deformed Pauli basis as a table.
nlohmann::ordered_json structure_table(const KillingResult& k);

std::string options_description(const InstanceOptions& o);

// Generators (canonical text), definitions, relations, casimirs and parameters.
nlohmann::ordered_json instance_json(const AlgebraInstance& inst);

// Structure constants, Killing metric and its signature at the given gamma for
// su_g(2) in the ladder basis (J0, Jp, Jm), the basis (J1, J2, J0) and the
// deformed Pauli basis.
nlohmann::ordered_json killing_report(int p, double gamma);

}  // namespace bosonalg
