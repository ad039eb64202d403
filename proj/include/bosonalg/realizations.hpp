#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosonalg/fock.hpp"
#include "bosonalg/formula.hpp"
#include "bosonalg/operator.hpp"

namespace bosonalg {

// A deformation parameter and its partner w = sqrt(1 - g^2), either symbolic
// (gamma/w0, mu/wmu) or specialised (-gamma, rationals, 0/1).
struct Deformation {
  ScalarExpr g;
  ScalarExpr w;
  std::string name;

  static Deformation gamma();
  static Deformation mu();
  static Deformation negated(const Deformation& d);
  static Deformation exact(const mpq_class& g, const mpq_class& w);
  static Deformation undeformed() { return exact(0, 1); }
};

using Vec2 = std::array<ScalarExpr, 2>;
using Mat2 = std::array<std::array<ScalarExpr, 2>, 2>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
Mat2 mat_add(const Mat2& a, const Mat2& b);
Mat2 mat_sub(const Mat2& a, const Mat2& b);
Mat2 mat_scale(const ScalarExpr& c, const Mat2& a);
Mat2 mat_adjoint(const Mat2& a);
Mat2 mat_comm(const Mat2& a, const Mat2& b);
ScalarExpr mat_trace(const Mat2& a);
bool mat_is_zero(const Mat2& a);
std::string mat_str(const Mat2& a);
Mat2 pauli(int m);  // standard Pauli matrix, m = 1..3

// T = cos(θ/2) 1 + sin(θ/2)(cos(φ/2) X - sin(φ/2) Y), chi_j = T u_j,
// phi_j = w0 (T^-1)' u_j with u_j = (1, ±1)/sqrt(2).
struct BiorthogonalSystem {
  Mat2 T;
  ScalarExpr det;
  std::array<Vec2, 2> u;  // unnormalised (1, ±1)
  std::array<Vec2, 2> chi;
  std::array<Vec2, 2> phi;
  // <phi_j|chi_k> with the 1/2 of the unit normalisation included
  ScalarExpr pairing(int j, int k) const;
};

BiorthogonalSystem biorthogonal_system();

// c^(m)_{jk}
int structure_sign(int m, int j, int k);

// sigma_m = (i^(m+1)/2) c^(m)_{jk} |u_j><u_k|
std::array<Mat2, 3> pauli_from_dyads();
// sigma_m^g from the biorthogonal dyads at phi = pi
std::array<Mat2, 3> deformed_pauli(const Deformation& d);
// tau_m = i^(1 + 3 delta_{m3}) sigma_m^g
std::array<Mat2, 3> deformed_tau(const Deformation& d);

// Numeric construction of sigma_m^g from theta = asin(g); used as an oracle.
std::array<Eigen::Matrix2cd, 3> deformed_pauli_numeric(double g);

struct Definition {
  std::string label;
  std::optional<OperatorExpr> leaf;
  std::optional<Formula> formula;
  OperatorExpr value;
  std::string description;
};

// A relation lhs = rhs (or Pi_T^j X = X) together with what is claimed about it.
struct RelationSpec {
  enum class Kind { equation, pt_invariance };
  std::string id;
  std::string title;
  Kind kind = Kind::equation;
  Formula lhs;
  Formula rhs;
  std::string pt_label;
  std::optional<int> pt_mode;  // 0-based; empty = global
  bool claim_zero = true;
  // Checked on states annihilated by every condition.
  std::vector<Formula> conditions;
  std::string note;
};

struct CasimirSpec {
  std::string label;
  std::vector<std::string> centralizes;
};

struct BoxPlan {
  std::vector<std::vector<long>> weights;
  long bound = 6;
};

class AlgebraInstance {
 public:
  AlgebraInstance() = default;
  AlgebraInstance(std::string name, int modes);

  const std::string& name() const { return name_; }
  int modes() const { return modes_; }

  void leaf(const std::string& label, OperatorExpr op, std::string description = {});
  void define(const std::string& label, const Formula& f, std::string description = {});
  void add_generator(const std::string& label) { generators_.push_back(label); }
  void add_casimir(const std::string& label, std::vector<std::string> centralizes,
                   const std::string& id_prefix, std::vector<Formula> conditions = {});
  void add_relation(RelationSpec r);
  void set_parameter(const std::string& key, const std::string& value) { parameters_[key] = value; }
  void set_box(BoxPlan b) { box_ = std::move(b); }

  bool has(const std::string& label) const { return index_.count(label) > 0; }
  const Definition& definition(const std::string& label) const;
  const OperatorExpr& op(const std::string& label) const { return definition(label).value; }
  const std::vector<Definition>& definitions() const { return defs_; }
  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<RelationSpec>& relations() const { return relations_; }
  std::vector<RelationSpec>& relations() { return relations_; }
  const std::vector<CasimirSpec>& casimirs() const { return casimirs_; }
  const std::map<std::string, std::string>& parameters() const { return parameters_; }
  const BoxPlan& box() const { return box_; }

  OperatorExpr evaluate(const Formula& f) const;
  LabelResolver resolver() const;
  DefinitionLookup lookup() const;

  // Appends the labels, relations and casimirs of another instance on the same modes.
  void absorb(const AlgebraInstance& other);

 private:
  std::string name_;
  int modes_ = 0;
  std::vector<Definition> defs_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> generators_;
  std::vector<RelationSpec> relations_;
  std::vector<CasimirSpec> casimirs_;
  std::map<std::string, std::string> parameters_;
  BoxPlan box_;
};

struct InstanceOptions {
  int p = 1;
  int q = 1;
  int r = 0;
  Deformation gamma = Deformation::gamma();
  Deformation mu = Deformation::mu();
};

// Two-boson realisation of su_g(2) on modes (m0, m0+1) with labels prefix0, prefix+, ...
void add_su2_block(AlgebraInstance& inst, const std::string& prefix, int first_mode,
                   const Deformation& d, int p, const std::string& id_prefix, bool with_relations);
void add_su11_block(AlgebraInstance& inst, const std::string& prefix, int first_mode,
                    const Deformation& d, int q, const std::string& id_prefix, bool with_relations);

AlgebraInstance js_su2_deformed(const InstanceOptions& o = {});
AlgebraInstance js_su11_deformed(const InstanceOptions& o = {});
AlgebraInstance fuse_boson_quadratic(const InstanceOptions& o = {});
AlgebraInstance fuse_boson_cubic(const InstanceOptions& o = {});
AlgebraInstance fuse_two_su2(const InstanceOptions& o = {});
// Higgs specialisation of fuse_two_su2 with mu = sign * gamma.
AlgebraInstance higgs_two_su2(const InstanceOptions& o = {}, int sign = 1);
AlgebraInstance fuse_su2_su11(const InstanceOptions& o = {});
AlgebraInstance higgs_su2_su11(const InstanceOptions& o = {}, int sign = 1);
AlgebraInstance hahn_operators(const InstanceOptions& o = {});
AlgebraInstance higgs_hamiltonians(const InstanceOptions& o = {});

// Scalars shared by the fusion constructions.
ScalarExpr omega_pm(const Deformation& g, const Deformation& m, int p, int q, int sign);
struct BetaCoefficients {
  ScalarExpr b2, b1, b0_const, b0_cj;  // b0 = b0_const + b0_cj * C_J
};
BetaCoefficients beta_coefficients(const ScalarExpr& w);

// Structure constants and Killing form of a 3-element basis closing under a bracket.
struct KillingResult {
  bool closes = false;
  std::vector<std::string> basis;
  // f[a][b][c]: [X_a, X_b] = sum_c f[a][b][c] X_c
  std::vector<std::vector<std::vector<ScalarExpr>>> f;
  std::vector<std::vector<ScalarExpr>> metric;
  std::string residual;  // first non-closing bracket, when any
};

using LinearVector = std::map<std::string, ScalarExpr>;
KillingResult killing_from_brackets(const std::vector<std::string>& names,
                                    const std::vector<LinearVector>& elements,
                                    const std::vector<std::vector<LinearVector>>& brackets);
KillingResult killing_metric(const AlgebraInstance& inst, const std::vector<std::string>& basis);
KillingResult killing_metric(const std::array<Mat2, 3>& basis, const std::vector<std::string>& names);

LinearVector as_linear(const OperatorExpr& op);
LinearVector as_linear(const Mat2& m);

// Eigenvalues of the (symmetric) metric at a binding and the resulting sign counts.
struct Signature {
  std::vector<std::complex<double>> eigenvalues;
  int positive = 0, negative = 0, zero = 0, complex = 0;
  std::string str() const;
};
Signature metric_signature(const std::vector<std::vector<ScalarExpr>>& g, const Bindings& b);

// Instance names accepted by make_instance / the CLI.
std::vector<std::string> instance_names();
AlgebraInstance make_instance(const std::string& name, const InstanceOptions& o = {});

}  // namespace bosonalg
