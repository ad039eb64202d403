#include "bosonalg/realizations.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>
#include <sstream>

namespace bosonalg {

namespace {

Formula F(const std::string& label) { return Formula::label(label); }
Formula S(const ScalarExpr& s) { return Formula(s); }
ScalarExpr Q(long n, long d = 1) { return ScalarExpr::rational(n, d); }

const ScalarExpr kI = imag();

std::string mode_tag(std::optional<int> mode) {
  return mode ? "mode" + std::to_string(*mode + 1) : "global";
}

RelationSpec equation(std::string id, std::string title, Formula lhs, Formula rhs, bool claim_zero = true) {
  RelationSpec r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.claim_zero = claim_zero;
  return r;
}

RelationSpec pt_check(const std::string& id_prefix, const std::string& label, std::optional<int> mode,
                      bool claim_zero = true) {
  RelationSpec r;
  r.kind = RelationSpec::Kind::pt_invariance;
  r.id = id_prefix + ".pt." + label + "." + mode_tag(mode);
  r.title = "Pi_T(" + mode_tag(mode) + ") leaves " + label + " invariant";
  r.pt_label = label;
  r.pt_mode = mode;
  r.lhs = F(label);
  r.rhs = F(label);
  r.claim_zero = claim_zero;
  return r;
}

void add_pt_checks(AlgebraInstance& inst, const std::string& id_prefix, const std::vector<std::string>& labels,
                   std::vector<Formula> conditions = {}) {
  for (const auto& l : labels)
    for (int j = 0; j < inst.modes(); ++j) {
      RelationSpec r = pt_check(id_prefix, l, j);
      r.conditions = conditions;
      inst.add_relation(r);
    }
}

void add_ladder(AlgebraInstance& inst, const std::string& id, const std::string& x0, const std::string& xp,
                const std::string& xm, const ScalarExpr& step, std::vector<Formula> conditions = {}) {
  RelationSpec plus = equation(id + ".ladder.plus", "[" + x0 + ", " + xp + "] = step*" + xp, comm(F(x0), F(xp)),
                               S(step) * F(xp));
  RelationSpec minus = equation(id + ".ladder.minus", "[" + x0 + ", " + xm + "] = -step*" + xm,
                                comm(F(x0), F(xm)), -(S(step) * F(xm)));
  plus.conditions = conditions;
  minus.conditions = conditions;
  inst.add_relation(plus);
  inst.add_relation(minus);
}

// Writes a*ch^2 + b*ch*sh + c*sh^2 as (a+c)/2 + (a-c)/2 w + (b/2) g.
ScalarExpr half_angle_map(const ScalarExpr& e, const Deformation& d) {
  if (!e.denominator().empty()) throw Error("half-angle map needs a polynomial");
  ScalarExpr out(0);
  const std::size_t ich = static_cast<std::size_t>(Sym::ch);
  const std::size_t ish = static_cast<std::size_t>(Sym::sh);
  for (const auto& [ex, c] : e.numerator().terms()) {
    Exponents rest = ex;
    rest[ich] = rest[ish] = 0;
    if (rest != Exponents{}) throw Error("half-angle map: unexpected symbol");
    ScalarExpr v;
    if (ex[ich] == 2 && ex[ish] == 0) v = (ScalarExpr(1) + d.w) / ScalarExpr(2);
    else if (ex[ich] == 1 && ex[ish] == 1) v = d.g / ScalarExpr(2);
    else if (ex[ich] == 0 && ex[ish] == 2) v = (ScalarExpr(1) - d.w) / ScalarExpr(2);
    else throw Error("half-angle map: entry is not a homogeneous quadratic");
    out += ScalarExpr(c) * v;
  }
  return out;
}

Mat2 zero_mat() { return {{{ScalarExpr(0), ScalarExpr(0)}, {ScalarExpr(0), ScalarExpr(0)}}}; }

Mat2 dyad(const Vec2& a, const Vec2& b) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = a[r] * b[c].conj();
  return m;
}

Vec2 mat_apply(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

Mat2 adjugate(const Mat2& t) { return {{{t[1][1], -t[0][1]}, {-t[1][0], t[0][0]}}}; }

ScalarExpr i_pow(int n) {
  static const ScalarExpr table[4] = {ScalarExpr(1), imag(), ScalarExpr(-1), -imag()};
  return table[((n % 4) + 4) % 4];
}

std::array<Vec2, 2> basis_u() {
  return {Vec2{ScalarExpr(1), ScalarExpr(1)}, Vec2{ScalarExpr(1), ScalarExpr(-1)}};
}

// sum_{mu,nu} m[mu][nu] x_mu y_nu
OperatorExpr bilinear(const Mat2& m, const std::array<OperatorExpr, 2>& x, const std::array<OperatorExpr, 2>& y) {
  OperatorExpr r(x[0].modes());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (!m[a][b].is_zero()) r += m[a][b] * (x[a] * y[b]);
  return r;
}

// x^2 + v x
Formula g2(const Formula& x, const ScalarExpr& v) { return x.pow(2) + S(v) * x; }

}  // namespace

Deformation Deformation::gamma() { return {sym(Sym::gamma), sym(Sym::w0), "gamma"}; }
Deformation Deformation::mu() { return {sym(Sym::mu), sym(Sym::wmu), "mu"}; }
Deformation Deformation::negated(const Deformation& d) { return {-d.g, d.w, "-" + d.name}; }
Deformation Deformation::exact(const mpq_class& g, const mpq_class& w) {
  if (g * g + w * w != 1) throw Error("deformation needs g^2 + w^2 = 1");
  return {ScalarExpr(GaussQ(g)), ScalarExpr(GaussQ(w)), g.get_str()};
}

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
  return m;
}

Mat2 mat_add(const Mat2& a, const Mat2& b) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = a[r][c] + b[r][c];
  return m;
}

Mat2 mat_sub(const Mat2& a, const Mat2& b) { return mat_add(a, mat_scale(ScalarExpr(-1), b)); }

Mat2 mat_scale(const ScalarExpr& c, const Mat2& a) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) m[r][k] = c * a[r][k];
  return m;
}

Mat2 mat_adjoint(const Mat2& a) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = a[c][r].conj();
  return m;
}

Mat2 mat_comm(const Mat2& a, const Mat2& b) { return mat_sub(mat_mul(a, b), mat_mul(b, a)); }

ScalarExpr mat_trace(const Mat2& a) { return a[0][0] + a[1][1]; }

bool mat_is_zero(const Mat2& a) {
  for (const auto& row : a)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

std::string mat_str(const Mat2& a) {
  return "[[" + a[0][0].str() + ", " + a[0][1].str() + "], [" + a[1][0].str() + ", " + a[1][1].str() + "]]";
}

Mat2 pauli(int m) {
  const ScalarExpr o(0), l(1);
  switch (m) {
    case 1: return {{{o, l}, {l, o}}};
    case 2: return {{{o, -kI}, {kI, o}}};
    case 3: return {{{l, o}, {o, -l}}};
  }
  throw Error("Pauli index must be 1..3");
}

ScalarExpr BiorthogonalSystem::pairing(int j, int k) const {
  return (phi[j][0].conj() * chi[k][0] + phi[j][1].conj() * chi[k][1]) / ScalarExpr(2);
}

BiorthogonalSystem biorthogonal_system() {
  BiorthogonalSystem b;
  const ScalarExpr ch = sym(Sym::ch), sh = sym(Sym::sh), cphi = sym(Sym::cphi), sphi = sym(Sym::sphi);
  Mat2 id = {{{ScalarExpr(1), ScalarExpr(0)}, {ScalarExpr(0), ScalarExpr(1)}}};
  b.T = mat_add(mat_scale(ch, id), mat_sub(mat_scale(sh * cphi, pauli(1)), mat_scale(sh * sphi, pauli(2))));
  b.det = b.T[0][0] * b.T[1][1] - b.T[0][1] * b.T[1][0];
  Mat2 inv_adj = mat_scale(sym(Sym::w0) / b.det.conj(), mat_adjoint(adjugate(b.T)));
  b.u = basis_u();
  for (int j = 0; j < 2; ++j) {
    b.chi[j] = mat_apply(b.T, b.u[j]);
    b.phi[j] = mat_apply(inv_adj, b.u[j]);
  }
  return b;
}

int structure_sign(int m, int j, int k) {
  auto c1 = [](int a, int b) { return a == b ? (a % 2 == 0 ? 1 : -1) : 0; };
  auto c3 = [&](int a, int b) { return 1 - (a % 2 == 0 ? 1 : -1) * c1(a, b); };
  switch (m) {
    case 1: return c1(j, k);
    case 2: return (j % 2 == 0 ? 1 : -1) * c3(j, k);
    case 3: return c3(j, k);
  }
  throw Error("structure index must be 1..3");
}

std::array<Mat2, 3> pauli_from_dyads() {
  auto u = basis_u();
  std::array<Mat2, 3> out;
  for (int m = 1; m <= 3; ++m) {
    Mat2 acc = zero_mat();
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        acc = mat_add(acc, mat_scale(ScalarExpr(structure_sign(m, j, k)), dyad(u[j - 1], u[k - 1])));
    out[m - 1] = mat_scale(i_pow(m + 1) / ScalarExpr(4), acc);
  }
  return out;
}

std::array<Mat2, 3> deformed_pauli(const Deformation& d) {
  const ScalarExpr ch = sym(Sym::ch), sh = sym(Sym::sh);
  // T at phi = pi; det T = cos(theta) = w, so phi_j = adj(T)' u_j
  Mat2 t = {{{ch, kI * sh}, {-kI * sh, ch}}};
  Mat2 left = mat_adjoint(adjugate(t));
  auto u = basis_u();
  std::array<Mat2, 3> out;
  for (int m = 1; m <= 3; ++m) {
    Mat2 acc = zero_mat();
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) {
        int c = structure_sign(m, j, k);
        if (c == 0) continue;
        Mat2 dy = dyad(mat_apply(left, u[j - 1]), mat_apply(t, u[k - 1]));
        acc = mat_add(acc, mat_scale(ScalarExpr(c), dy));
      }
    Mat2 mapped;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) mapped[r][c] = half_angle_map(acc[r][c], d);
    ScalarExpr pre = i_pow(m + 1) / ScalarExpr(4);
    if (m == 2) pre = pre / d.w;
    out[m - 1] = mat_scale(pre, mapped);
  }
  return out;
}

std::array<Mat2, 3> deformed_tau(const Deformation& d) {
  auto s = deformed_pauli(d);
  return {mat_scale(kI, s[0]), mat_scale(kI, s[1]), s[2]};
}

std::array<Eigen::Matrix2cd, 3> deformed_pauli_numeric(double g) {
  using C = std::complex<double>;
  const double theta = std::asin(g);
  const double w = std::cos(theta);
  const double ch = std::cos(theta / 2), sh = std::sin(theta / 2);
  Eigen::Matrix2cd x, y, id;
  x << 0, 1, 1, 0;
  y << 0, C(0, -1), C(0, 1), 0;
  id.setIdentity();
  // cos(phi/2) = 0, sin(phi/2) = 1
  Eigen::Matrix2cd t = ch * id - sh * y;
  Eigen::Matrix2cd tinv_adj = w * t.inverse().adjoint();
  Eigen::Vector2cd u[2];
  u[0] << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  u[1] << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  std::array<Eigen::Matrix2cd, 3> out;
  const C ipow[4] = {1, C(0, 1), -1, C(0, -1)};
  for (int m = 1; m <= 3; ++m) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) {
        Eigen::Vector2cd ph = tinv_adj * u[j - 1];
        Eigen::Vector2cd chi = t * u[k - 1];
        acc += double(structure_sign(m, j, k)) * ph * chi.adjoint();
      }
    C pre = ipow[(m + 1) % 4] / 2.0;
    if (m == 2) pre /= w;
    out[m - 1] = pre * acc;
  }
  return out;
}

AlgebraInstance::AlgebraInstance(std::string name, int modes) : name_(std::move(name)), modes_(modes) {
  for (int k = 0; k < modes; ++k)
    leaf("a" + std::to_string(k + 1), OperatorExpr::annihilate(modes, k), "annihilator of mode " + std::to_string(k + 1));
}

void AlgebraInstance::leaf(const std::string& label, OperatorExpr op, std::string description) {
  if (has(label)) throw Error("label defined twice: " + label);
  if (op.modes() != modes_) op = op.with_modes(modes_);
  Definition d;
  d.label = label;
  d.leaf = op;
  d.value = std::move(op);
  d.description = std::move(description);
  index_[label] = defs_.size();
  defs_.push_back(std::move(d));
}

void AlgebraInstance::define(const std::string& label, const Formula& f, std::string description) {
  if (has(label)) throw Error("label defined twice: " + label);
  Definition d;
  d.label = label;
  d.formula = f;
  d.value = evaluate(f);
  d.description = std::move(description);
  index_[label] = defs_.size();
  defs_.push_back(std::move(d));
}

void AlgebraInstance::add_casimir(const std::string& label, std::vector<std::string> centralizes,
                                  const std::string& id_prefix, std::vector<Formula> conditions) {
  for (const auto& g : centralizes) {
    RelationSpec r = equation(id_prefix + ".central." + g, "[" + label + ", " + g + "] = 0", comm(F(label), F(g)),
                              Formula(0));
    r.conditions = conditions;
    add_relation(r);
  }
  casimirs_.push_back({label, std::move(centralizes)});
}

void AlgebraInstance::add_relation(RelationSpec r) {
  auto check = [&](const Formula& f) {
    for (const auto& l : f.labels())
      if (!has(l)) throw Error("relation " + r.id + " references unknown label " + l);
  };
  check(r.lhs);
  check(r.rhs);
  for (const auto& c : r.conditions) check(c);
  if (r.kind == RelationSpec::Kind::pt_invariance && r.pt_mode && (*r.pt_mode < 0 || *r.pt_mode >= modes_))
    throw Error("relation " + r.id + " names a mode outside the instance");
  relations_.push_back(std::move(r));
}

const Definition& AlgebraInstance::definition(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw Error("unknown label " + label + " in instance " + name_);
  return defs_[it->second];
}

OperatorExpr AlgebraInstance::evaluate(const Formula& f) const { return bosonalg::evaluate(f, modes_, resolver()); }

LabelResolver AlgebraInstance::resolver() const {
  return [this](const std::string& l) { return op(l); };
}

DefinitionLookup AlgebraInstance::lookup() const {
  return [this](const std::string& l) {
    const Definition& d = definition(l);
    NumericDefinition n;
    n.leaf = d.leaf;
    n.formula = d.formula;
    return n;
  };
}

void AlgebraInstance::absorb(const AlgebraInstance& other) {
  if (other.modes_ != modes_) throw ModeMismatch(modes_, other.modes_);
  for (const auto& d : other.defs_) {
    if (has(d.label)) continue;
    index_[d.label] = defs_.size();
    defs_.push_back(d);
  }
  for (const auto& r : other.relations_) relations_.push_back(r);
  for (const auto& c : other.casimirs_) casimirs_.push_back(c);
}

void add_su2_block(AlgebraInstance& inst, const std::string& P, int first, const Deformation& d, int p,
                   const std::string& id, bool with_relations) {
  const int n = inst.modes();
  const ScalarExpr w = d.w;
  auto sigma = deformed_pauli(d);
  std::array<OperatorExpr, 2> cr{OperatorExpr::create(n, first), OperatorExpr::create(n, first + 1)};
  std::array<OperatorExpr, 2> an{OperatorExpr::annihilate(n, first), OperatorExpr::annihilate(n, first + 1)};
  const std::string sfx = " (deformation " + d.name + ")";
  inst.leaf(P + "1", bilinear(sigma[0], cr, an), "Jordan-Schwinger image of sigma_1" + sfx);
  inst.leaf(P + "2", bilinear(sigma[1], cr, an), "Jordan-Schwinger image of sigma_2" + sfx);
  inst.leaf(P + "0", bilinear(sigma[2], cr, an), "Jordan-Schwinger image of sigma_3" + sfx);
  Formula x0 = F(P + "0"), x1 = F(P + "1"), x2 = F(P + "2");
  inst.define(P + "p", S(w.pow(-p)) * x1 + S(kI * w.pow(1 - p)) * x2, "raising ladder");
  inst.define(P + "m", S(w.pow(-p)) * x1 - S(kI * w.pow(1 - p)) * x2, "lowering ladder");
  Formula xp = F(P + "p"), xm = F(P + "m");
  const std::string C = "C" + P;
  inst.define(C, S(w.pow(-2)) * x0 * (x0 + S(w)) + S(w.pow(2 * p - 2)) * xm * xp, "Casimir");
  inst.define(C + "_alt", S(w.pow(-2)) * x0 * (x0 - S(w)) + S(w.pow(2 * p - 2)) * xp * xm,
              "Casimir, other sign choice");
  if (!with_relations) return;
  for (const auto& g : {P + "0", P + "p", P + "m"}) inst.add_generator(g);
  add_ladder(inst, id, P + "0", P + "p", P + "m", w);
  inst.add_relation(equation(id + ".raise_lower", "[" + P + "p, " + P + "m] = 2 w^(1-2p) " + P + "0",
                             comm(xp, xm), S(ScalarExpr(2) * w.pow(1 - 2 * p)) * x0));
  inst.add_relation(equation(id + ".raise_lower.poly", "[" + P + "p, " + P + "m] = w^(-2p) (g2(x; w) - g2(x; -w))",
                             comm(xp, xm), S(w.pow(-2 * p)) * (g2(x0, w) - g2(x0, -w))));
  inst.add_casimir(C, {P + "0", P + "p", P + "m"}, id + ".casimir");
  inst.add_relation(equation(id + ".casimir.sign_forms", "both sign choices of " + C + " agree", F(C), F(C + "_alt")));
  inst.add_relation(equation(id + ".casimir.poly_form", C + "/w^(2p-2) = " + P + "m " + P + "p + w^(-2p) g2(x; w)",
                             F(C) / S(w.pow(2 * p - 2)), xm * xp + S(w.pow(-2 * p)) * g2(x0, w)));
  inst.add_relation(equation(id + ".hermiticity." + P + "0", P + "0 is self-adjoint", x0.dag(), x0, false));
  add_pt_checks(inst, id, {P + "0", C});
  inst.add_relation(pt_check(id, P + "0", std::nullopt, false));
}

void add_su11_block(AlgebraInstance& inst, const std::string& P, int first, const Deformation& d, int q,
                    const std::string& id, bool with_relations) {
  const int n = inst.modes();
  const ScalarExpr w = d.w;
  auto tau = deformed_tau(d);
  OperatorExpr b1 = OperatorExpr::annihilate(n, first), b2 = OperatorExpr::annihilate(n, first + 1);
  std::array<OperatorExpr, 2> wsharp{dagger(b1), -b2};
  std::array<OperatorExpr, 2> wvec{b1, dagger(b2)};
  const std::string sfx = " (deformation " + d.name + ")";
  inst.leaf(P + "1", bilinear(tau[0], wsharp, wvec), "W# tau_1 W" + sfx);
  inst.leaf(P + "2", bilinear(tau[1], wsharp, wvec), "W# tau_2 W" + sfx);
  inst.leaf(P + "0", bilinear(tau[2], wsharp, wvec), "W# tau_3 W" + sfx);
  Formula x0 = F(P + "0"), x1 = F(P + "1"), x2 = F(P + "2");
  inst.define(P + "p", S(w.pow(-q)) * x1 + S(kI * w.pow(1 - q)) * x2, "raising ladder");
  inst.define(P + "m", S(w.pow(-q)) * x1 - S(kI * w.pow(1 - q)) * x2, "lowering ladder");
  Formula xp = F(P + "p"), xm = F(P + "m");
  const std::string C = "C" + P;
  inst.define(C, S(w.pow(2 * q - 2)) * xp * xm - S(w.pow(-2)) * x0 * (x0 - S(w)), "Casimir (central form)");
  inst.define(C + "_alt", S(w.pow(2 * q - 2)) * xm * xp - S(w.pow(-2)) * x0 * (x0 + S(w)),
              "Casimir (central form), other ordering");
  inst.define(C + "_printed", xp * xm - x0 * (x0 + S(w)), "Casimir as printed, upper signs");
  inst.define(C + "_printed_alt", xm * xp - x0 * (x0 - S(w)), "Casimir as printed, lower signs");
  if (!with_relations) return;
  for (const auto& g : {P + "0", P + "p", P + "m"}) inst.add_generator(g);
  add_ladder(inst, id, P + "0", P + "p", P + "m", w);
  inst.add_relation(equation(id + ".raise_lower", "[" + P + "p, " + P + "m] = -2 w^(1-2q) " + P + "0",
                             comm(xp, xm), S(ScalarExpr(-2) * w.pow(1 - 2 * q)) * x0));
  inst.add_casimir(C + "_printed", {P + "0", P + "p", P + "m"}, id + ".casimir_printed");
  inst.add_relation(equation(id + ".casimir_printed.sign_forms", "both sign choices of the printed Casimir agree",
                             F(C + "_printed"), F(C + "_printed_alt")));
  inst.add_casimir(C, {P + "0", P + "p", P + "m"}, id + ".casimir");
  inst.add_relation(equation(id + ".casimir.sign_forms", "both orderings of the central Casimir agree", F(C),
                             F(C + "_alt")));
  inst.add_relation(equation(id + ".hermiticity." + P + "0", P + "0 is self-adjoint", x0.dag(), x0));
  add_pt_checks(inst, id, {P + "0", C});
}

AlgebraInstance js_su2_deformed(const InstanceOptions& o) {
  AlgebraInstance inst("su2g", 2);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("deformation", o.gamma.name);
  add_su2_block(inst, "J", 0, o.gamma, o.p, "su2g", true);
  inst.set_box({{{1, 1}}, 6});
  return inst;
}

AlgebraInstance js_su11_deformed(const InstanceOptions& o) {
  AlgebraInstance inst("su11m", 2);
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("deformation", o.mu.name);
  add_su11_block(inst, "Z", 0, o.mu, o.q, "su11m", true);
  inst.set_box({{{1, 0}, {0, 1}}, 8});
  return inst;
}

namespace {

struct QuadraticScalars {
  ScalarExpr w, w1, A1;
};

QuadraticScalars add_quadratic_block(AlgebraInstance& inst, const InstanceOptions& o) {
  const int p = o.p;
  const ScalarExpr w = o.gamma.w;
  const ScalarExpr w1 = omega_chain(w, 1);
  const ScalarExpr s0 = sym(Sym::s0);
  add_su2_block(inst, "J", 0, o.gamma, p, "", false);
  inst.define("M0", F("a3").dag() * F("a3"), "number operator of mode 3");
  inst.define("R0", (F("J0") - F("M0")) / S(2), "quadratic Cartan element");
  inst.define("Lam0", (F("J0") + F("M0")) / S(2), "central element of the quadratic algebra");
  inst.define("Rp", S(s0) * F("Jp") * F("a3"), "quadratic raising operator");
  inst.define("Rm", S(s0) * F("Jm") * F("a3").dag(), "quadratic lowering operator");
  const ScalarExpr wp = w.pow(-2 * p);
  const ScalarExpr A1 = -(ScalarExpr(1) + ScalarExpr(2) * w) * wp;
  inst.define("B1", -(S(2) * F("Lam0") - S(w)) * S(wp), "linear coefficient of P2");
  inst.define("C1", (S(ScalarExpr(2) * w - ScalarExpr(1)) * F("Lam0").pow(2) + S(w) * F("Lam0") + S(w * w) * F("CJ")) * S(wp),
              "constant coefficient of P2");
  Formula R0 = F("R0"), B1 = F("B1"), C1 = F("C1");
  inst.define("P2", S(A1) * R0.pow(2) + B1 * R0 + C1, "quadratic structure polynomial");
  auto g3 = [&](const ScalarExpr& v, long c1_weight) {
    ScalarExpr v2 = v * v;
    return S(A1 / (ScalarExpr(3) * v2)) * R0.pow(3) + (S(A1 * v) + B1) / S(ScalarExpr(2) * v2) * R0.pow(2) +
           (S(A1 * v2) + S(ScalarExpr(3) * v) * B1 + S(c1_weight) * C1) / S(ScalarExpr(6) * v2) * R0 +
           C1 / S(ScalarExpr(2) * v);
  };
  const ScalarExpr pre = s0 * s0 * w1;
  inst.define("CR", F("Rm") * F("Rp") + S(pre) * g3(w1, 1), "quadratic Casimir");
  inst.define("CR_alt", F("Rp") * F("Rm") + S(pre) * g3(-w1, 1), "quadratic Casimir, other sign choice");
  inst.define("CR6", F("Rm") * F("Rp") + S(pre) * g3(w1, 6), "quadratic Casimir with 6*C1 in the linear term");
  inst.define("CR6_alt", F("Rp") * F("Rm") + S(pre) * g3(-w1, 6), "same, other sign choice");
  return {w, w1, A1};
}

}  // namespace

AlgebraInstance fuse_boson_quadratic(const InstanceOptions& o) {
  AlgebraInstance inst("quadratic", 3);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("deformation", o.gamma.name);
  auto sc = add_quadratic_block(inst, o);
  const ScalarExpr s0 = sym(Sym::s0);
  for (const auto& g : {"R0", "Rp", "Rm"}) inst.add_generator(g);
  add_ladder(inst, "quad", "R0", "Rp", "Rm", sc.w1);
  inst.add_relation(equation("quad.raise_lower", "[Rp, Rm] = s0^2 P2(R0)", comm(F("Rp"), F("Rm")),
                             S(s0 * s0) * F("P2")));
  inst.add_casimir("CR", {"R0", "Rp", "Rm"}, "quad.casimir");
  inst.add_relation(equation("quad.casimir.sign_forms", "both sign choices of CR agree", F("CR"), F("CR_alt")));
  inst.add_casimir("CR6", {"R0", "Rp", "Rm"}, "quad.casimir6");
  inst.add_relation(equation("quad.Lam0.central.Rp", "[Lam0, Rp] = 0", comm(F("Lam0"), F("Rp")), Formula(0)));
  inst.add_relation(equation("quad.casimir6.sign_forms", "both sign choices of CR6 agree", F("CR6"), F("CR6_alt")));
  add_pt_checks(inst, "quad", {"R0", "CR"});
  inst.set_box({{{1, 1, 0}, {0, 0, 1}}, 6});
  return inst;
}

namespace {

struct CubicScalars {
  ScalarExpr w, w1, w2, A1, A2;
};

CubicScalars add_cubic_block(AlgebraInstance& inst, const InstanceOptions& o) {
  auto q = add_quadratic_block(inst, o);
  const ScalarExpr w1 = q.w1, A1 = q.A1;
  const ScalarExpr w2 = omega_chain(q.w, 2);
  const ScalarExpr s1 = sym(Sym::s1);
  const ScalarExpr one(1);
  inst.define("N0", F("a4").dag() * F("a4"), "number operator of mode 4");
  inst.define("Q0", (F("R0") - F("N0")) / S(2), "cubic Cartan element");
  inst.define("Del0", (F("R0") + F("N0")) / S(2), "central element of the cubic algebra");
  inst.define("Qp", S(s1) * F("Rp") * F("a4"), "cubic raising operator");
  inst.define("Qm", S(s1) * F("Rm") * F("a4").dag(), "cubic lowering operator");
  Formula D = F("Del0"), B1 = F("B1"), C1 = F("C1");
  const ScalarExpr A2 = -(one + one / (ScalarExpr(3) * w1)) * A1;
  inst.define("B2", (S(Q(1, 2)) - S(one + one / w1) * D) * S(A1) - S(one + one / (ScalarExpr(2) * w1)) * B1,
              "quadratic coefficient of P3");
  inst.define("C2",
              (D.pow(2) * S(one - one / w1) + D - S(w1 / ScalarExpr(6))) * S(A1) + (S(Q(1, 2)) - D / S(w1)) * B1 -
                  S(one + one / w1) * C1,
              "linear coefficient of P3");
  inst.define("D2",
              (D.pow(3) * S(one - one / (ScalarExpr(3) * w1)) + D.pow(2) / S(2) - S(w1 / ScalarExpr(6)) * D) * S(A1) +
                  (D.pow(2) * S(one - one / (ScalarExpr(2) * w1)) + D / S(2)) * B1 +
                  (D * S(one - one / w1) + S(Q(1, 2))) * C1 + F("CR"),
              "constant coefficient of P3");
  Formula Q0 = F("Q0"), B2 = F("B2"), C2 = F("C2"), D2 = F("D2");
  inst.define("P3", S(A2) * Q0.pow(3) + B2 * Q0.pow(2) + C2 * Q0 + D2, "cubic structure polynomial");
  // printed_typo keeps v^2 in the cubic coefficient as printed; the telescoping identity needs v.
  auto g4 = [&](const Formula& a, const Formula& b, const Formula& c, const Formula& d, const ScalarExpr& v,
                bool printed_typo) {
    ScalarExpr v2 = v * v;
    ScalarExpr v3 = printed_typo ? v2 : v;
    return a / S(ScalarExpr(4) * v2) * Q0.pow(4) + (S(2) * b + S(3) * a * S(v3)) / S(ScalarExpr(6) * v2) * Q0.pow(3) +
           (S(2) * c + a * S(v2) + S(ScalarExpr(2) * v) * b) / S(ScalarExpr(4) * v2) * Q0.pow(2) +
           (S(6) * d + S(v2) * b + S(ScalarExpr(3) * v) * c) / S(ScalarExpr(6) * v2) * Q0 + d / S(ScalarExpr(2) * v);
  };
  const ScalarExpr pre = s1 * s1 * w2;
  inst.define("CQ", F("Qm") * F("Qp") + S(pre) * g4(S(A2), B2, C2, D2, w2, true), "cubic Casimir");
  inst.define("CQ_alt", F("Qm") * F("Qp") + S(pre) * g4(S(A2), B2, C2, D2, -w2, true),
              "cubic Casimir, second printed form");

  // The same polynomial with the s0 dependence restored and CR6 in place of CR.
  const ScalarExpr s0sq = sym(Sym::s0).pow(2);
  inst.define("A2s", S(s0sq * A2), "leading coefficient of the full cubic structure polynomial");
  inst.define("B2s", S(s0sq) * B2, "quadratic coefficient of the full cubic structure polynomial");
  inst.define("C2s", S(s0sq) * C2, "linear coefficient of the full cubic structure polynomial");
  inst.define("D2s", F("CR6") + S(s0sq) * (D2 - F("CR")), "constant coefficient of the full cubic structure polynomial");
  Formula A2s = F("A2s"), B2s = F("B2s"), C2s = F("C2s"), D2s = F("D2s");
  inst.define("P3s", A2s * Q0.pow(3) + B2s * Q0.pow(2) + C2s * Q0 + D2s, "full cubic structure polynomial");
  inst.define("CQ6", F("Qm") * F("Qp") + S(pre) * g4(A2s, B2s, C2s, D2s, w2, false),
              "cubic Casimir from the full structure polynomial");
  inst.define("CQ6_alt", F("Qp") * F("Qm") + S(pre) * g4(A2s, B2s, C2s, D2s, -w2, false),
              "same, other sign choice");
  return {q.w, w1, w2, A1, A2};
}

}  // namespace

BetaCoefficients beta_coefficients(const ScalarExpr& w) {
  const ScalarExpr one(1), den = (one + w) * (one + ScalarExpr(2) * w);
  BetaCoefficients b;
  b.b2 = ScalarExpr(-2) * (one + ScalarExpr(3) * w) / den;
  b.b1 = (ScalarExpr(3) * w * w + ScalarExpr(9) * w + ScalarExpr(2)) / den;
  b.b0_cj = ScalarExpr(12) * (ScalarExpr(3) + w) * w * w / (ScalarExpr(12) * den);
  b.b0_const = (-(one + w).pow(2) * (one + ScalarExpr(2) * w) - ScalarExpr(6) * w * (one + w)) / (ScalarExpr(12) * den);
  return b;
}

AlgebraInstance fuse_boson_cubic(const InstanceOptions& o) {
  AlgebraInstance inst("cubic", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("deformation", o.gamma.name);
  auto c = add_cubic_block(inst, o);
  const ScalarExpr s1 = sym(Sym::s1);
  for (const auto& g : {"Q0", "Qp", "Qm"}) inst.add_generator(g);
  add_ladder(inst, "cubic", "Q0", "Qp", "Qm", c.w2);
  inst.add_relation(equation("cubic.raise_lower", "[Qp, Qm] = s1^2 P3(Q0)", comm(F("Qp"), F("Qm")),
                             S(s1 * s1) * F("P3")));
  inst.add_casimir("CQ", {"Q0", "Qp", "Qm"}, "cubic.casimir");
  inst.add_relation(equation("cubic.casimir.sign_forms", "both printed forms of CQ agree", F("CQ"), F("CQ_alt")));
  inst.add_relation(equation("cubic.raise_lower.full", "[Qp, Qm] = s1^2 P3s(Q0)", comm(F("Qp"), F("Qm")),
                             S(s1 * s1) * F("P3s")));
  inst.add_casimir("CQ6", {"Q0", "Qp", "Qm"}, "cubic.casimir_full");
  inst.add_relation(equation("cubic.casimir_full.sign_forms", "both sign choices of CQ6 agree", F("CQ6"),
                             F("CQ6_alt")));
  inst.add_relation(equation("cubic.Del0.central.Qp", "[Del0, Qp] = 0", comm(F("Del0"), F("Qp")), Formula(0)));

  std::vector<Formula> higgs_cond{F("B2"), F("D2")};
  RelationSpec h = equation("cubic.higgs_form", "[Qp, Qm] = s1^3 (A2 Q0^3 + C2 Q0) where B2 = D2 = 0",
                            comm(F("Qp"), F("Qm")), S(s1.pow(3)) * (S(c.A2) * F("Q0").pow(3) + F("C2") * F("Q0")));
  h.conditions = higgs_cond;
  inst.add_relation(h);
  RelationSpec hs = equation("cubic.higgs_form.full", "[Qp, Qm] = s1^2 (A2s Q0^3 + C2s Q0) where B2s = D2s = 0",
                             comm(F("Qp"), F("Qm")), S(s1 * s1) * (F("A2s") * F("Q0").pow(3) + F("C2s") * F("Q0")));
  hs.conditions = {F("B2s"), F("D2s")};
  inst.add_relation(hs);

  // lam1 fixed by s1^2 = 4 lam1 / (A2 w0)
  const ScalarExpr w = c.w;
  const ScalarExpr lam1 = s1 * s1 * c.A2 * w / ScalarExpr(4);
  auto beta = beta_coefficients(w);
  inst.define("V", S(lam1 / ScalarExpr(8)) - S(lam1 / (w * w)) * (S(beta.b2) * F("Lam0").pow(2) + S(beta.b1) * F("Lam0") +
                                                                 S(beta.b0_const) + S(beta.b0_cj) * F("CJ")),
              "cubic Higgs Hamiltonian with lam1 = s1^2 A2 w0 / 4");
  RelationSpec v = equation("cubic.higgs_hamiltonian", "[Qp, Qm] = 4((lam1/8 - V) w0 Q0 + (lam1/w0) Q0^3)",
                            comm(F("Qp"), F("Qm")),
                            S(4) * ((S(lam1 / ScalarExpr(8)) - F("V")) * S(w) * F("Q0") + S(lam1 / w) * F("Q0").pow(3)));
  v.conditions = higgs_cond;
  inst.add_relation(v);
  add_pt_checks(inst, "cubic", {"Q0", "CQ"});
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 6});
  return inst;
}

ScalarExpr omega_pm(const Deformation& g, const Deformation& m, int p, int q, int sign) {
  const ScalarExpr one(1);
  ScalarExpr pre = one / (g.w.pow(2 * p - 1) * m.w.pow(2 * q - 1));
  return pre * (one / g.w + ScalarExpr(sign) * (one / m.w));
}

namespace {

void add_two_su2_block(AlgebraInstance& inst, const Deformation& dg, const Deformation& dm, const InstanceOptions& o) {
  add_su2_block(inst, "J", 0, dg, o.p, "", false);
  add_su2_block(inst, "K", 2, dm, o.q, "", false);
  const ScalarExpr s = sym(Sym::s);
  inst.define("H0", (F("J0") - F("K0")) / S(2), "Higgs Cartan element");
  inst.define("Hp", S(s) * F("Jp") * F("Km"), "Higgs raising operator");
  inst.define("Hm", S(s) * F("Jm") * F("Kp"), "Higgs lowering operator");
  inst.define("L0", (F("J0") + F("K0")) / S(2), "central element of the Higgs algebra");
}

void add_su2_su11_block(AlgebraInstance& inst, const Deformation& dg, const Deformation& dm, const InstanceOptions& o) {
  add_su2_block(inst, "J", 0, dg, o.p, "", false);
  add_su11_block(inst, "Z", 2, dm, o.q, "", false);
  const ScalarExpr sp = sym(Sym::sp);
  inst.define("Y0", (F("J0") - F("Z0")) / S(2), "Cartan element of the su(2) x su(1,1) fusion");
  inst.define("Yp", S(sp) * F("Jp") * F("Zm"), "raising operator of the su(2) x su(1,1) fusion");
  inst.define("Ym", S(sp) * F("Jm") * F("Zp"), "lowering operator of the su(2) x su(1,1) fusion");
  inst.define("X0", (F("J0") + F("Z0")) / S(2), "central element of the su(2) x su(1,1) fusion");
}

RelationSpec scalar_identity(std::string id, std::string title, const ScalarExpr& lhs, const ScalarExpr& rhs) {
  return equation(std::move(id), std::move(title), S(lhs), S(rhs));
}

}  // namespace

AlgebraInstance fuse_two_su2(const InstanceOptions& o) {
  AlgebraInstance inst("two-su2", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("deformation", o.gamma.name + "," + o.mu.name);
  add_two_su2_block(inst, o.gamma, o.mu, o);
  const ScalarExpr s = sym(Sym::s);
  const ScalarExpr wg = o.gamma.w, wm = o.mu.w;
  const ScalarExpr om_p = omega_pm(o.gamma, o.mu, o.p, o.q, 1), om_m = omega_pm(o.gamma, o.mu, o.p, o.q, -1);
  const ScalarExpr pre = ScalarExpr(2) / (wm.pow(2 * o.q - 1) * wg.pow(2 * o.p - 1));
  Formula L = F("L0");
  inst.define("alpha0", S(pre) * (F("CK") * S(wm) - F("CJ") * S(wg)) * L + S(ScalarExpr(2) * om_m) * L.pow(3),
              "constant coefficient of the fused bracket");
  inst.define("alpha1", S(pre) * (F("CK") * S(wm) + F("CJ") * S(wg)) + S(ScalarExpr(2) * om_p) * L.pow(2),
              "linear coefficient of the fused bracket");
  inst.define("alpha2", S(ScalarExpr(-2) * om_m) * L, "quadratic coefficient of the fused bracket");
  Formula H = F("H0");
  for (const auto& g : {"H0", "Hp", "Hm"}) inst.add_generator(g);
  add_ladder(inst, "two_su2", "H0", "Hp", "Hm", (wg + wm) / ScalarExpr(2));
  inst.add_relation(equation("two_su2.raise_lower", "[Hp, Hm] = s^2 (alpha0 + alpha1 H0 + alpha2 H0^2 + alpha3 H0^3)",
                             comm(F("Hp"), F("Hm")),
                             S(s * s) * (F("alpha0") + F("alpha1") * H + F("alpha2") * H.pow(2) +
                                         S(ScalarExpr(-2) * om_p) * H.pow(3))));
  inst.add_relation(equation("two_su2.L0.central.Hp", "[L0, Hp] is nonzero for independent deformations", comm(L, F("Hp")),
                             Formula(0), false));
  // Omega at equal and opposite deformations
  for (int sign : {1, -1}) {
    Deformation eq = sign > 0 ? o.gamma : Deformation::negated(o.gamma);
    const std::string tag = sign > 0 ? "equal" : "opposite";
    ScalarExpr wn = o.gamma.w.pow(2 * (o.p + o.q) - 1);
    inst.add_relation(scalar_identity("two_su2.omega_minus." + tag, "Omega_- = 0 when the deformations are " + tag,
                                      omega_pm(o.gamma, eq, o.p, o.q, -1), ScalarExpr(0)));
    inst.add_relation(scalar_identity("two_su2.omega_plus." + tag,
                                      "Omega_+ = 2/w0^(2(p+q)-1) when the deformations are " + tag,
                                      omega_pm(o.gamma, eq, o.p, o.q, 1), ScalarExpr(2) / wn));
  }
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 1}}, 6});
  return inst;
}

namespace {

// Definitions shared by the Higgs, Hahn and Hamiltonian instances (mu = sign*gamma, C = CJ).
void add_higgs_scalars(AlgebraInstance& inst, const InstanceOptions& o) {
  const int k = 2 * (o.p + o.q);
  const ScalarExpr w = o.gamma.w, s = sym(Sym::s);
  // lam0 from s^2 = -lam0 w^r, lam = lam0 / w^(2(p+q) - r - 2)
  const ScalarExpr lam0 = -(s * s) * w.pow(-o.r);
  const ScalarExpr lam = lam0 * w.pow(-(k - o.r - 2));
  inst.define("U", S(lam / (ScalarExpr(4) * w * w)) * (F("J0") + F("K0")).pow(2) + S(lam) * (F("CJ") + S(Q(1, 8))),
              "Higgs Hamiltonian, central element (lam = -s^2 w0^(2-2(p+q)))");
  auto f = [&](const ScalarExpr& v) {
    Formula H = F("H0");
    return S(2) * (S(lam / ScalarExpr(8)) - F("U")) * H * (H - S(v)) + S(lam / (v * v)) * H.pow(2) * (H - S(v)).pow(2);
  };
  inst.define("CH", F("Hm") * F("Hp") + S(w) * f(w), "Higgs Casimir in Hamiltonian form");
  inst.define("CH_alt", F("Hp") * F("Hm") + S(w) * f(-w), "Higgs Casimir in Hamiltonian form, other sign choice");
}

}  // namespace

AlgebraInstance higgs_two_su2(const InstanceOptions& o, int sign) {
  if (sign != 1 && sign != -1) throw Error("Higgs specialisation needs mu = +gamma or mu = -gamma");
  AlgebraInstance inst(sign > 0 ? "higgs" : "higgs-opposite", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("r", std::to_string(o.r));
  Deformation dm = sign > 0 ? o.gamma : Deformation::negated(o.gamma);
  inst.set_parameter("deformation", o.gamma.name + "," + dm.name);
  add_two_su2_block(inst, o.gamma, dm, o);
  add_higgs_scalars(inst, o);
  const int k = 2 * (o.p + o.q);
  const ScalarExpr w = o.gamma.w, s = sym(Sym::s);
  const ScalarExpr lam0 = -(s * s) * w.pow(-o.r);
  const ScalarExpr lam = lam0 * w.pow(-(k - o.r - 2));
  const std::string id = sign > 0 ? "higgs" : "higgs_opposite";
  std::vector<Formula> cond{F("CJ") - F("CK")};
  Formula H = F("H0"), L = F("L0"), C = F("CJ");
  for (const auto& g : {"H0", "Hp", "Hm"}) inst.add_generator(g);

  add_ladder(inst, id, "H0", "Hp", "Hm", w);
  inst.add_relation(equation(id + ".L0.central.Hp", "[L0, Hp] = 0", comm(L, F("Hp")), Formula(0)));
  Formula gamma1 = C / S(w.pow(k - 3)) + L.pow(2) / S(w.pow(k - 1));
  ScalarExpr gamma2 = -w.pow(1 - k);
  RelationSpec r25 = equation(id + ".raise_lower", "[Hp, Hm] = 4 s^2 H0 (gamma1 + gamma2 H0^2) with C = CJ",
                              comm(F("Hp"), F("Hm")), S(ScalarExpr(4) * s * s) * H * (gamma1 + S(gamma2) * H.pow(2)));
  r25.conditions = cond;
  inst.add_relation(r25);

  // The bracket in terms of lam0; the undefined cubic coefficient is read as lam0.
  Formula inner = C / S(w.pow(k - o.r - 3)) + L.pow(2) / S(w.pow(k - o.r - 1));
  RelationSpec r26 = equation(id + ".raise_lower.lam0", "[Hp, Hm] in terms of lam0 = -s^2/w0^r", comm(F("Hp"), F("Hm")),
                              S(4) * (S(-lam0) * inner * H + S(lam0 / w.pow(k - o.r - 1)) * H.pow(3)));
  r26.conditions = cond;
  inst.add_relation(r26);

  auto casimir_lam = [&](const ScalarExpr& l, int sgn) {
    Formula first = sgn > 0 ? F("Hm") * F("Hp") : F("Hp") * F("Hm");
    ScalarExpr v = ScalarExpr(sgn) * w;
    return first - S(ScalarExpr(2) * l) * inner * H * (H + S(v)) + S(l / w.pow(k - o.r - 1)) * H.pow(2) * (H + S(v)).pow(2);
  };
  inst.define("CH_lam0", casimir_lam(lam0, 1), "Higgs Casimir with the undefined coefficient read as lam0");
  inst.define("CH_lam0_alt", casimir_lam(lam0, -1), "same, other sign choice");
  inst.define("CH_lam0w", casimir_lam(lam0 / w, 1), "Higgs Casimir with the coefficient read as lam0/w0");
  inst.define("CH_lam0w_alt", casimir_lam(lam0 / w, -1), "same, other sign choice");
  inst.add_casimir("CH_lam0", {"H0", "Hp", "Hm"}, id + ".casimir_lam0", cond);
  inst.add_casimir("CH_lam0w", {"H0", "Hp", "Hm"}, id + ".casimir_lam0w", cond);
  RelationSpec sf = equation(id + ".casimir_lam0w.sign_forms", "both sign choices of CH_lam0w agree", F("CH_lam0w"),
                             F("CH_lam0w_alt"));
  sf.conditions = cond;
  inst.add_relation(sf);

  RelationSpec r33 = equation(id + ".raise_lower.hamiltonian", "[Hp, Hm] = 4((lam/8 - U) w0 H0 + (lam/w0) H0^3)",
                              comm(F("Hp"), F("Hm")),
                              S(4) * ((S(lam / ScalarExpr(8)) - F("U")) * S(w) * H + S(lam / w) * H.pow(3)));
  r33.conditions = cond;
  inst.add_relation(r33);
  inst.add_casimir("CH", {"H0", "Hp", "Hm"}, id + ".casimir", cond);
  RelationSpec chs = equation(id + ".casimir.sign_forms", "both sign choices of CH agree", F("CH"), F("CH_alt"));
  chs.conditions = cond;
  inst.add_relation(chs);
  inst.add_casimir("U", {"H0", "Hp", "Hm"}, id + ".U");
  inst.add_relation(equation(id + ".U.hermiticity", "U is self-adjoint", F("U").dag(), F("U"), false));
  add_pt_checks(inst, id, {"H0", "CH", "U"});
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 1}}, 6});
  return inst;
}

AlgebraInstance fuse_su2_su11(const InstanceOptions& o) {
  AlgebraInstance inst("su2-su11", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("deformation", o.gamma.name + "," + o.mu.name);
  add_su2_su11_block(inst, o.gamma, o.mu, o);
  const ScalarExpr sp = sym(Sym::sp);
  const ScalarExpr wg = o.gamma.w, wm = o.mu.w;
  const ScalarExpr om_p = omega_pm(o.gamma, o.mu, o.p, o.q, 1), om_m = omega_pm(o.gamma, o.mu, o.p, o.q, -1);
  const ScalarExpr pre = ScalarExpr(2) / (wm.pow(2 * o.q - 1) * wg.pow(2 * o.p - 1));
  Formula X = F("X0"), Y = F("Y0");
  for (const std::string cz : {"CZ", "CZ_printed"}) {
    const std::string tag = cz == "CZ" ? "" : "_printed";
    inst.define("Gamma0" + tag, S(pre) * (F(cz) * S(wm) + F("CJ") * S(wg)) * X - S(ScalarExpr(2) * om_m) * X.pow(3),
                "constant coefficient of the fused bracket");
    inst.define("Gamma1" + tag, S(pre) * (F(cz) * S(wm) - F("CJ") * S(wg)) - S(ScalarExpr(2) * om_p) * X.pow(2),
                "linear coefficient of the fused bracket");
  }
  inst.define("Gamma2", S(ScalarExpr(2) * om_m) * X, "quadratic coefficient of the fused bracket");
  for (const auto& g : {"Y0", "Yp", "Ym"}) inst.add_generator(g);
  add_ladder(inst, "su2_su11", "Y0", "Yp", "Ym", (wg + wm) / ScalarExpr(2));
  auto bracket = [&](const std::string& tag) {
    return S(sp * sp) * (F("Gamma0" + tag) + F("Gamma1" + tag) * Y + F("Gamma2") * Y.pow(2) +
                         S(ScalarExpr(2) * om_p) * Y.pow(3));
  };
  inst.add_relation(equation("su2_su11.raise_lower", "[Yp, Ym] = s'^2 (Gamma0 + ... + Gamma3 Y0^3), central CZ",
                             comm(F("Yp"), F("Ym")), bracket("")));
  inst.add_relation(equation("su2_su11.raise_lower.printed_casimir",
                             "[Yp, Ym] with the printed su(1,1) Casimir in Gamma0, Gamma1", comm(F("Yp"), F("Ym")),
                             bracket("_printed")));
  inst.add_relation(equation("su2_su11.X0.central.Yp", "[X0, Yp] is nonzero for independent deformations",
                             comm(X, F("Yp")), Formula(0), false));
  inst.add_relation(scalar_identity("su2_su11.gamma3", "Gamma3 = 2 Omega_+", ScalarExpr(2) * om_p,
                                    ScalarExpr(2) * omega_pm(o.gamma, o.mu, o.p, o.q, 1)));
  inst.add_relation(scalar_identity("su2_su11.gamma2.equal", "Gamma2 vanishes when the deformations are equal",
                                    ScalarExpr(2) * omega_pm(o.gamma, o.gamma, o.p, o.q, -1), ScalarExpr(0)));
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 6});
  return inst;
}

AlgebraInstance higgs_su2_su11(const InstanceOptions& o, int sign) {
  if (sign != 1 && sign != -1) throw Error("Higgs specialisation needs mu = +gamma or mu = -gamma");
  AlgebraInstance inst(sign > 0 ? "higgs-su11" : "higgs-su11-opposite", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("r", std::to_string(o.r));
  Deformation dm = sign > 0 ? o.gamma : Deformation::negated(o.gamma);
  inst.set_parameter("deformation", o.gamma.name + "," + dm.name);
  add_su2_su11_block(inst, o.gamma, dm, o);
  const int k = 2 * (o.p + o.q);
  const ScalarExpr w = o.gamma.w, sp = sym(Sym::sp);
  const std::string id = sign > 0 ? "higgs_su11" : "higgs_su11_opposite";
  std::vector<Formula> cond{F("CZ") + F("CJ")};
  std::vector<Formula> cond_printed{F("CZ_printed") + F("CJ")};
  Formula Y = F("Y0"), X = F("X0"), C = F("CJ");
  for (const auto& g : {"Y0", "Yp", "Ym"}) inst.add_generator(g);
  add_ladder(inst, id, "Y0", "Yp", "Ym", w);
  inst.add_relation(equation(id + ".X0.central.Yp", "[X0, Yp] = 0", comm(X, F("Yp")), Formula(0)));
  Formula g1 = -(C / S(w.pow(k - 3))) - X.pow(2) / S(w.pow(k - 1));
  ScalarExpr g2 = w.pow(1 - k);
  Formula rhs41 = S(ScalarExpr(4) * sp * sp) * Y * (g1 + S(g2) * Y.pow(2));
  RelationSpec r41 = equation(id + ".raise_lower", "[Yp, Ym] = 4 s'^2 Y0 (gamma1' + gamma2' Y0^2) with C' = CJ",
                              comm(F("Yp"), F("Ym")), rhs41);
  r41.conditions = cond;
  inst.add_relation(r41);
  RelationSpec r41p = r41;
  r41p.id = id + ".raise_lower.printed_casimir_condition";
  r41p.title += ", on states where the printed su(1,1) Casimir cancels CJ";
  r41p.conditions = cond_printed;
  inst.add_relation(r41p);
  // lam' from s'^2 = lam'/w0^r
  const ScalarExpr lamp = sp * sp * w.pow(o.r);
  Formula inner = C / S(w.pow(k - o.r - 3)) + X.pow(2) / S(w.pow(k - o.r - 1));
  RelationSpec r42 = equation(id + ".raise_lower.lamp", "[Yp, Ym] in terms of lam' = s'^2 w0^r", comm(F("Yp"), F("Ym")),
                              S(4) * (S(-lamp) * inner * Y + S(lamp / w.pow(k - o.r - 1)) * Y.pow(3)));
  r42.conditions = cond;
  inst.add_relation(r42);
  add_pt_checks(inst, id, {"Y0"});
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 6});
  return inst;
}

AlgebraInstance hahn_operators(const InstanceOptions& o) {
  AlgebraInstance inst("hahn", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("r", std::to_string(o.r));
  inst.set_parameter("deformation", o.gamma.name + "," + o.gamma.name);
  add_two_su2_block(inst, o.gamma, o.gamma, o);
  add_higgs_scalars(inst, o);
  const ScalarExpr w = o.gamma.w, s = sym(Sym::s), g = o.gamma.g;
  inst.define("H1", (F("Hp") + F("Hm")) / S(2), "first real component of the Higgs ladders");
  inst.define("H2", (F("Hp") - F("Hm")) / S(ScalarExpr(2) * kI), "second real component of the Higgs ladders");
  inst.define("T1", F("H1") + S(s / w) * F("H0").pow(2), "Hahn generator 1");
  inst.define("T2", F("H0"), "Hahn generator 2");
  inst.define("T3", S(-kI) * F("H2"), "Hahn generator 3");
  for (const auto& l : {"T1", "T2", "T3"}) inst.add_generator(l);
  Formula T1 = F("T1"), T2 = F("T2"), T3 = F("T3");
  std::vector<Formula> cond{F("CJ") - F("CK")};
  inst.add_relation(equation("hahn.first", "[T1, T2] = w0 T3", comm(T1, T2), S(w) * T3));
  inst.add_relation(equation("hahn.second", "[T2, T3] = s T2^2 - w0 T1", comm(T2, T3), S(s) * T2.pow(2) - S(w) * T1));
  RelationSpec third = equation(
      "hahn.third", "[T3, T1] = 2(s^2/(8 w0^2) + U) w0 T2 + s {T1, T2} + (2 s^2 gamma^2 / w0^3) T2^3", comm(T3, T1),
      S(2) * (S(s * s / (ScalarExpr(8) * w * w)) + F("U")) * S(w) * T2 + S(s) * anti(T1, T2) +
          S(ScalarExpr(2) * s * s * g * g / w.pow(3)) * T2.pow(3));
  third.conditions = cond;
  inst.add_relation(third);
  inst.add_relation(equation("hahn.T2_is_H0", "T2 = H0", T2, F("H0")));
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 1}}, 5});
  return inst;
}

AlgebraInstance higgs_hamiltonians(const InstanceOptions& o) {
  AlgebraInstance inst("hamiltonians", 4);
  inst.set_parameter("p", std::to_string(o.p));
  inst.set_parameter("q", std::to_string(o.q));
  inst.set_parameter("r", std::to_string(o.r));
  inst.set_parameter("deformation", o.gamma.name);
  const int k = 2 * (o.p + o.q);
  const ScalarExpr w = o.gamma.w;
  add_two_su2_block(inst, o.gamma, o.gamma, o);
  const ScalarExpr lam = sym(Sym::lam0) * w.pow(-(k - o.r - 2));
  inst.define("U", S(lam / (ScalarExpr(4) * w * w)) * (F("J0") + F("K0")).pow(2) + S(lam) * (F("CJ") + S(Q(1, 8))),
              "Higgs Hamiltonian with lam = lam0 / w0^(2(p+q)-r-2)");
  inst.add_casimir("U", {"H0", "Hp", "Hm"}, "hamiltonians.U");
  inst.add_relation(equation("hamiltonians.U.hermiticity", "U is self-adjoint", F("U").dag(), F("U"), false));
  add_pt_checks(inst, "hamiltonians", {"U"});

  auto beta = beta_coefficients(w);
  inst.add_relation(scalar_identity("hamiltonians.beta2.at_w0_1", "beta2 at w0 = 1 is -4/3",
                                    beta.b2.substitute(Sym::w0, ScalarExpr(1)), Q(-4, 3)));
  // C2/A2 with Del0 eliminated through B2 = 0, compared with the beta polynomial.
  const ScalarExpr one(1), w1 = omega_chain(w, 1);
  const ScalarExpr wp = w.pow(-2 * o.p);
  const ScalarExpr Lam = sym(Sym::Lam), CJ = sym(Sym::CJ);
  const ScalarExpr A1 = -(one + ScalarExpr(2) * w) * wp;
  const ScalarExpr B1 = -(ScalarExpr(2) * Lam - w) * wp;
  const ScalarExpr C1 = ((ScalarExpr(2) * w - one) * Lam * Lam + w * Lam + w * w * CJ) * wp;
  const ScalarExpr A2 = -(one + one / (ScalarExpr(3) * w1)) * A1;
  const ScalarExpr Del = (A1 / ScalarExpr(2) - (one + one / (ScalarExpr(2) * w1)) * B1) / ((one + one / w1) * A1);
  const ScalarExpr C2 = (Del * Del * (one - one / w1) + Del - w1 / ScalarExpr(6)) * A1 + (Q(1, 2) - Del / w1) * B1 -
                        (one + one / w1) * C1;
  inst.add_relation(scalar_identity("hamiltonians.V.from_cubic", "C2/A2 at B2 = 0 equals beta2 Lam^2 + beta1 Lam + beta0",
                                    C2 / A2, beta.b2 * Lam * Lam + beta.b1 * Lam + beta.b0_const + beta.b0_cj * CJ));
  inst.set_box({{{1, 1, 0, 0}, {0, 0, 1, 1}}, 6});
  return inst;
}

LinearVector as_linear(const OperatorExpr& op) {
  LinearVector v;
  for (const auto& [m, c] : op.terms()) v[monomial_str(m, op.modes())] = c;
  return v;
}

LinearVector as_linear(const Mat2& m) {
  LinearVector v;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!m[r][c].is_zero()) v[std::to_string(r) + std::to_string(c)] = m[r][c];
  return v;
}

namespace {

// Solves sum_i x_i e_i = t exactly; empty when t is outside the span.
std::optional<std::vector<ScalarExpr>> solve_span(const std::vector<LinearVector>& e, const LinearVector& t) {
  std::set<std::string> keys;
  for (const auto& v : e)
    for (const auto& [k, c] : v) keys.insert(k);
  for (const auto& [k, c] : t) keys.insert(k);
  const std::size_t n = e.size();
  std::vector<std::vector<ScalarExpr>> rows;
  for (const auto& k : keys) {
    std::vector<ScalarExpr> row(n + 1, ScalarExpr(0));
    for (std::size_t i = 0; i < n; ++i) {
      auto it = e[i].find(k);
      if (it != e[i].end()) row[i] = it->second;
    }
    auto it = t.find(k);
    if (it != t.end()) row[n] = it->second;
    rows.push_back(std::move(row));
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    ScalarExpr inv = ScalarExpr(1) / rows[r][c];
    for (auto& x : rows[r]) x = x * inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c].is_zero()) continue;
      ScalarExpr f = rows[o][c];
      for (std::size_t k = 0; k <= n; ++k) rows[o][k] = rows[o][k] - f * rows[r][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t o = r; o < rows.size(); ++o)
    if (!rows[o][n].is_zero()) return std::nullopt;
  std::vector<ScalarExpr> x(n, ScalarExpr(0));
  for (std::size_t k = 0; k < pivot_col.size(); ++k) x[pivot_col[k]] = rows[k][n];
  return x;
}

}  // namespace

KillingResult killing_from_brackets(const std::vector<std::string>& names, const std::vector<LinearVector>& elements,
                                    const std::vector<std::vector<LinearVector>>& brackets) {
  KillingResult res;
  res.basis = names;
  const std::size_t n = elements.size();
  res.f.assign(n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n, ScalarExpr(0))));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto x = solve_span(elements, brackets[a][b]);
      if (!x) {
        res.residual = "[" + names[a] + ", " + names[b] + "] leaves the span";
        return res;
      }
      res.f[a][b] = *x;
    }
  res.closes = true;
  // (ad_a)_{cb} = f[a][b][c]; g_ab = tr(ad_a ad_b) = sum_{c,d} f[a][d][c] f[b][c][d]
  res.metric.assign(n, std::vector<ScalarExpr>(n, ScalarExpr(0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<ScalarExpr> parts;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) parts.push_back(res.f[a][d][c] * res.f[b][c][d]);
      res.metric[a][b] = ScalarExpr::sum(parts);
    }
  return res;
}

KillingResult killing_metric(const AlgebraInstance& inst, const std::vector<std::string>& basis) {
  std::vector<LinearVector> el;
  std::vector<OperatorExpr> ops;
  for (const auto& l : basis) {
    ops.push_back(inst.op(l));
    el.push_back(as_linear(ops.back()));
  }
  std::vector<std::vector<LinearVector>> br(basis.size(), std::vector<LinearVector>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) br[a][b] = as_linear(commutator(ops[a], ops[b]));
  return killing_from_brackets(basis, el, br);
}

KillingResult killing_metric(const std::array<Mat2, 3>& basis, const std::vector<std::string>& names) {
  std::vector<LinearVector> el;
  for (const auto& m : basis) el.push_back(as_linear(m));
  std::vector<std::vector<LinearVector>> br(3, std::vector<LinearVector>(3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) br[a][b] = as_linear(mat_comm(basis[a], basis[b]));
  return killing_from_brackets(names, el, br);
}

std::string Signature::str() const {
  std::ostringstream o;
  o << "(+" << positive << ", -" << negative << ", 0x" << zero;
  if (complex) o << ", complex " << complex;
  o << ")";
  return o.str();
}

Signature metric_signature(const std::vector<std::vector<ScalarExpr>>& g, const Bindings& b) {
  const int n = static_cast<int>(g.size());
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = g[r][c].eval(b);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  Signature s;
  for (int k = 0; k < n; ++k) {
    auto v = es.eigenvalues()(k);
    s.eigenvalues.push_back(v);
    const double scale = std::max(1.0, m.norm());
    if (std::abs(v.imag()) > 1e-9 * scale) ++s.complex;
    else if (v.real() > 1e-9 * scale) ++s.positive;
    else if (v.real() < -1e-9 * scale) ++s.negative;
    else ++s.zero;
  }
  return s;
}

std::vector<std::string> instance_names() {
  return {"su2g",     "su11m",      "quadratic",           "cubic", "two-su2",     "higgs",
          "higgs-opposite", "su2-su11", "higgs-su11", "higgs-su11-opposite", "hahn", "hamiltonians"};
}

AlgebraInstance make_instance(const std::string& name, const InstanceOptions& o) {
  if (name == "su2g") return js_su2_deformed(o);
  if (name == "su11m") return js_su11_deformed(o);
  if (name == "quadratic") return fuse_boson_quadratic(o);
  if (name == "cubic") return fuse_boson_cubic(o);
  if (name == "two-su2") return fuse_two_su2(o);
  if (name == "higgs") return higgs_two_su2(o, 1);
  if (name == "higgs-opposite") return higgs_two_su2(o, -1);
  if (name == "su2-su11") return fuse_su2_su11(o);
  if (name == "higgs-su11") return higgs_su2_su11(o, 1);
  if (name == "higgs-su11-opposite") return higgs_su2_su11(o, -1);
  if (name == "hahn") return hahn_operators(o);
  if (name == "hamiltonians") return higgs_hamiltonians(o);
  throw Error("unknown instance '" + name + "'");
}

}  // namespace bosonalg
