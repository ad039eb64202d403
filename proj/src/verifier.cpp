#include "bosonalg/verifier.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace bosonalg {

namespace {

constexpr double kAgreeTol = 1e-9;
constexpr double kNullTol = 1e-8;

using Clock = std::chrono::steady_clock;

std::string cut(const std::string& s, std::size_t n) {
  if (s.size() <= n) return s;
  return s.substr(0, n) + " ...";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool within(double diff, double scale) { return diff <= kAgreeTol * std::max(1.0, scale); }

std::vector<long> max_peaks(const std::vector<std::vector<long>>& all, std::size_t n) {
  std::vector<long> p(n, 0);
  for (const auto& v : all)
    for (std::size_t k = 0; k < n; ++k) p[k] = std::max(p[k], v[k]);
  return p;
}

long dot(const std::vector<long>& w, const Occupation& n) {
  long s = 0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * n[k];
  return s;
}

// Safe columns grouped by the values of the given charges; each group keeps
// the full list of box states with those charge values as row support.
struct ChargeClass {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

std::vector<ChargeClass> charge_classes(const FockSector& box, const std::vector<std::vector<long>>& charges,
                                        const std::vector<std::size_t>& safe) {
  std::map<std::vector<long>, ChargeClass> groups;
  auto key = [&](const Occupation& n) {
    std::vector<long> k;
    for (const auto& q : charges) k.push_back(dot(q, n));
    return k;
  };
  for (std::size_t r = 0; r < box.dim(); ++r) groups[key(box.basis[r])].rows.push_back(r);
  for (std::size_t c : safe) groups[key(box.basis[c])].cols.push_back(c);
  std::vector<ChargeClass> out;
  for (auto& [k, g] : groups)
    if (!g.cols.empty()) out.push_back(std::move(g));
  return out;
}

Eigen::MatrixXcd dense_block(const SparseMatrix& m, const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols) {
  Eigen::MatrixXcd d(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) d(i, j) = m.coeff(int(rows[i]), int(cols[j]));
  return d;
}

// Orthonormal basis (dim x k) of safe-column combinations annihilated by every condition.
Eigen::MatrixXcd condition_states(const std::vector<SparseMatrix>& conds, const FockSector& box,
                                  const std::vector<std::vector<long>>& charges, const std::vector<std::size_t>& safe) {
  std::vector<Eigen::VectorXcd> basis;
  for (const auto& cls : charge_classes(box, charges, safe)) {
    const Eigen::Index k = Eigen::Index(cls.cols.size());
    Eigen::MatrixXcd stack(Eigen::Index(cls.rows.size() * conds.size()), k);
    for (std::size_t c = 0; c < conds.size(); ++c)
      stack.middleRows(Eigen::Index(c * cls.rows.size()), Eigen::Index(cls.rows.size())) =
          dense_block(conds[c], cls.rows, cls.cols);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      double s = j < sv.size() ? sv(j) : 0.0;
      if (s > kNullTol * std::max(1.0, top)) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(box.dim()));
      for (Eigen::Index i = 0; i < k; ++i) v(Eigen::Index(cls.cols[std::size_t(i)])) = svd.matrixV()(i, j);
      basis.push_back(std::move(v));
    }
  }
  Eigen::MatrixXcd out(Eigen::Index(box.dim()), Eigen::Index(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) out.col(Eigen::Index(j)) = basis[j];
  return out;
}

double max_col_norm(const Eigen::MatrixXcd& m) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) best = std::max(best, m.col(c).norm());
  return best;
}

SparseMatrix pt_matrix(const SparseMatrix& m, const FockSector& box, std::optional<int> mode) {
  auto sign = [&](std::size_t k) {
    const Occupation& n = box.basis[k];
    long e = 0;
    if (mode) e = n[std::size_t(*mode)];
    else
      for (int v : n) e += v;
    return e % 2 ? -1.0 : 1.0;
  };
  SparseMatrix out = m;
  for (int c = 0; c < out.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(out, c); it; ++it)
      it.valueRef() = std::conj(it.value()) * sign(std::size_t(it.row())) * sign(std::size_t(it.col()));
  return out;
}

std::vector<FockSector> plan_sectors(const AlgebraInstance& inst, const VerifyOptions& o) {
  std::vector<FockSector> out;
  const BoxPlan& plan = inst.box();
  for (int s = 0; s < o.sectors; ++s) {
    long bound = plan.bound - s * o.sector_step;
    if (bound < 1) break;
    out.push_back(weighted_box(inst.modes(), plan.weights, std::vector<long>(plan.weights.size(), bound)));
  }
  return out;
}

std::string decide(const RelationResult& r, bool conditional) {
  if (r.claim == "nonzero") return r.exact_zero ? "finding" : "confirmed";
  if (r.exact_zero) return "confirmed";
  if (!conditional) return "finding";
  if (r.numeric.empty()) return "finding";
  std::size_t states = 0;
  bool holds = true;
  for (const auto& s : r.numeric) {
    states += s.condition_states;
    if (s.condition_states && !within(s.residual_norm, s.scale)) holds = false;
  }
  if (!states) return "untestable";
  return holds ? "confirmed on condition states" : "finding on condition states";
}

}  // namespace

OracleBinding oracle_binding(double gamma, double mu) {
  OracleBinding o;
  o.label = "gamma=" + format_double(gamma) + ",mu=" + format_double(mu);
  Bindings& b = o.values;
  b.set_deformation(Sym::gamma, gamma);
  b.set_deformation(Sym::mu, mu);
  const double theta = std::asin(gamma);
  b.set(Sym::ch, std::cos(theta / 2)).set(Sym::sh, std::sin(theta / 2));
  b.set(Sym::cphi, std::cos(1.0)).set(Sym::sphi, std::sin(1.0));
  b.set(Sym::s, 0.7).set(Sym::s0, 0.9).set(Sym::s1, 1.1).set(Sym::sp, 0.8);
  b.set(Sym::lam, 0.45).set(Sym::lam0, 1.3).set(Sym::lam1, 0.6).set(Sym::lamp, 0.5).set(Sym::x, 0.4);
  b.set(Sym::Lam, 0.35).set(Sym::Del, 0.25).set(Sym::CJ, 0.55).set(Sym::CR, 0.65);
  return o;
}

std::vector<OracleBinding> default_oracle_bindings() { return {oracle_binding(0.3, 0.5), oracle_binding(0.6, 0.2)}; }

RelationResult check_relation(const AlgebraInstance& inst, const RelationSpec& r, const VerifyOptions& o) {
  const auto t0 = Clock::now();
  RelationResult out;
  out.instance = inst.name();
  out.id = r.id;
  out.title = r.title;
  out.note = r.note;
  out.claim = r.claim_zero ? "zero" : "nonzero";
  const bool pt = r.kind == RelationSpec::Kind::pt_invariance;
  out.kind = pt ? "pt" : "equation";
  for (const auto& c : r.conditions) out.conditions.push_back(c.str());

  OperatorExpr residual = pt ? pt_transform(inst.op(r.pt_label), r.pt_mode) - inst.op(r.pt_label)
                             : inst.evaluate(r.lhs - r.rhs);
  out.exact_zero = residual.is_zero();
  out.residual_terms = residual.terms().size();
  out.residual = cut(residual.str(), o.residual_chars);

  if (o.numeric) {
    const auto lookup = inst.lookup();
    std::vector<OperatorExpr> cond_ops;
    for (const auto& c : r.conditions) cond_ops.push_back(inst.evaluate(c));
    std::vector<std::vector<long>> charges;
    if (!r.conditions.empty()) {
      std::vector<OperatorExpr> span = cond_ops;
      span.push_back(inst.evaluate(r.lhs));
      span.push_back(inst.evaluate(r.rhs));
      charges = conserved_charges(span);
    }
    for (const FockSector& box : plan_sectors(inst, o)) {
      std::vector<std::size_t> safe;
      if (pt) {
        for (std::size_t c = 0; c < box.dim(); ++c) safe.push_back(c);
      } else {
        std::vector<std::vector<long>> peaks{formula_peaks(r.lhs, lookup, box.weights),
                                             formula_peaks(r.rhs, lookup, box.weights)};
        for (const auto& c : r.conditions) peaks.push_back(formula_peaks(c, lookup, box.weights));
        safe = safe_columns(box, max_peaks(peaks, box.weights.size()));
      }
      for (const auto& b : o.bindings) {
        NumericSample s;
        s.binding = b.label;
        s.sector = box.describe();
        s.columns = safe.size();
        SparseMatrix num, sym_res = represent(residual, box, b.values);
        if (pt) {
          SparseMatrix m = represent(inst.op(r.pt_label), box, b.values);
          num = pt_matrix(m, box, r.pt_mode) - m;
          s.scale = column_norm(m, safe);
        } else {
          MatrixEvaluator ev(box, b.values, lookup);
          SparseMatrix l = ev.eval(r.lhs), rh = ev.eval(r.rhs);
          num = l - rh;
          s.scale = std::max(column_norm(l, safe), column_norm(rh, safe));
          if (!r.conditions.empty()) {
            std::vector<SparseMatrix> conds;
            for (const auto& c : r.conditions) conds.push_back(ev.eval(c));
            Eigen::MatrixXcd v = condition_states(conds, box, charges, safe);
            s.condition_states = std::size_t(v.cols());
            Eigen::MatrixXcd nv = num * v, sv = sym_res * v;
            s.residual_norm = max_col_norm(nv);
            s.symbolic_norm = max_col_norm(sv);
            s.difference = max_col_norm(nv - sv);
            // agreement is also required on the full safe block
            double full = column_diff(num, sym_res, safe);
            s.agrees = within(s.difference, s.scale) && within(full, s.scale);
            out.numeric.push_back(s);
            continue;
          }
        }
        s.residual_norm = column_norm(num, safe);
        s.symbolic_norm = column_norm(sym_res, safe);
        s.difference = column_diff(num, sym_res, safe);
        s.agrees = within(s.difference, s.scale);
        out.numeric.push_back(s);
      }
    }
    for (const auto& s : out.numeric) out.oracle_ok = out.oracle_ok && s.agrees;
  }
  out.verdict = decide(out, !r.conditions.empty());
  out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

bool SuiteReport::oracle_ok() const {
  return std::all_of(results.begin(), results.end(), [](const RelationResult& r) { return r.oracle_ok; });
}

std::size_t SuiteReport::count(const std::string& verdict) const {
  return std::size_t(std::count_if(results.begin(), results.end(),
                                   [&](const RelationResult& r) { return r.verdict == verdict; }));
}

const RelationResult* SuiteReport::find(const std::string& id) const {
  for (const auto& r : results)
    if (r.id == id) return &r;
  return nullptr;
}

nlohmann::ordered_json SuiteReport::json(bool timing) const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["id"] = r.id;
    e["anchor"] = r.title;
    e["instance"] = r.instance;
    e["kind"] = r.kind;
    e["claim"] = r.claim;
    e["status"] = r.status();
    e["verdict"] = r.verdict;
    e["residual"] = r.residual;
    e["residual_terms"] = r.residual_terms;
    if (!r.conditions.empty()) e["conditions"] = r.conditions;
    nlohmann::ordered_json norms = nlohmann::ordered_json::array();
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : r.numeric) {
      norms.push_back(s.residual_norm);
      nlohmann::ordered_json x;
      x["binding"] = s.binding;
      x["sector"] = s.sector;
      x["columns"] = s.columns;
      x["residual_norm"] = s.residual_norm;
      x["symbolic_norm"] = s.symbolic_norm;
      x["difference"] = s.difference;
      x["scale"] = s.scale;
      if (!r.conditions.empty()) x["condition_states"] = s.condition_states;
      x["agrees"] = s.agrees;
      samples.push_back(x);
    }
    e["numeric_norms"] = norms;
    e["numeric"] = samples;
    e["oracle_ok"] = r.oracle_ok;
    if (!r.note.empty()) e["note"] = r.note;
    if (timing) e["seconds"] = r.seconds;
    rs.push_back(e);
  }
  j["results"] = rs;
  nlohmann::ordered_json summary;
  for (const char* v : {"confirmed", "confirmed on condition states", "finding", "finding on condition states",
                        "untestable"})
    summary[v] = count(v);
  summary["oracle_ok"] = oracle_ok();
  j["summary"] = summary;
  return j;
}

std::vector<std::string> suite_names() {
  return {"pauli", "su2g", "su11m", "quadratic", "cubic", "higgs-2su2", "higgs-su2su11", "hahn", "hamiltonians",
          "pt-all"};
}

namespace {

std::string canonical_suite(const std::string& s) {
  if (s == "su2γ" || s == "su2gamma") return "su2g";
  if (s == "su11μ" || s == "su11mu") return "su11m";
  return s;
}

}  // namespace

std::vector<AlgebraInstance> suite_instances(const std::string& suite_in, const InstanceOptions& o) {
  const std::string suite = canonical_suite(suite_in);
  if (suite == "pauli") return {};
  if (suite == "su2g") return {js_su2_deformed(o)};
  if (suite == "su11m") return {js_su11_deformed(o)};
  if (suite == "quadratic") return {fuse_boson_quadratic(o)};
  if (suite == "cubic") return {fuse_boson_cubic(o)};
  if (suite == "higgs-2su2") return {fuse_two_su2(o), higgs_two_su2(o, 1), higgs_two_su2(o, -1)};
  if (suite == "higgs-su2su11") return {fuse_su2_su11(o), higgs_su2_su11(o, 1), higgs_su2_su11(o, -1)};
  if (suite == "hahn") return {hahn_operators(o)};
  if (suite == "hamiltonians") return {higgs_hamiltonians(o)};
  if (suite == "pt-all") {
    std::vector<AlgebraInstance> v{js_su2_deformed(o), fuse_boson_quadratic(o), fuse_boson_cubic(o),
                                   higgs_two_su2(o, 1)};
    for (auto& inst : v) {
      auto& rel = inst.relations();
      rel.erase(std::remove_if(rel.begin(), rel.end(),
                               [](const RelationSpec& r) { return r.kind != RelationSpec::Kind::pt_invariance; }),
                rel.end());
    }
    return v;
  }
  throw Error("unknown suite '" + suite_in + "'");
}

std::string options_description(const InstanceOptions& o) {
  return "p=" + std::to_string(o.p) + ",q=" + std::to_string(o.q) + ",r=" + std::to_string(o.r) +
         ",gamma=" + o.gamma.name + ",mu=" + o.mu.name;
}

SuiteReport run_instance(const AlgebraInstance& inst, const VerifyOptions& v) {
  SuiteReport rep;
  rep.suite = inst.name();
  rep.params = inst.parameters();
  for (const auto& r : inst.relations()) rep.results.push_back(check_relation(inst, r, v));
  return rep;
}

SuiteReport run_suite(const std::string& suite_in, const InstanceOptions& o, const VerifyOptions& v) {
  const std::string suite = canonical_suite(suite_in);
  SuiteReport rep;
  rep.suite = suite;
  auto symbolic = [](const Deformation& d) { return d.name == "gamma" || d.name == "mu" ? "symbolic" : d.name; };
  rep.params["gamma"] = symbolic(o.gamma);
  rep.params["mu"] = symbolic(o.mu);
  rep.params["p"] = std::to_string(o.p);
  rep.params["q"] = std::to_string(o.q);
  rep.params["r"] = std::to_string(o.r);
  if (suite == "pauli") {
    rep.results = pauli_checks(v);
    return rep;
  }
  for (const auto& inst : suite_instances(suite, o))
    for (const auto& r : inst.relations()) rep.results.push_back(check_relation(inst, r, v));
  return rep;
}

namespace {

Eigen::Matrix2cd to_eigen(const Mat2& m, const Bindings& b) {
  Eigen::Matrix2cd e;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) e(r, c) = m[r][c].eval(b);
  return e;
}

Eigen::Matrix2cd ecomm(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return a * b - b * a; }

Eigen::Matrix2cd epauli(int m) {
  Eigen::Matrix2cd p;
  if (m == 1) p << 0, 1, 1, 0;
  if (m == 2) p << 0, Cplx(0, -1), Cplx(0, 1), 0;
  if (m == 3) p << 1, 0, 0, -1;
  return p;
}

struct MatrixCheck {
  std::string id;
  std::string title;
  bool claim_zero = true;
  Mat2 exact;
  // numeric residual from the trigonometric construction at deformation g
  std::function<Eigen::Matrix2cd(const std::array<Eigen::Matrix2cd, 3>&, double)> numeric;
  std::string note;
};

RelationResult run_matrix_check(const MatrixCheck& m, const VerifyOptions& v) {
  const auto t0 = Clock::now();
  RelationResult r;
  r.instance = "pauli";
  r.id = m.id;
  r.title = m.title;
  r.kind = "matrix";
  r.claim = m.claim_zero ? "zero" : "nonzero";
  r.exact_zero = mat_is_zero(m.exact);
  r.residual = mat_str(m.exact);
  r.note = m.note;
  for (const auto& row : m.exact)
    for (const auto& e : row) r.residual_terms += e.is_zero() ? 0 : 1;
  if (v.numeric && m.numeric) {
    for (const auto& b : v.bindings) {
      const double g = b.values.get(Sym::gamma)->real();
      Eigen::Matrix2cd num = m.numeric(deformed_pauli_numeric(g), g);
      Eigen::Matrix2cd ex = to_eigen(m.exact, b.values);
      NumericSample s;
      s.binding = b.label;
      s.sector = "C^2";
      s.columns = 2;
      s.residual_norm = num.norm();
      s.symbolic_norm = ex.norm();
      s.difference = (num - ex).norm();
      s.scale = 1.0;
      s.agrees = within(s.difference, s.scale);
      r.numeric.push_back(s);
      r.oracle_ok = r.oracle_ok && s.agrees;
    }
  }
  r.verdict = decide(r, false);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<RelationResult> pauli_checks(const VerifyOptions& v) {
  const Deformation G = Deformation::gamma();
  const ScalarExpr I = imag(), w = G.w, g = G.g;
  const auto s = deformed_pauli(G);
  const auto t = deformed_tau(G);
  const auto u = deformed_pauli(Deformation::undeformed());
  const auto d = pauli_from_dyads();
  const Mat2 half = {{{ScalarExpr::rational(1, 2), ScalarExpr(0)}, {ScalarExpr(0), ScalarExpr::rational(1, 2)}}};
  auto halfp = [&](int m) { return mat_mul(half, pauli(m)); };
  std::vector<MatrixCheck> checks;

  for (int m = 1; m <= 3; ++m)
    checks.push_back({"pauli.dyads.sigma" + std::to_string(m), "dyad sum with structure signs gives sigma_" +
                                                                   std::to_string(m) + " = Pauli/2",
                      true, mat_sub(d[m - 1], halfp(m)), nullptr, ""});
  for (int m = 1; m <= 3; ++m)
    checks.push_back({"pauli.trace.sigma" + std::to_string(m), "deformed sigma_" + std::to_string(m) + " is traceless",
                      true, {{{mat_trace(s[m - 1]), ScalarExpr(0)}, {ScalarExpr(0), ScalarExpr(0)}}},
                      [m](const std::array<Eigen::Matrix2cd, 3>& n, double) {
                        Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
                        z(0, 0) = n[m - 1].trace();
                        return z;
                      },
                      ""});
  for (int m = 1; m <= 3; ++m)
    checks.push_back({"pauli.limit.sigma" + std::to_string(m), "sigma_" + std::to_string(m) + " at gamma = 0 is Pauli/2",
                      true, mat_sub(u[m - 1], halfp(m)), nullptr, ""});
  // closed forms
  const Mat2 c1 = mat_scale(ScalarExpr::rational(1, 2), mat_sub(pauli(1), mat_scale(I * g, pauli(3))));
  const Mat2 c3 = mat_scale(ScalarExpr::rational(1, 2), mat_add(pauli(3), mat_scale(I * g, pauli(1))));
  checks.push_back({"pauli.closed_form.sigma1", "sigma_1 = (X - i gamma Z)/2", true, mat_sub(s[0], c1),
                    [](const std::array<Eigen::Matrix2cd, 3>& n, double gg) {
                      return Eigen::Matrix2cd(n[0] - 0.5 * (epauli(1) - Cplx(0, gg) * epauli(3)));
                    },
                    ""});
  checks.push_back({"pauli.closed_form.sigma2", "sigma_2 = Y/2", true, mat_sub(s[1], halfp(2)),
                    [](const std::array<Eigen::Matrix2cd, 3>& n, double) {
                      return Eigen::Matrix2cd(n[1] - 0.5 * epauli(2));
                    },
                    ""});
  checks.push_back({"pauli.closed_form.sigma3", "sigma_3 = (Z + i gamma X)/2", true, mat_sub(s[2], c3),
                    [](const std::array<Eigen::Matrix2cd, 3>& n, double gg) {
                      return Eigen::Matrix2cd(n[2] - 0.5 * (epauli(3) + Cplx(0, gg) * epauli(1)));
                    },
                    ""});
  // brackets with the deformation factor on the bracket that returns sigma_2
  static constexpr int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  for (const auto& c : cyc) {
    const int a = c[0], b = c[1], k = c[2];
    const ScalarExpr f = k == 2 ? I * w * w : I;
    const std::string id = "pauli.bracket." + std::to_string(a) + std::to_string(b);
    checks.push_back({id,
                      "[sigma_" + std::to_string(a) + ", sigma_" + std::to_string(b) + "] = i" +
                          (k == 2 ? " (1 - gamma^2)" : "") + " sigma_" + std::to_string(k),
                      true, mat_sub(mat_comm(s[a - 1], s[b - 1]), mat_scale(f, s[k - 1])),
                      [a, b, k](const std::array<Eigen::Matrix2cd, 3>& n, double gg) {
                        Cplx ff = k == 2 ? Cplx(0, 1 - gg * gg) : Cplx(0, 1);
                        return Eigen::Matrix2cd(ecomm(n[a - 1], n[b - 1]) - ff * n[k - 1]);
                      },
                      k == 2 ? "the deformation factor sits on the bracket whose result is sigma_2" : ""});
  }
  // undeformed bracket on sigma_2 as a contrast
  checks.push_back({"pauli.bracket.31.undeformed", "[sigma_3, sigma_1] = i sigma_2 (no deformation factor)", false,
                    mat_sub(mat_comm(s[2], s[0]), mat_scale(I, s[1])),
                    [](const std::array<Eigen::Matrix2cd, 3>& n, double) {
                      return Eigen::Matrix2cd(ecomm(n[2], n[0]) - Cplx(0, 1) * n[1]);
                    },
                    ""});
  // tau brackets
  const std::array<Mat2, 3> tr{mat_scale(-I, t[2]), mat_scale(I, t[0]), mat_scale(I * w * w, t[1])};
  for (int c = 0; c < 3; ++c) {
    const int a = cyc[c][0], b = cyc[c][1];
    const std::string id = "pauli.tau_bracket." + std::to_string(a) + std::to_string(b);
    const ScalarExpr f = c == 0 ? -I : (c == 1 ? I : I * w * w);
    const std::string ft = c == 0 ? "-i" : (c == 1 ? "i" : "i w0^2");
    checks.push_back({id,
                      "[tau_" + std::to_string(a) + ", tau_" + std::to_string(b) + "] = " + ft + " tau_" +
                          std::to_string(cyc[c][2]),
                      true, mat_sub(mat_comm(t[a - 1], t[b - 1]), tr[c]),
                      [a, b, c](const std::array<Eigen::Matrix2cd, 3>& n, double gg) {
                        std::array<Eigen::Matrix2cd, 3> tn{Cplx(0, 1) * n[0], Cplx(0, 1) * n[1], n[2]};
                        Cplx ff = c == 0 ? Cplx(0, -1) : (c == 1 ? Cplx(0, 1) : Cplx(0, 1 - gg * gg));
                        return Eigen::Matrix2cd(ecomm(tn[a - 1], tn[b - 1]) - ff * tn[cyc[c][2] - 1]);
                      },
                      ""});
  }
  // hermiticity
  for (int m = 1; m <= 3; ++m)
    checks.push_back({"pauli.hermiticity.sigma" + std::to_string(m),
                      "sigma_" + std::to_string(m) + " is self-adjoint", m == 2,
                      mat_sub(s[m - 1], mat_adjoint(s[m - 1])),
                      [m](const std::array<Eigen::Matrix2cd, 3>& n, double) {
                        return Eigen::Matrix2cd(n[m - 1] - n[m - 1].adjoint());
                      },
                      ""});

  std::vector<RelationResult> out;
  for (const auto& c : checks) out.push_back(run_matrix_check(c, v));

  // biorthogonality for general theta and phi
  BiorthogonalSystem bs = biorthogonal_system();
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const auto t0 = Clock::now();
      RelationResult r;
      r.instance = "pauli";
      r.id = "pauli.biorthogonal." + std::to_string(j + 1) + std::to_string(k + 1);
      r.title = "<phi_" + std::to_string(j + 1) + "|chi_" + std::to_string(k + 1) + "> = " + (j == k ? "w0" : "0");
      r.kind = "matrix";
      r.claim = "zero";
      ScalarExpr res = bs.pairing(j, k) - (j == k ? w : ScalarExpr(0));
      r.exact_zero = res.is_zero();
      r.residual = res.str();
      r.residual_terms = res.is_zero() ? 0 : 1;
      if (v.numeric)
        for (const auto& b : v.bindings) {
          const double th = std::asin(b.values.get(Sym::gamma)->real());
          const double ph = 2.0;
          Eigen::Matrix2cd T = std::cos(th / 2) * Eigen::Matrix2cd::Identity() +
                               std::sin(th / 2) * (std::cos(ph / 2) * epauli(1) - std::sin(ph / 2) * epauli(2));
          Eigen::Matrix2cd L = std::cos(th) * T.inverse().adjoint();
          Eigen::Vector2cd uj, uk;
          uj << 1, (j == 0 ? 1 : -1);
          uk << 1, (k == 0 ? 1 : -1);
          Cplx pair = (L * uj).dot(T * uk) / 2.0;
          Cplx num = pair - (j == k ? std::cos(th) : 0.0);
          NumericSample s;
          s.binding = b.label;
          s.sector = "C^2";
          s.columns = 1;
          s.residual_norm = std::abs(num);
          s.symbolic_norm = std::abs(res.eval(b.values));
          s.difference = std::abs(num - res.eval(b.values));
          s.scale = 1.0;
          s.agrees = within(s.difference, s.scale);
          r.numeric.push_back(s);
          r.oracle_ok = r.oracle_ok && s.agrees;
        }
      r.verdict = decide(r, false);
      r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      out.push_back(r);
    }
  return out;
}

nlohmann::ordered_json structure_table(const KillingResult& k) {
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  const std::size_t n = k.basis.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (k.f.empty() || k.f[a][b][c].is_zero()) continue;
        nlohmann::ordered_json e;
        e["bracket"] = "[" + k.basis[a] + ", " + k.basis[b] + "]";
        e["element"] = k.basis[c];
        e["coefficient"] = k.f[a][b][c].str();
        t.push_back(e);
      }
  return t;
}

nlohmann::ordered_json instance_json(const AlgebraInstance& inst) {
  using J = nlohmann::ordered_json;
  J j;
  j["name"] = inst.name();
  j["modes"] = inst.modes();
  J params = J::object();
  for (const auto& [k, v] : inst.parameters()) params[k] = v;
  j["parameters"] = params;
  j["generators"] = inst.generators();
  j["definitions"] = J::array();
  for (const auto& d : inst.definitions()) {
    J e;
    e["label"] = d.label;
    if (d.formula) e["formula"] = d.formula->str();
    e["operator"] = d.value.str();
    if (!d.description.empty()) e["description"] = d.description;
    j["definitions"].push_back(e);
  }
  j["relations"] = J::array();
  for (const auto& r : inst.relations()) {
    J e;
    e["id"] = r.id;
    e["title"] = r.title;
    if (r.kind == RelationSpec::Kind::pt_invariance) {
      e["kind"] = "pt";
      e["label"] = r.pt_label;
      e["mode"] = r.pt_mode ? J(*r.pt_mode + 1) : J("global");
    } else {
      e["kind"] = "equation";
      e["lhs"] = r.lhs.str();
      e["rhs"] = r.rhs.str();
    }
    e["claim"] = r.claim_zero ? "zero" : "nonzero";
    if (!r.conditions.empty()) {
      J c = J::array();
      for (const auto& f : r.conditions) c.push_back(f.str());
      e["conditions"] = c;
    }
    if (!r.note.empty()) e["note"] = r.note;
    j["relations"].push_back(e);
  }
  j["casimirs"] = J::array();
  for (const auto& c : inst.casimirs()) j["casimirs"].push_back({{"label", c.label}, {"centralizes", c.centralizes}});
  j["box"] = {{"weights", inst.box().weights}, {"bound", inst.box().bound}};
  return j;
}

nlohmann::ordered_json killing_report(int p, double gamma) {
  using J = nlohmann::ordered_json;
  Bindings b;
  b.set_deformation(Sym::gamma, gamma);
  auto block = [&](const KillingResult& k) {
    J e;
    e["basis"] = k.basis;
    e["closes"] = k.closes;
    if (!k.closes) {
      e["residual"] = k.residual;
      return e;
    }
    e["structure_constants"] = structure_table(k);
    J g = J::array();
    for (const auto& row : k.metric) {
      J r = J::array();
      for (const auto& x : row) r.push_back(x.str());
      g.push_back(r);
    }
    e["metric"] = g;
    Signature s = metric_signature(k.metric, b);
    e["signature"] = {{"positive", s.positive}, {"negative", s.negative}, {"zero", s.zero}, {"complex", s.complex}};
    J ev = J::array();
    for (auto v : s.eigenvalues) ev.push_back(J::array({v.real(), v.imag()}));
    e["eigenvalues"] = ev;
    return e;
  };
  InstanceOptions o;
  o.p = p;
  AlgebraInstance su2 = js_su2_deformed(o);
  J j;
  j["p"] = p;
  j["gamma"] = gamma;
  j["ladder"] = block(killing_metric(su2, {"J0", "Jp", "Jm"}));
  j["hermitian_combination"] = block(killing_metric(su2, {"J1", "J2", "J0"}));
  j["pauli"] = block(killing_metric(deformed_pauli(Deformation::gamma()), {"s1", "s2", "s3"}));
  return j;
}

}  // namespace bosonalg
