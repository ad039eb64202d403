#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "bosonalg/spectral.hpp"
#include "bosonalg/verifier.hpp"

using namespace bosonalg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const ScalarExpr I = imag();
const ScalarExpr w = sym(Sym::w0);
const std::vector<const char*> kGammas{"0.1", "0.25", "0.5", "0.75", "0.9"};

const RelationSpec& relation(const AlgebraInstance& inst, const std::string& id) {
  for (const auto& r : inst.relations())
    if (r.id == id) return r;
  throw Error("no relation " + id + " in " + inst.name());
}

bool exact_zero(const AlgebraInstance& inst, const std::string& id) {
  const RelationSpec& r = relation(inst, id);
  return inst.evaluate(r.lhs - r.rhs).is_zero();
}

// Collects failures; the outcome passes when none were recorded.
struct Tally {
  std::vector<std::string> failures;
  std::size_t checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.pass = failures.empty();
    std::ostringstream os;
    os << summary << " (" << checks - failures.size() << "/" << checks << " checks)";
    for (std::size_t k = 0; k < failures.size() && k < 12; ++k) os << (k ? "; " : ": failed ") << failures[k];
    if (failures.size() > 12) os << "; ... " << failures.size() - 12 << " more";
    o.detail = os.str();
    return o;
  }
};

Outcome criterion1() {
  Tally t;
  for (int p : {0, 1, 2}) {
    InstanceOptions o;
    o.p = p;
    AlgebraInstance su2 = js_su2_deformed(o);
    for (const char* id : {"su2g.ladder.plus", "su2g.ladder.minus", "su2g.raise_lower"})
      t.expect(exact_zero(su2, id), std::string(id) + " p=" + std::to_string(p));
  }
  return t.outcome("ladder and raise/lower residuals for p = 0, 1, 2, symbolic gamma");
}

Outcome criterion2() {
  Tally t;
  InstanceOptions o;
  o.gamma = Deformation::undeformed();
  o.mu = Deformation::undeformed();
  AlgebraInstance su2 = js_su2_deformed(o);
  for (const char* id : {"su2g.ladder.plus", "su2g.ladder.minus", "su2g.raise_lower"}) t.expect(exact_zero(su2, id), id);
  // [J+, J-] = 2 J0 literally
  t.expect(commutator(su2.op("Jp"), su2.op("Jm")) == ScalarExpr(2) * su2.op("J0"), "[Jp, Jm] = 2 J0");
  t.expect(dagger(su2.op("J0")) == su2.op("J0"), "J0 hermitian");
  AlgebraInstance su11 = js_su11_deformed(o);
  for (const char* id : {"su11m.ladder.plus", "su11m.ladder.minus", "su11m.raise_lower"})
    t.expect(exact_zero(su11, id), id);
  t.expect(commutator(su11.op("Zp"), su11.op("Zm")) == ScalarExpr(-2) * su11.op("Z0"), "[Zp, Zm] = -2 Z0");
  auto s = deformed_pauli(Deformation::undeformed());
  for (int m = 1; m <= 3; ++m)
    t.expect(mat_is_zero(mat_sub(s[m - 1], mat_scale(ScalarExpr::rational(1, 2), pauli(m)))), "sigma" + std::to_string(m));
  for (int a = 0; a < 3; ++a)
    t.expect(mat_is_zero(mat_sub(mat_comm(s[a], s[(a + 1) % 3]), mat_scale(I, s[(a + 2) % 3]))),
             "[s" + std::to_string(a + 1) + ", s" + std::to_string((a + 1) % 3 + 1) + "]");
  return t.outcome("gamma = mu = 0: su(2), su(1,1) and Pauli brackets exact");
}

Outcome criterion3() {
  Tally t;
  AlgebraInstance su2 = js_su2_deformed();
  for (const char* id : {"su2g.casimir.central.J0", "su2g.casimir.central.Jp", "su2g.casimir.central.Jm",
                         "su2g.casimir.sign_forms"})
    t.expect(exact_zero(su2, id), id);
  AlgebraInstance su11 = js_su11_deformed();
  for (const char* id : {"su11m.casimir_printed.central.Z0", "su11m.casimir_printed.central.Zp",
                         "su11m.casimir_printed.central.Zm", "su11m.casimir_printed.sign_forms"})
    t.expect(exact_zero(su11, id), id);
  bool corrected = true;
  for (const char* id : {"su11m.casimir.central.Z0", "su11m.casimir.central.Zp", "su11m.casimir.central.Zm",
                         "su11m.casimir.sign_forms"})
    corrected = corrected && exact_zero(su11, id);
  Outcome o = t.outcome("C_J and the printed C_Z, symbolic parameters");
  o.detail += corrected ? "; corrected C_Z is central with agreeing sign forms" : "; corrected C_Z also fails";
  return o;
}

Outcome criterion4() {
  Tally t;
  for (int p : {0, 1, 2}) {
    InstanceOptions o;
    o.p = p;
    KillingResult k = killing_metric(js_su2_deformed(o), {"J0", "Jp", "Jm"});
    std::string tag = " p=" + std::to_string(p);
    t.expect(k.closes, "closure" + tag);
    if (!k.closes) continue;
    ScalarExpr gpm = ScalarExpr(4) * w.pow(2 - 2 * p);
    t.expect(k.metric[0][0].equals(ScalarExpr(2) * w * w), "g00" + tag);
    t.expect(k.metric[1][2].equals(gpm) && k.metric[2][1].equals(gpm), "g+-" + tag);
    for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 1}, {2, 2}})
      t.expect(k.metric[a][b].is_zero(), "g" + std::to_string(a) + std::to_string(b) + tag);
  }
  return t.outcome("Killing metric of (J0, J+, J-) equals diag form with g00 = 2 w0^2, g+- = 4 w0^(2-2p)");
}

std::map<std::string, SuiteReport> g_suites;

const SuiteReport& suite(const std::string& name) {
  auto it = g_suites.find(name);
  if (it == g_suites.end()) it = g_suites.emplace(name, run_suite(name)).first;
  return it->second;
}

Outcome criterion5() {
  Tally t;
  AlgebraInstance q = fuse_boson_quadratic();
  t.expect(exact_zero(q, "quad.ladder.plus"), "quad.ladder.plus");
  t.expect(exact_zero(q, "quad.ladder.minus"), "quad.ladder.minus");
  std::size_t confirmed = 0, findings = 0, untestable = 0;
  for (const char* s : {"quadratic", "cubic", "higgs-2su2", "higgs-su2su11", "hahn", "hamiltonians"}) {
    const SuiteReport& r = suite(s);
    for (const auto& x : r.results) {
      t.expect(x.oracle_ok, x.id + " oracle disagreement");
      if (x.verdict.rfind("confirmed", 0) == 0) ++confirmed;
      else if (x.verdict.rfind("finding", 0) == 0) ++findings;
      else ++untestable;
    }
  }
  std::ostringstream os;
  os << "engine and box-matrix oracle agree at gamma 0.3 and 0.6 on every relation; " << confirmed << " confirmed, "
     << findings << " findings, " << untestable << " untestable";
  return t.outcome(os.str());
}

// P_j P_k T with j in the first pair and k in the second; reported only, not part of the verdict.
// Global PT acts as pure T here since every monomial has even degree.
std::string paired_note(const AlgebraInstance& h, std::vector<std::string> labels) {
  int held = 0, total = 0;
  for (const auto& l : labels) {
    OperatorExpr x = h.op(l);
    for (int j : {0, 1})
      for (int k : {2, 3}) {
        ++total;
        held += (pt_transform(pt_transform(pt_transform(x, j), k), std::nullopt) - x).is_zero();
      }
  }
  return "; note: one-mode-per-pair P_j P_k T commutes in " + std::to_string(held) + "/" + std::to_string(total) +
         " cases";
}

Outcome criterion6() {
  Tally t;
  Deformation G = Deformation::gamma();
  for (int p : {0, 1, 2})
    for (int q : {0, 1, 2}) {
      std::string tag = " p=" + std::to_string(p) + ",q=" + std::to_string(q);
      t.expect(omega_pm(G, G, p, q, -1).is_zero(), "Omega-" + tag);
      t.expect(omega_pm(G, G, p, q, 1).equals(ScalarExpr(2) * w.pow(1 - 2 * (p + q))), "Omega+" + tag);
    }
  AlgebraInstance h = higgs_two_su2();
  t.expect(exact_zero(h, "higgs.ladder.plus"), "higgs.ladder.plus");
  t.expect(exact_zero(h, "higgs.ladder.minus"), "higgs.ladder.minus");
  const SuiteReport& r = suite("higgs-2su2");
  for (const char* id : {"higgs.U.central.H0", "higgs.U.central.Hp", "higgs.U.central.Hm"}) {
    const RelationResult* x = r.find(id);
    t.expect(x && x->oracle_ok, std::string(id) + " oracle");
  }
  for (int j = 0; j < 4; ++j) {
    OperatorExpr u = h.op("U");
    t.expect((pt_transform(u, j) - u).is_zero(), "[Pi_T^" + std::to_string(j + 1) + ", U]");
  }
  Outcome o = t.outcome("Higgs specialization: Omega-/Omega+, H ladder, U centrality, partial PT of U");
  o.detail += paired_note(h, {"U", "H0"});
  return o;
}

Outcome criterion7() {
  Tally t;
  for (int m = 1; m <= 12; ++m) {
    CharPoly cp = char_poly(build_j0_matrix(m));
    t.expect(cp.all_roots() && cp.factored, "P_" + std::to_string(m + 1) + " roots");
    for (const char* gs : kGammas) {
      double g = parse_rational(gs).get_d();
      std::string tag = " m=" + std::to_string(m) + ",gamma=" + gs;
      OracleSpectrum o = oracle_spectrum(m, g);
      auto cf = closed_form_spectrum(m, g);
      double diff = 0.0;
      for (int k = 0; k <= m; ++k) diff = std::max(diff, std::abs(o.values[k] - cf[k]));
      t.expect(diff <= 1e-9, "oracle" + tag);
      bool sym = true;
      for (int k = 0; k <= m; ++k) sym = sym && std::abs(o.values[k] + o.values[m - k]) <= 1e-9 && std::abs(cf[k] + cf[m - k]) == 0.0;
      t.expect(sym, "negation symmetry" + tag);
      t.expect(o.max_imag <= 1e-9, "real" + tag);
    }
  }
  return t.outcome("m <= 12: exact recursion roots, dense-oracle match 1e-9, symmetric, real");
}

Outcome criterion8() {
  Tally t;
  for (int m = 1; m <= 12; ++m)
    for (const char* gs : kGammas) {
      GershgorinReport r = gershgorin(m, parse_rational(gs));
      std::string tag = " m=" + std::to_string(m) + ",gamma=" + gs;
      t.expect(r.columns_uniform, "column radii" + tag);
      t.expect(r.disjoint == r.below_threshold, "disjoint iff gamma < 1/m" + tag);
      t.expect(r.contained, "containment" + tag);
    }
  return t.outcome("column radii m*gamma, disjointness iff gamma < 1/m, oracle eigenvalues inside the union");
}

Outcome criterion9() {
  Tally t;
  for (int m = 1; m <= 8; ++m) {
    Tridiagonal tm = build_j0_matrix(m);
    CharPoly cp = char_poly(tm);
    for (const auto& ev : closed_form_spectrum(m)) {
      ScalarExpr x = ScalarExpr(2) * ev;
      bool zero = true;
      for (const auto& r : eigen_residual(tm, x, eigenvector_exact(cp, m, x))) zero = zero && r.is_zero();
      t.expect(zero, "(A - x)v, m=" + std::to_string(m) + ", x=" + x.str());
    }
  }
  std::vector<std::string> mismatches;
  for (int m : {2, 3})
    for (const auto& d : reference_diff(m, 0.6)) {
      if (m == 2) t.expect(d.middle_match, "middle component m=2 state " + d.state);
      for (const auto& c : d.components)
        if (!c.match) mismatches.push_back("m=" + std::to_string(m) + " " + d.state + " k=" + std::to_string(c.k));
    }
  std::string found = "printed-coefficient mismatches reported:";
  for (const auto& s : mismatches) found += " [" + s + "]";
  Outcome o = t.outcome("exact eigenvector residuals m <= 8; printed m = 2 middle components match");
  o.detail += "; " + found;
  return o;
}

Outcome criterion10() {
  Tally t;
  struct Target {
    AlgebraInstance inst;
    std::vector<std::string> labels;
  };
  std::vector<Target> targets{{js_su2_deformed(), {"J0", "CJ"}},
                              {fuse_boson_quadratic(), {"R0", "CR"}},
                              {fuse_boson_cubic(), {"Q0", "CQ"}},
                              {higgs_two_su2(), {"H0", "CH"}}};
  for (const auto& tg : targets)
    for (const auto& l : tg.labels) {
      OperatorExpr x = tg.inst.op(l);
      for (int j = 0; j < tg.inst.modes(); ++j)
        t.expect((pt_transform(x, j) - x).is_zero(), "[Pi_T^" + std::to_string(j + 1) + ", " + l + "]");
    }
  std::string note = paired_note(targets[3].inst, {"H0", "CH"});
  OperatorExpr j0 = targets[0].inst.op("J0");
  t.expect(!(pt_transform(j0, std::nullopt) - j0).is_zero(), "global PT of J0 nonzero");
  for (int m = 1; m <= 12; ++m)
    for (int k = 1; k <= 9; ++k) {
      mpq_class g(k, 10);
      SpectralResult r = spectrum(m, g);
      for (const auto& s : r.states)
        t.expect(s.pt.label == (m % 2 ? "breaking" : "conforming") && std::abs(s.pt.ratio - double(s.pt.expected)) < 1e-8,
                 "classification m=" + std::to_string(m) + ",gamma=0." + std::to_string(k));
    }
  Outcome o = t.outcome("strict partial PT of J0, R0, Q0, H0 and their Casimirs on every mode; global PT of J0; "
                         "conforming/breaking sweep");
  o.detail += note;
  return o;
}

// Random operators of total degree <= 4 on up to three modes.
OperatorExpr random_operator(std::mt19937& rng, int modes) {
  std::uniform_int_distribution<int> nterms(1, 3), deg(0, 4), mode(0, modes - 1), coef(-3, 3);
  std::bernoulli_distribution dag(0.5), sym_coef(0.3);
  OperatorExpr r(modes);
  for (int t = nterms(rng); t > 0; --t) {
    ModeMonomial mono;
    for (int d = deg(rng); d > 0; --d) {
      int m = mode(rng);
      if (dag(rng)) ++mono.cre[m];
      else ++mono.ann[m];
    }
    ScalarExpr c = ScalarExpr(GaussQ(coef(rng), coef(rng)));
    if (sym_coef(rng)) c = c * sym(Sym::gamma);
    r += OperatorExpr::term(modes, mono, c);
  }
  return r;
}

using Word = std::vector<std::pair<int, bool>>;

Outcome criterion11(unsigned seed) {
  Tally t;
  std::mt19937 rng(seed);
  const int cases = 1000;
  int jac = 0, leib = 0, inv = 0, ccr = 0;
  for (int k = 0; k < cases; ++k) {
    int modes = 1 + k % 3;
    OperatorExpr a = random_operator(rng, modes), b = random_operator(rng, modes), c = random_operator(rng, modes);
    if ((commutator(commutator(a, b), c) + commutator(commutator(b, c), a) + commutator(commutator(c, a), b)).is_zero())
      ++jac;
    if (commutator(a, b * c) == commutator(a, b) * c + b * commutator(a, c)) ++leib;
    if (dagger(dagger(a)) == a && dagger(a * b) == dagger(b) * dagger(a)) ++inv;
  }
  FockSector box = box_sector(3, 6);
  std::vector<ExactMatrix> cre, ann;
  for (int m = 0; m < 3; ++m) {
    cre.push_back(represent_exact(OperatorExpr::create(3, m), box));
    ann.push_back(represent_exact(OperatorExpr::annihilate(3, m), box));
  }
  std::vector<std::size_t> safe;
  for (std::size_t col = 0; col < box.dim(); ++col) {
    const auto& n = box.basis[col];
    if (n[0] <= 2 && n[1] <= 2 && n[2] <= 2) safe.push_back(col);
  }
  std::uniform_int_distribution<int> len(1, 4), mode(0, 2);
  std::bernoulli_distribution dag(0.5);
  for (int k = 0; k < cases; ++k) {
    OperatorExpr op = OperatorExpr::identity(3);
    ExactMatrix mat = represent_exact(OperatorExpr::identity(3), box);
    for (int l = len(rng); l > 0; --l) {
      int m = mode(rng);
      bool d = dag(rng);
      op = op * (d ? OperatorExpr::create(3, m) : OperatorExpr::annihilate(3, m));
      mat = mat * (d ? cre[m] : ann[m]);
    }
    ExactMatrix direct = represent_exact(op, box);
    bool same = true;
    for (std::size_t col : safe)
      for (std::size_t r = 0; r < box.dim() && same; ++r) same = direct.at(r, col) == mat.at(r, col);
    if (same) ++ccr;
  }
  t.expect(jac == cases, "Jacobi " + std::to_string(cases - jac));
  t.expect(leib == cases, "Leibniz " + std::to_string(cases - leib));
  t.expect(inv == cases, "dagger " + std::to_string(cases - inv));
  t.expect(ccr == cases, "CCR reordering " + std::to_string(cases - ccr));
  std::ostringstream os;
  os << cases << " random cases each (seed " << seed << "): Jacobi " << jac << ", Leibniz " << leib << ", dagger "
     << inv << ", CCR vs box matrices " << ccr;
  return t.outcome(os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-11"};
  unsigned seed = 20240611;
  std::vector<int> only;
  app.add_option("--seed", seed, "seed for the randomized soundness checks");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"deformed SGA", criterion1},
      {"undeformed limits", criterion2},
      {"Casimir centrality", criterion3},
      {"Killing metric", criterion4},
      {"quadratic and higher levels vs oracle", criterion5},
      {"Higgs specialization", criterion6},
      {"spectrum", criterion7},
      {"Gershgorin", criterion8},
      {"eigenvectors", criterion9},
      {"partial PT", criterion10},
      {"engine soundness", [seed] { return criterion11(seed); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int n = int(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("internal error: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", n, criteria[k].first.c_str(), s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
