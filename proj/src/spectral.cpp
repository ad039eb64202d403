#include "bosonalg/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bosonalg {

namespace {

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

const ScalarExpr kI = imag();

void require_degree(int m) {
  if (m < 1) throw Error("degree m must be at least 1");
}

double omega_of(double g) { return std::sqrt(1.0 - g * g); }

// Off-diagonal entries are i n g; returns n.
mpq_class gamma_multiple(const ScalarExpr& entry) {
  if (entry.is_zero()) return 0;
  auto v = (entry / (kI * sym(Sym::gamma))).constant_value();
  if (!v || !v->is_real()) throw Error("unexpected off-diagonal entry " + entry.str());
  return abs(v->re);
}

std::string state_name(int twice, const char* w = "w0") {
  if (twice == 0) return "0";
  std::string s = twice > 0 ? "+" : "-";
  int a = std::abs(twice);
  if (a % 2 == 0) {
    if (a / 2 != 1) s += std::to_string(a / 2);
    return s + w;
  }
  if (a != 1) s += std::to_string(a);
  return s + w + "/2";
}

}  // namespace

nlohmann::ordered_json complex_json(std::complex<double> z) {
  auto clean = [](double v) { return std::abs(v) < 1e-300 ? 0.0 : v; };
  return nlohmann::ordered_json::array({clean(z.real()), clean(z.imag())});
}

ScalarExpr Tridiagonal::at(int row, int col) const {
  if (row == col) return b[row];
  if (col == row + 1) return d[row];
  if (row == col + 1) return c[col];
  return ScalarExpr(0);
}

Eigen::MatrixXcd Tridiagonal::numeric(const Bindings& bind) const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  for (int r = 0; r <= m; ++r)
    for (int col = std::max(0, r - 1); col <= std::min(m, r + 1); ++col) a(r, col) = at(r, col).eval(bind);
  return a;
}

Tridiagonal build_j0_matrix(int m, const Deformation& def) {
  require_degree(m);
  Tridiagonal t;
  t.m = m;
  t.def = def;
  for (int k = 0; k <= m; ++k) {
    t.b.emplace_back(m - 2 * k);
    t.d.push_back(kI * ScalarExpr(k + 1) * def.g);
    if (k < m) t.c.push_back(kI * def.g * ScalarExpr(m - k));
  }
  return t;
}

Bindings gamma_binding(double gamma) {
  Bindings b;
  b.set_deformation(Sym::gamma, gamma);
  return b;
}

Eigen::MatrixXcd j0_matrix(int m, double gamma) {
  return build_j0_matrix(m).numeric(gamma_binding(gamma));
}

bool matches_representation_exact(int m, const Deformation& exact) {
  InstanceOptions o;
  o.gamma = exact;
  OperatorExpr j0 = js_su2_deformed(o).op("J0");
  FockSector s = charge_sector(2, {{1, 1}}, {m});
  ExactMatrix e = represent_exact(j0, s);
  Tridiagonal t = build_j0_matrix(m, exact);
  for (int r = 0; r <= m; ++r)
    for (int c = 0; c <= m; ++c) {
      auto v = t.at(r, c).constant_value();
      if (!v || !(e.at(r, c) * GaussQ(2) == *v)) return false;
    }
  return true;
}

double representation_diff(int m, double gamma) {
  OperatorExpr j0 = js_su2_deformed().op("J0");
  FockSector s = charge_sector(2, {{1, 1}}, {m});
  Eigen::MatrixXcd rep(represent(j0, s, gamma_binding(gamma), Basis::bargmann));
  return (2.0 * rep - j0_matrix(m, gamma)).cwiseAbs().maxCoeff();
}

GershgorinReport gershgorin(int m, const mpq_class& gamma) {
  require_degree(m);
  if (gamma <= 0 || gamma >= 1) throw Error("gershgorin needs 0 < gamma < 1");
  Tridiagonal t = build_j0_matrix(m);
  GershgorinReport g;
  g.m = m;
  g.gamma = gamma;
  g.radius = gamma * m;
  g.columns_uniform = true;
  for (int k = 0; k <= m; ++k) {
    g.centers.push_back(m - 2 * k);
    mpq_class col = 0, row = 0;
    for (int j = 0; j <= m; ++j) {
      if (j == k) continue;
      col += gamma_multiple(t.at(j, k));
      row += gamma_multiple(t.at(k, j));
    }
    if (col != m) g.columns_uniform = false;
    g.column_radii.push_back(col * gamma);
    g.row_radii.push_back(row * gamma);
  }
  g.disjoint = true;
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      if (mpq_class(std::abs(g.centers[i] - g.centers[j])) <= g.column_radii[i] + g.column_radii[j])
        g.disjoint = false;
  g.below_threshold = gamma * m < 1;

  OracleSpectrum o = oracle_spectrum(m, gamma.get_d());
  g.per_disk.assign(m + 1, 0);
  g.contained = true;
  g.worst_excess = -1e300;
  for (auto v : o.values) {
    std::complex<double> a = 2.0 * v;
    g.eigenvalues.push_back(a);
    double best = 1e300;
    bool inside = false;
    for (int k = 0; k <= m; ++k) {
      double excess = std::abs(a - std::complex<double>(double(g.centers[k]), 0.0)) - g.column_radii[k].get_d();
      best = std::min(best, excess);
      if (excess <= 1e-9) {
        ++g.per_disk[k];
        inside = true;
      }
    }
    g.worst_excess = std::max(g.worst_excess, best);
    if (!inside) g.contained = false;
  }
  return g;
}

nlohmann::ordered_json GershgorinReport::json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["gamma"] = gamma.get_d();
  j["gamma_exact"] = gamma.get_str();
  j["centers"] = centers;
  j["radius"] = radius.get_d();
  j["radius_exact"] = radius.get_str();
  auto strs = [](const std::vector<mpq_class>& v) {
    std::vector<double> out;
    for (const auto& q : v) out.push_back(q.get_d());
    return out;
  };
  j["column_radii"] = strs(column_radii);
  j["row_radii"] = strs(row_radii);
  j["columns_uniform"] = columns_uniform;
  j["disjoint"] = disjoint;
  j["gamma_below_1_over_m"] = below_threshold;
  j["eigenvalues"] = nlohmann::ordered_json::array();
  for (auto e : eigenvalues) j["eigenvalues"].push_back(complex_json(e));
  j["per_disk"] = per_disk;
  j["contained"] = contained;
  j["worst_excess"] = worst_excess;
  return j;
}

bool CharPoly::all_roots() const {
  return std::all_of(root_vanishes.begin(), root_vanishes.end(), [](bool b) { return b; });
}

CharPoly char_poly(const Tridiagonal& t) {
  const int m = t.m;
  for (const auto& dn : t.d)
    if (dn.is_zero()) throw DivisionByZero();
  const ScalarExpr x = sym(Sym::x);
  CharPoly cp;
  cp.P.emplace_back(1);
  ScalarExpr prev(0);
  cp.leading = ScalarExpr(1);
  for (int n = 0; n <= m; ++n) {
    ScalarExpr next = (x - t.b[n]) * cp.P[n];
    if (n > 0) next -= t.c[n - 1] * prev;
    next = next / t.d[n];
    prev = cp.P[n];
    cp.P.push_back(next);
    cp.leading = cp.leading / t.d[n];
  }
  ScalarExpr product(1);
  for (int k = 0; k <= m; ++k) {
    ScalarExpr r = ScalarExpr(m - 2 * k) * t.def.w;
    cp.roots.push_back(r);
    cp.root_vanishes.push_back(cp.P[m + 1].substitute(Sym::x, r).is_zero());
    product *= x - r;
  }
  cp.factored = (cp.P[m + 1] - cp.leading * product).is_zero();
  return cp;
}

std::vector<ScalarExpr> closed_form_spectrum(int m, const Deformation& d) {
  require_degree(m);
  std::vector<ScalarExpr> out;
  for (int k = 0; k <= m; ++k) out.push_back(ScalarExpr::rational(m - 2 * k, 2) * d.w);
  return out;
}

std::vector<double> closed_form_spectrum(int m, double gamma) {
  require_degree(m);
  std::vector<double> out;
  for (int k = 0; k <= m; ++k) out.push_back(0.5 * (m - 2 * k) * omega_of(gamma));
  return out;
}

OracleSpectrum oracle_spectrum(int m, double gamma) {
  Eigen::MatrixXcd a = 0.5 * j0_matrix(m, gamma);
  LMatrix la = a.cast<std::complex<long double>>();
  Eigen::ComplexEigenSolver<LMatrix> es(la, true);
  if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
  OracleSpectrum o;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    auto lam = es.eigenvalues()[k];
    auto vec = es.eigenvectors().col(k);
    long double res = (la * vec - lam * vec).norm() / std::max<long double>(vec.norm(), 1e-300L);
    o.max_residual = std::max(o.max_residual, double(res));
    std::complex<double> z(double(lam.real()), double(lam.imag()));
    o.values.push_back(z);
    o.max_imag = std::max(o.max_imag, std::abs(z.imag()));
  }
  std::sort(o.values.begin(), o.values.end(),
            [](std::complex<double> p, std::complex<double> q) { return p.real() > q.real(); });
  return o;
}

std::vector<ScalarExpr> eigenvector_exact(const CharPoly& cp, int m, const ScalarExpr& x) {
  if (!cp.P[m + 1].substitute(Sym::x, x).is_zero()) throw Error(x.str() + " is not a root of P_" + std::to_string(m + 1));
  std::vector<ScalarExpr> v;
  for (int k = 0; k <= m; ++k) v.push_back(cp.P[k].substitute(Sym::x, x));
  for (int k = m; k >= 0; --k)
    if (!v[k].is_zero()) {
      ScalarExpr s = v[k].inverse();
      for (auto& e : v) e = e * s;
      break;
    }
  return v;
}

std::vector<ScalarExpr> eigen_residual(const Tridiagonal& t, const ScalarExpr& x, const std::vector<ScalarExpr>& v) {
  std::vector<ScalarExpr> r;
  for (int row = 0; row <= t.m; ++row) {
    ScalarExpr acc = -x * v[row];
    for (int col = std::max(0, row - 1); col <= std::min(t.m, row + 1); ++col) acc += t.at(row, col) * v[col];
    r.push_back(acc);
  }
  return r;
}

Eigen::VectorXcd eigenvector_numeric(int m, double gamma, double x) {
  Bindings bind = gamma_binding(gamma);
  Tridiagonal t = build_j0_matrix(m);
  Eigen::VectorXcd v(m + 1);
  std::complex<double> prev = 0.0, cur = 1.0;
  for (int n = 0; n <= m; ++n) {
    v[n] = cur;
    if (n == m) break;
    std::complex<double> next = (x - t.b[n].eval(bind)) * cur;
    if (n > 0) next -= t.c[n - 1].eval(bind) * prev;
    next /= t.d[n].eval(bind);
    prev = cur;
    cur = next;
  }
  for (int k = m; k >= 0; --k)
    if (std::abs(v[k]) > 0) {
      v /= v[k];
      break;
    }
  return v;
}

PTClass pt_classify(const Eigen::VectorXcd& v, int m, double tol) {
  if (v.norm() == 0) throw Error("zero vector");
  PTClass p;
  p.expected = m % 2 == 0 ? 1 : -1;
  Eigen::Index piv = 0;
  v.cwiseAbs().maxCoeff(&piv);
  auto phase = [&](int j, bool& prop) {
    Eigen::VectorXcd w(v.size());
    for (int k = 0; k <= m; ++k) {
      int flips = j == 1 ? m - k : k;
      w[k] = std::conj(v[k]) * (flips % 2 ? -1.0 : 1.0);
    }
    std::complex<double> lam = w[piv] / v[piv];
    prop = (w - lam * v).norm() <= tol * v.norm();
    return lam;
  };
  p.lambda1 = phase(1, p.proportional1);
  p.lambda2 = phase(2, p.proportional2);
  p.ratio = p.lambda1 / p.lambda2;
  if (!p.proportional1 || !p.proportional2) p.label = "non-eigenstate-of-Pi";
  else if (std::abs(p.ratio - 1.0) <= tol) p.label = "conforming";
  else if (std::abs(p.ratio + 1.0) <= tol) p.label = "breaking";
  else p.label = "non-eigenstate-of-Pi";
  return p;
}

nlohmann::ordered_json PTClass::json() const {
  nlohmann::ordered_json j;
  j["proportional1"] = proportional1;
  j["proportional2"] = proportional2;
  j["lambda1"] = complex_json(lambda1);
  j["lambda2"] = complex_json(lambda2);
  j["ratio"] = complex_json(ratio);
  j["expected_ratio"] = expected;
  j["label"] = label;
  return j;
}

ExactPTClass pt_classify_exact(const std::vector<ScalarExpr>& v, int m) {
  ExactPTClass p;
  int piv = -1;
  for (int k = m; k >= 0; --k)
    if (!v[k].is_zero()) {
      piv = k;
      break;
    }
  if (piv < 0) throw Error("zero vector");
  auto test = [&](int j, ScalarExpr& lam) {
    auto sign = [&](int k) { return ((j == 1 ? m - k : k) % 2) ? ScalarExpr(-1) : ScalarExpr(1); };
    lam = sign(piv) * v[piv].conj() / v[piv];
    for (int k = 0; k <= m; ++k)
      if (!(sign(k) * v[k].conj() - lam * v[k]).is_zero()) return false;
    return true;
  };
  p.proportional1 = test(1, p.lambda1);
  p.proportional2 = test(2, p.lambda2);
  if (p.proportional1 && p.proportional2) {
    ScalarExpr r = p.lambda1 / p.lambda2;
    if (r.equals(ScalarExpr(1))) p.ratio = 1;
    else if (r.equals(ScalarExpr(-1))) p.ratio = -1;
  }
  p.label = !p.ratio ? "non-eigenstate-of-Pi" : (*p.ratio == 1 ? "conforming" : "breaking");
  return p;
}

bool alternates_real_imaginary(const Eigen::VectorXcd& v, int m, double tol) {
  if (std::abs(v[m]) == 0) return false;
  Eigen::VectorXcd u = v / v[m];
  std::complex<double> ipow = 1.0;
  for (int k = m; k >= 0; --k) {
    std::complex<double> r = u[k] / ipow;
    if (std::abs(r.imag()) > tol * std::max(1.0, std::abs(u[k]))) return false;
    ipow *= std::complex<double>(0, 1);
  }
  return true;
}

nlohmann::ordered_json ReferenceDiff::json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["state"] = state;
  j["eigenvalue"] = eigenvalue;
  j["components"] = nlohmann::ordered_json::array();
  for (const auto& c : components)
    j["components"].push_back({{"k", c.k}, {"computed", complex_json(c.computed)}, {"printed", complex_json(c.printed)},
                               {"match", c.match}});
  j["leading_match"] = leading_match;
  j["middle_match"] = middle_match;
  return j;
}

std::vector<ReferenceDiff> reference_diff(int m, double gamma, double tol) {
  using C = std::complex<double>;
  const double w = omega_of(gamma);
  const C i(0, 1);
  struct Printed {
    int twice;  // 2 * eigenvalue of J0 / w0
    std::vector<C> coeffs;
  };
  std::vector<Printed> printed;
  if (m == 2) {
    for (int s : {1, -1}) {
      double r = (1 + s * w) / (1 - s * w);
      printed.push_back({2 * s, {-1.0 / r, -2.0 * i * std::sqrt(r), 1.0}});
    }
    printed.push_back({0, {-1.0, -2.0 * i / std::sqrt(1 - w * w), 1.0}});
  } else if (m == 3) {
    for (int s : {1, -1}) {
      double r = (1 + s * w) / (1 - s * w);
      printed.push_back({3 * s, {std::pow(r, 1.5), 3.0 * i * r, -3.0 * std::sqrt(r), -i}});
    }
    for (int s : {1, -1}) {
      double r = (1 + s * w) / (1 - s * w);
      printed.push_back({s, {std::sqrt(r), -i * (1.0 + s * 2.0 / (1 + s * w)), -(3 + s * w) / std::sqrt(1 - w * w), -i}});
    }
  }
  std::vector<ReferenceDiff> out;
  for (const auto& p : printed) {
    ReferenceDiff d;
    d.m = m;
    d.state = state_name(p.twice);
    d.eigenvalue = 0.5 * p.twice * w;
    Eigen::VectorXcd v = eigenvector_numeric(m, gamma, p.twice * w);
    C last = p.coeffs.back();
    d.middle_match = true;
    for (int k = 0; k <= m; ++k) {
      ReferenceComponent c;
      c.k = k;
      c.computed = v[k];
      c.printed = p.coeffs[k] / last;
      c.match = std::abs(c.computed - c.printed) <= tol * std::max(1.0, std::abs(c.printed));
      if (k == 0) d.leading_match = c.match;
      else if (k < m && !c.match) d.middle_match = false;
      d.components.push_back(c);
    }
    out.push_back(d);
  }
  return out;
}

double SpectralResult::max_oracle_diff() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k)
    worst = std::max(worst, std::abs(oracle.values[k] - std::complex<double>(states[k].value, 0.0)));
  return worst;
}

bool SpectralResult::symmetric() const {
  const std::size_t n = oracle.values.size();
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(oracle.values[k] + oracle.values[n - 1 - k]) > 1e-9) return false;
  for (std::size_t k = 0; k < states.size(); ++k)
    if (!(states[k].exact_value + states[n - 1 - k].exact_value).is_zero()) return false;
  return true;
}

SpectralResult spectrum(int m, const mpq_class& gamma, const SpectralOptions& o) {
  require_degree(m);
  if (gamma <= 0 || gamma >= 1) throw Error("spectrum needs 0 < gamma < 1");
  const double g = gamma.get_d();
  SpectralResult r;
  r.m = m;
  r.gamma = gamma;
  r.omega0 = omega_of(g);
  r.matrix = j0_matrix(m, g);
  r.gersh = gershgorin(m, gamma);
  r.oracle = oracle_spectrum(m, g);

  std::optional<Tridiagonal> t;
  std::optional<CharPoly> cp;
  if (o.exact) {
    t = build_j0_matrix(m);
    cp = char_poly(*t);
    r.exact_roots = cp->all_roots() && cp->factored;
  }
  auto exact_values = closed_form_spectrum(m);
  auto values = closed_form_spectrum(m, g);
  for (int k = 0; k <= m; ++k) {
    EigenState s;
    s.exact_value = exact_values[k];
    s.value = values[k];
    s.vector = eigenvector_numeric(m, g, 2 * s.value);
    s.residual = (r.matrix * s.vector - 2 * s.value * s.vector).norm() / s.vector.norm();
    s.pt = pt_classify(s.vector, m);
    s.alternates = alternates_real_imaginary(s.vector, m);
    if (o.exact && m <= o.exact_limit) {
      ScalarExpr x = ScalarExpr(2) * s.exact_value;
      auto v = eigenvector_exact(*cp, m, x);
      auto res = eigen_residual(*t, x, v);
      s.exact_residual_zero = std::all_of(res.begin(), res.end(), [](const ScalarExpr& e) { return e.is_zero(); });
      s.exact_pt = pt_classify_exact(v, m);
      s.exact_vector = std::move(v);
    }
    r.states.push_back(std::move(s));
  }
  r.diff = reference_diff(m, g);
  return r;
}

nlohmann::ordered_json SpectralResult::json() const {
  using J = nlohmann::ordered_json;
  J j;
  j["m"] = m;
  j["gamma"] = gamma.get_d();
  j["gamma_exact"] = gamma.get_str();
  j["omega0"] = omega0;
  j["matrix"] = J::array();
  for (int r = 0; r < matrix.rows(); ++r) {
    J row = J::array();
    for (int c = 0; c < matrix.cols(); ++c) row.push_back(complex_json(matrix(r, c)));
    j["matrix"].push_back(row);
  }
  j["gershgorin"] = gersh.json();
  j["eigen"] = J::array();
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    J e;
    e["value"] = s.value;
    e["value_exact"] = s.exact_value.str();
    e["oracle"] = complex_json(oracle.values[k]);
    e["vector"] = J::array();
    for (int i = 0; i < s.vector.size(); ++i) e["vector"].push_back(complex_json(s.vector[i]));
    e["residual"] = s.residual;
    e["alternates_real_imaginary"] = s.alternates;
    e["pt"] = s.pt.json();
    if (s.exact_vector) {
      J x;
      x["vector"] = J::array();
      for (const auto& c : *s.exact_vector) x["vector"].push_back(c.str());
      x["residual_zero"] = *s.exact_residual_zero;
      x["label"] = s.exact_pt->label;
      x["lambda1"] = s.exact_pt->lambda1.str();
      x["lambda2"] = s.exact_pt->lambda2.str();
      e["exact"] = x;
    }
    j["eigen"].push_back(e);
  }
  j["reference_diff"] = J::array();
  for (const auto& d : diff) j["reference_diff"].push_back(d.json());
  J checks;
  checks["oracle_max_diff"] = max_oracle_diff();
  checks["oracle_max_imag"] = oracle.max_imag;
  checks["oracle_residual"] = oracle.max_residual;
  checks["negation_symmetric"] = symmetric();
  if (exact_roots) checks["exact_roots"] = *exact_roots;
  j["checks"] = checks;
  return j;
}

nlohmann::ordered_json symbolic_spectrum_json(int m, int exact_limit) {
  using J = nlohmann::ordered_json;
  Tridiagonal t = build_j0_matrix(m);
  CharPoly cp = char_poly(t);
  J j;
  j["m"] = m;
  j["gamma"] = "gamma";
  j["omega0"] = "w0";
  j["matrix"] = J::array();
  for (int r = 0; r <= m; ++r) {
    J row = J::array();
    for (int c = 0; c <= m; ++c) row.push_back(t.at(r, c).str());
    j["matrix"].push_back(row);
  }
  j["char_poly_leading"] = cp.leading.str();
  j["roots"] = J::array();
  for (int k = 0; k <= m; ++k) j["roots"].push_back({{"x", cp.roots[k].str()}, {"vanishes", bool(cp.root_vanishes[k])}});
  j["factored"] = cp.factored;
  j["eigen"] = J::array();
  for (const auto& ev : closed_form_spectrum(m)) {
    J e;
    e["value"] = ev.str();
    if (m <= exact_limit) {
      ScalarExpr x = ScalarExpr(2) * ev;
      auto v = eigenvector_exact(cp, m, x);
      auto res = eigen_residual(t, x, v);
      e["vector"] = J::array();
      for (const auto& c : v) e["vector"].push_back(c.str());
      e["residual_zero"] = std::all_of(res.begin(), res.end(), [](const ScalarExpr& z) { return z.is_zero(); });
      ExactPTClass p = pt_classify_exact(v, m);
      e["pt"] = {{"lambda1", p.lambda1.str()}, {"lambda2", p.lambda2.str()},
                 {"ratio", p.ratio ? J(*p.ratio) : J(nullptr)}, {"label", p.label}};
    }
    j["eigen"].push_back(e);
  }
  return j;
}

std::string trajectory_csv(int m, double a, double b, int n) {
  require_degree(m);
  if (n < 1) throw Error("sweep needs at least one point");
  if (a <= 0 || b >= 1 || a > b) throw Error("sweep range must lie inside (0, 1)");
  std::ostringstream os;
  os.precision(17);
  os << "gamma,omega0,k,closed_form,oracle_re,oracle_im\n";
  for (int i = 0; i < n; ++i) {
    double g = n == 1 ? a : a + (b - a) * i / (n - 1);
    auto cf = closed_form_spectrum(m, g);
    OracleSpectrum o = oracle_spectrum(m, g);
    for (int k = 0; k <= m; ++k)
      os << g << ',' << omega_of(g) << ',' << k << ',' << cf[k] << ',' << o.values[k].real() << ','
         << o.values[k].imag() << '\n';
  }
  return os.str();
}

}  // namespace bosonalg
