#include "bosonalg/operator.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace bosonalg {

int ModeMonomial::degree() const {
  int d = 0;
  for (int k = 0; k < kMaxModes; ++k) d += cre[k] + ann[k];
  return d;
}

bool MonomialOrder::operator()(const ModeMonomial& a, const ModeMonomial& b) const {
  int da = a.degree();
  int db = b.degree();
  if (da != db) return da > db;
  for (int k = 0; k < kMaxModes; ++k) {
    if (a.cre[k] != b.cre[k]) return a.cre[k] > b.cre[k];
    if (a.ann[k] != b.ann[k]) return a.ann[k] > b.ann[k];
  }
  return false;
}

std::string monomial_str(const ModeMonomial& m, int modes) {
  std::string out;
  auto emit = [&](int mode, int power, bool creation) {
    if (power == 0) return;
    if (!out.empty()) out += "*";
    out += "a" + std::to_string(mode + 1) + (creation ? "'" : "");
    if (power > 1) out += "^" + std::to_string(power);
  };
  for (int k = 0; k < modes; ++k) emit(k, m.cre[k], true);
  for (int k = 0; k < modes; ++k) emit(k, m.ann[k], false);
  return out.empty() ? "1" : out;
}

OperatorExpr::OperatorExpr(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) throw Error("unsupported mode count " + std::to_string(modes));
}

OperatorExpr OperatorExpr::identity(int modes, const ScalarExpr& c) {
  OperatorExpr r(modes);
  r.add(ModeMonomial{}, c);
  return r;
}

OperatorExpr OperatorExpr::create(int modes, int mode) {
  ModeMonomial m;
  m.cre.at(mode) = 1;
  return term(modes, m, ScalarExpr(1));
}

OperatorExpr OperatorExpr::annihilate(int modes, int mode) {
  ModeMonomial m;
  m.ann.at(mode) = 1;
  return term(modes, m, ScalarExpr(1));
}

OperatorExpr OperatorExpr::number(int modes, int mode) {
  ModeMonomial m;
  m.cre.at(mode) = 1;
  m.ann.at(mode) = 1;
  return term(modes, m, ScalarExpr(1));
}

OperatorExpr OperatorExpr::term(int modes, const ModeMonomial& m, const ScalarExpr& c) {
  if (modes < kMaxModes)
    for (int k = modes; k < kMaxModes; ++k)
      if (m.cre[k] || m.ann[k]) throw Error("monomial uses mode beyond operator mode count");
  OperatorExpr r(modes);
  r.add(m, c);
  return r;
}

std::optional<ScalarExpr> OperatorExpr::as_scalar() const {
  if (terms_.empty()) return ScalarExpr(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_identity()) return terms_.begin()->second;
  return std::nullopt;
}

ScalarExpr OperatorExpr::coefficient(const ModeMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ScalarExpr(0) : it->second;
}

void OperatorExpr::add(const ModeMonomial& m, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OperatorExpr OperatorExpr::operator-() const {
  OperatorExpr r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.modes_ != b.modes_) throw ModeMismatch(a.modes_, b.modes_);
  OperatorExpr r = a;
  for (const auto& [m, c] : b.terms_) r.add(m, c);
  return r;
}

OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + (-b); }

OperatorExpr operator*(const ScalarExpr& c, const OperatorExpr& a) {
  OperatorExpr r(a.modes_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : a.terms_) r.add(m, c * v);
  return r;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) { return normal_product(a, b); }

bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.modes_ != b.modes_) return false;
  return (a - b).is_zero();
}

OperatorExpr OperatorExpr::substitute(Sym s, const ScalarExpr& v) const {
  OperatorExpr r(modes_);
  for (const auto& [m, c] : terms_) r.add(m, c.substitute(s, v));
  return r;
}

OperatorExpr OperatorExpr::with_modes(int modes) const {
  OperatorExpr r(modes);
  for (const auto& [m, c] : terms_) {
    for (int k = modes; k < kMaxModes; ++k)
      if (m.cre[k] || m.ann[k]) throw Error("cannot drop an occupied mode");
    r.terms_.emplace(m, c);
  }
  return r;
}

bool OperatorExpr::depends_on(Sym s) const {
  for (const auto& [m, c] : terms_)
    if (c.depends_on(s)) return true;
  return false;
}

namespace {

bool needs_parens(const std::string& c) {
  std::size_t start = (!c.empty() && c[0] == '-') ? 1 : 0;
  int depth = 0;
  for (std::size_t k = start; k < c.size(); ++k) {
    char ch = c[k];
    if (ch == '(') ++depth;
    else if (ch == ')') --depth;
    else if (depth == 0 && (ch == '+' || ch == '-' || ch == '/')) return true;
  }
  return false;
}

}  // namespace

std::string OperatorExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string mono = monomial_str(m, modes_);
    std::string coef = c.str();
    bool neg = false;
    if (needs_parens(coef)) {
      coef = "(" + coef + ")";
    } else if (coef[0] == '-') {
      neg = true;
      coef = coef.substr(1);
    }
    std::string t;
    if (m.is_identity()) t = coef;
    else if (coef == "1") t = mono;
    else t = coef + "*" + mono;
    if (first) out += (neg ? "-" : "") + t;
    else out += (neg ? " - " : " + ") + t;
    first = false;
  }
  return out;
}

OperatorExpr normal_product(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.modes() != b.modes()) throw ModeMismatch(a.modes(), b.modes());
  const int n = a.modes();
  std::map<ModeMonomial, std::vector<ScalarExpr>, MonomialOrder> acc;
  struct Choice {
    int k;
    mpz_class weight;
  };
  std::vector<std::vector<Choice>> options(n);
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      // a^e a'^c = sum_k k! C(e,k) C(c,k) a'^(c-k) a^(e-k), mode by mode
      for (int i = 0; i < n; ++i) {
        options[i].clear();
        int e = ma.ann[i];
        int c = mb.cre[i];
        for (int k = 0; k <= std::min(e, c); ++k) {
          mpz_class f, b1, b2;
          mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
          mpz_bin_uiui(b1.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
          mpz_bin_uiui(b2.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(k));
          options[i].push_back({k, f * b1 * b2});
        }
      }
      ScalarExpr coeff = ca * cb;
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        ModeMonomial m;
        mpz_class w = 1;
        for (int i = 0; i < n; ++i) {
          const Choice& ch = options[i][pick[i]];
          m.cre[i] = static_cast<std::uint8_t>(ma.cre[i] + mb.cre[i] - ch.k);
          m.ann[i] = static_cast<std::uint8_t>(ma.ann[i] + mb.ann[i] - ch.k);
          w *= ch.weight;
        }
        acc[m].push_back(w == 1 ? coeff : coeff.scaled(GaussQ(mpq_class(w))));
        int i = 0;
        for (; i < n; ++i) {
          if (++pick[i] < options[i].size()) break;
          pick[i] = 0;
        }
        if (i == n) break;
      }
    }
  }
  OperatorExpr r(n);
  for (auto& [m, parts] : acc) {
    ScalarExpr c = parts.size() == 1 ? parts[0] : ScalarExpr::sum(parts);
    r.add(m, c);
  }
  return r;
}

OperatorExpr power(const OperatorExpr& a, int n) {
  if (n < 0) throw Error("negative operator power");
  OperatorExpr r = OperatorExpr::identity(a.modes());
  for (int k = 0; k < n; ++k) r = normal_product(r, a);
  return r;
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) {
  return normal_product(a, b) - normal_product(b, a);
}

OperatorExpr anticommutator(const OperatorExpr& a, const OperatorExpr& b) {
  return normal_product(a, b) + normal_product(b, a);
}

OperatorExpr dagger(const OperatorExpr& a) {
  OperatorExpr r(a.modes());
  for (const auto& [m, c] : a.terms()) {
    ModeMonomial d;
    d.cre = m.ann;
    d.ann = m.cre;
    r.add(d, c.conj());
  }
  return r;
}

OperatorExpr pt_transform(const OperatorExpr& a, std::optional<int> mode) {
  if (mode && (*mode < 0 || *mode >= a.modes())) throw Error("parity mode out of range");
  OperatorExpr r(a.modes());
  for (const auto& [m, c] : a.terms()) {
    int flips = 0;
    if (mode) flips = m.cre[*mode] + m.ann[*mode];
    else flips = m.degree();
    ScalarExpr v = c.conj();
    r.add(m, flips % 2 ? -v : v);
  }
  return r;
}

std::vector<std::vector<long>> conserved_charges(std::span<const OperatorExpr> generators) {
  if (generators.empty()) throw Error("conserved_charges needs at least one generator");
  const int n = generators.front().modes();
  std::set<std::vector<long>> deltas;
  for (const auto& g : generators) {
    if (g.modes() != n) throw ModeMismatch(n, g.modes());
    for (const auto& [m, c] : g.terms()) {
      std::vector<long> d(n);
      bool nonzero = false;
      for (int i = 0; i < n; ++i) {
        d[i] = m.delta(i);
        nonzero = nonzero || d[i] != 0;
      }
      if (nonzero) deltas.insert(d);
    }
  }
  // reduced row echelon form of the delta matrix over Q
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& d : deltas) {
    std::vector<mpq_class> row(n);
    for (int i = 0; i < n; ++i) row[i] = d[i];
    rows.push_back(row);
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int col = 0; col < n && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][col]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    mpq_class inv = 1 / rows[r][col];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t q = 0; q < rows.size(); ++q) {
      if (q == r || sgn(rows[q][col]) == 0) continue;
      mpq_class f = rows[q][col];
      for (int j = 0; j < n; ++j) rows[q][j] -= f * rows[r][j];
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<std::vector<long>> basis;
  for (int freec = 0; freec < n; ++freec) {
    if (std::find(pivot_col.begin(), pivot_col.end(), freec) != pivot_col.end()) continue;
    std::vector<mpq_class> v(n);
    v[freec] = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -rows[k][freec];
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<mpz_class> iv(n);
    mpz_class g = 0;
    for (int i = 0; i < n; ++i) {
      mpq_class t = v[i] * l;
      iv[i] = t.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), iv[i].get_mpz_t());
    }
    std::vector<long> out(n);
    int first_sign = 0;
    for (int i = 0; i < n; ++i) {
      iv[i] /= g;
      if (!first_sign && sgn(iv[i]) != 0) first_sign = sgn(iv[i]);
    }
    for (int i = 0; i < n; ++i) out[i] = (first_sign < 0 ? -iv[i] : iv[i]).get_si();
    basis.push_back(out);
  }
  return basis;
}

}  // namespace bosonalg
