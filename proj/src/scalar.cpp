#include "bosonalg/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bosonalg {

namespace {

constexpr std::size_t idx(Sym s) { return static_cast<std::size_t>(s); }

const std::array<SymbolInfo, kSymbolCount> kSymbols = {{
    {"gamma", "γ", SymbolKind::deformation, Sym::w0},
    {"w0", "ω₀", SymbolKind::derived, Sym::gamma},
    {"mu", "μ", SymbolKind::deformation, Sym::wmu},
    {"wmu", "ω₀(μ)", SymbolKind::derived, Sym::mu},
    {"s", "s", SymbolKind::free, std::nullopt},
    {"s0", "s₀", SymbolKind::free, std::nullopt},
    {"s1", "s₁", SymbolKind::free, std::nullopt},
    {"sp", "s′", SymbolKind::free, std::nullopt},
    {"lam", "λ", SymbolKind::free, std::nullopt},
    {"lam0", "λ₀", SymbolKind::free, std::nullopt},
    {"lam1", "λ₁", SymbolKind::free, std::nullopt},
    {"lamp", "λ′", SymbolKind::free, std::nullopt},
    {"x", "x", SymbolKind::indeterminate, std::nullopt},
    {"ch", "cos(θ/2)", SymbolKind::free, std::nullopt},
    {"sh", "sin(θ/2)", SymbolKind::free, std::nullopt},
    {"cphi", "cos(φ/2)", SymbolKind::free, std::nullopt},
    {"sphi", "sin(φ/2)", SymbolKind::free, std::nullopt},
    {"Lam_c", "Λ₀(c)", SymbolKind::auxiliary, std::nullopt},
    {"Del_c", "Δ₀(c)", SymbolKind::auxiliary, std::nullopt},
    {"CJ_c", "C_J(c)", SymbolKind::auxiliary, std::nullopt},
    {"CR_c", "C_R(c)", SymbolKind::auxiliary, std::nullopt},
}};

GaussQ binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return GaussQ(mpq_class(r));
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

std::string monomial_str(const Exponents& e) {
  std::string out;
  for (std::size_t k = 0; k < kSymbolCount; ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += kSymbols[k].ascii;
    if (e[k] > 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t k = 0; k < kSymbolCount; ++k)
    if (a[k] > b[k]) return false;
  return true;
}

std::complex<double> ipow(std::complex<double> v, int n) {
  std::complex<double> r(1.0, 0.0);
  while (n > 0) {
    if (n & 1) r *= v;
    v *= v;
    n >>= 1;
  }
  return r;
}

}  // namespace

const SymbolInfo& symbol_info(Sym s) { return kSymbols[idx(s)]; }

std::optional<Sym> symbol_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kSymbolCount; ++k)
    if (kSymbols[k].ascii == name || kSymbols[k].unicode == name) return static_cast<Sym>(k);
  return std::nullopt;
}

std::vector<Sym> all_symbols() {
  std::vector<Sym> out;
  for (std::size_t k = 0; k < kSymbolCount; ++k) out.push_back(static_cast<Sym>(k));
  return out;
}

GaussQ operator/(const GaussQ& a, const GaussQ& b) {
  if (b.is_zero()) throw DivisionByZero();
  mpq_class n = b.norm2();
  GaussQ t = a * b.conj();
  return {t.re / n, t.im / n};
}

std::string GaussQ::str() const {
  if (sgn(im) == 0) return rational_str(re);
  std::string ipart;
  if (im == 1) ipart = "i";
  else if (im == -1) ipart = "-i";
  else ipart = rational_str(im) + "*i";
  if (sgn(re) == 0) return ipart;
  std::string sep = sgn(im) < 0 ? " - " : " + ";
  mpq_class a = abs(im);
  std::string mag = a == 1 ? "i" : rational_str(a) + "*i";
  return "(" + rational_str(re) + sep + mag + ")";
}

mpq_class parse_rational(std::string_view text) {
  std::string t(text);
  if (t.empty()) throw Error("empty number");
  auto dot = t.find('.');
  if (dot == std::string::npos) {
    mpq_class q(t, 10);
    q.canonicalize();
    return q;
  }
  std::string whole = t.substr(0, dot);
  std::string frac = t.substr(dot + 1);
  bool neg = !whole.empty() && whole[0] == '-';
  if (neg) whole = whole.substr(1);
  if (whole.empty()) whole = "0";
  mpz_class den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  mpz_class numer(whole + frac, 10);
  mpq_class q(numer, den);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

Bindings& Bindings::set_deformation(Sym g, double value) {
  auto partner = symbol_info(g).partner;
  set(g, value);
  if (partner) set(*partner, std::sqrt(1.0 - value * value));
  return *this;
}

void Bindings::validate(double tol) const {
  for (auto [g, w] : {std::pair{Sym::gamma, Sym::w0}, std::pair{Sym::mu, Sym::wmu}}) {
    const auto& gv = get(g);
    const auto& wv = get(w);
    if (gv && wv && std::abs(*gv * *gv + *wv * *wv - 1.0) > tol)
      throw Error("inconsistent bindings for " + std::string(symbol_info(g).ascii) + " and " +
                  std::string(symbol_info(w).ascii));
  }
}

// Poly

Poly Poly::constant(const GaussQ& c) {
  Poly p;
  if (!c.is_zero()) p.terms_[Exponents{}] = c;
  return p;
}

Poly Poly::symbol(Sym s, int power) {
  Exponents e{};
  e[idx(s)] = static_cast<std::uint16_t>(power);
  return monomial(e, GaussQ(1));
}

Poly Poly::monomial(const Exponents& e, const GaussQ& c) {
  Poly p;
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
}

GaussQ Poly::constant_term() const {
  auto it = terms_.find(Exponents{});
  return it == terms_.end() ? GaussQ() : it->second;
}

int Poly::degree(Sym s) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max<int>(d, e[idx(s)]);
  return d;
}

void Poly::add_term(Exponents e, const GaussQ& c) {
  if (c.is_zero()) return;
  for (auto [g, w] : {std::pair{Sym::gamma, Sym::w0}, std::pair{Sym::mu, Sym::wmu}}) {
    int eg = e[idx(g)];
    if (eg < 2) continue;
    int k = eg / 2;
    e[idx(g)] = static_cast<std::uint16_t>(eg % 2);
    // g^(2k) = (1 - w^2)^k
    for (int j = 0; j <= k; ++j) {
      Exponents f = e;
      f[idx(w)] = static_cast<std::uint16_t>(f[idx(w)] + 2 * j);
      GaussQ b = binomial(k, j);
      add_term(f, (j % 2 ? -b : b) * c);
    }
    return;
  }
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (std::size_t k = 0; k < kSymbolCount; ++k) e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly Poly::scaled(const GaussQ& c) const {
  if (c.is_zero()) return {};
  Poly r = *this;
  for (auto& [e, v] : r.terms_) v = v * c;
  return r;
}

Poly Poly::pow(int n) const {
  Poly r = constant(GaussQ(1));
  Poly b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

Poly Poly::conj() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = c.conj();
  return r;
}

Poly Poly::reflect(Sym s) const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_)
    if (e[idx(s)] % 2) c = -c;
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& f) const {
  if (f.is_zero()) throw DivisionByZero();
  Poly rem = *this;
  Poly q;
  const auto& [lf, lc] = *f.terms_.rbegin();
  while (!rem.is_zero()) {
    const auto& [lr, rc] = *rem.terms_.rbegin();
    if (!divides(lf, lr)) return std::nullopt;
    Exponents t;
    for (std::size_t k = 0; k < kSymbolCount; ++k) t[k] = static_cast<std::uint16_t>(lr[k] - lf[k]);
    Poly step = monomial(t, rc / lc);
    q = q + step;
    rem = rem - step * f;
  }
  return q;
}

std::complex<double> Poly::eval(const Bindings& b) const {
  std::complex<double> total(0.0, 0.0);
  for (const auto& [e, c] : terms_) {
    std::complex<double> t = c.to_complex();
    for (std::size_t k = 0; k < kSymbolCount; ++k) {
      if (e[k] == 0) continue;
      const auto& v = b.values[k];
      if (!v) throw UnboundSymbol(kSymbols[k].ascii);
      t *= ipow(*v, e[k]);
    }
    total += t;
  }
  return total;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono = monomial_str(e);
    bool neg = false;
    std::string coeff;
    if (c.is_real()) {
      neg = sgn(c.re) < 0;
      mpq_class a = abs(c.re);
      if (!(a == 1 && !mono.empty())) coeff = rational_str(a);
    } else if (sgn(c.re) == 0) {
      neg = sgn(c.im) < 0;
      mpq_class a = abs(c.im);
      coeff = a == 1 ? "i" : rational_str(a) + "*i";
    } else {
      coeff = c.str();
    }
    std::string term = coeff;
    if (!mono.empty()) term = coeff.empty() ? mono : coeff + "*" + mono;
    if (first) out += (neg ? "-" : "") + term;
    else out += (neg ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

// ScalarExpr

ScalarExpr ScalarExpr::rational(long n, long d) {
  if (d == 0) throw DivisionByZero();
  mpq_class q(n, d);
  q.canonicalize();
  return ScalarExpr(GaussQ(q));
}

std::optional<GaussQ> ScalarExpr::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return num_.constant_term();
}

bool ScalarExpr::depends_on(Sym s) const {
  if (num_.depends_on(s)) return true;
  for (const auto& f : den_)
    if (f.poly.depends_on(s)) return true;
  return false;
}

bool ScalarExpr::equals(const ScalarExpr& other) const { return (*this - other).is_zero(); }

void ScalarExpr::insert_factor(const Poly& f, int e) {
  auto it = std::lower_bound(den_.begin(), den_.end(), f,
                             [](const Factor& a, const Poly& p) { return a.poly < p; });
  if (it != den_.end() && it->poly == f) it->exp += e;
  else den_.insert(it, Factor{f, e});
}

void ScalarExpr::absorb_denominator(Poly d) {
  if (d.is_zero()) throw DivisionByZero();
  // monomial content becomes single-symbol factors
  Exponents lo;
  lo.fill(std::numeric_limits<std::uint16_t>::max());
  for (const auto& [e, c] : d.terms())
    for (std::size_t k = 0; k < kSymbolCount; ++k) lo[k] = std::min(lo[k], e[k]);
  bool any = false;
  for (std::size_t k = 0; k < kSymbolCount; ++k) {
    if (lo[k] == 0) continue;
    any = true;
    insert_factor(Poly::symbol(static_cast<Sym>(k)), lo[k]);
  }
  if (any) {
    Poly stripped;
    for (const auto& [e, c] : d.terms()) {
      Exponents f = e;
      for (std::size_t k = 0; k < kSymbolCount; ++k) f[k] = static_cast<std::uint16_t>(f[k] - lo[k]);
      stripped.add_term(f, c);
    }
    d = std::move(stripped);
  }
  for (auto& fac : den_) {
    if (d.is_constant()) break;
    if (fac.poly.terms().size() == 1) continue;
    while (!d.is_constant()) {
      auto q = d.divide_exact(fac.poly);
      if (!q) break;
      d = std::move(*q);
      ++fac.exp;
    }
  }
  if (d.is_constant()) {
    num_ = num_.scaled(GaussQ(1) / d.constant_term());
    return;
  }
  GaussQ lc = d.leading_coefficient();
  d = d.scaled(GaussQ(1) / lc);
  num_ = num_.scaled(GaussQ(1) / lc);
  insert_factor(d, 1);
}

void ScalarExpr::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& fac : den_) {
    while (fac.exp > 0) {
      auto q = num_.divide_exact(fac.poly);
      if (!q) break;
      num_ = std::move(*q);
      --fac.exp;
    }
  }
  std::erase_if(den_, [](const Factor& f) { return f.exp == 0; });
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

Poly expand(const std::vector<ScalarExpr::Factor>& fs, const std::vector<int>& exps) {
  Poly r = Poly::constant(GaussQ(1));
  for (std::size_t k = 0; k < fs.size(); ++k)
    if (exps[k] > 0) r = r * fs[k].poly.pow(exps[k]);
  return r;
}

}  // namespace

ScalarExpr ScalarExpr::sum(std::span<const ScalarExpr> parts) {
  ScalarExpr r;
  bool all_plain = true;
  for (const auto& p : parts)
    if (!p.den_.empty()) all_plain = false;
  if (all_plain) {
    for (const auto& p : parts)
      for (const auto& [e, c] : p.num_.terms()) r.num_.add_term(e, c);
    return r;
  }
  // common denominator: max exponent per factor
  std::vector<Factor> lcm;
  for (const auto& p : parts) {
    if (p.is_zero()) continue;
    for (const auto& f : p.den_) {
      auto it = std::lower_bound(lcm.begin(), lcm.end(), f.poly,
                                 [](const Factor& a, const Poly& q) { return a.poly < q; });
      if (it != lcm.end() && it->poly == f.poly) it->exp = std::max(it->exp, f.exp);
      else lcm.insert(it, f);
    }
  }
  for (const auto& p : parts) {
    if (p.is_zero()) continue;
    std::vector<int> missing(lcm.size());
    std::size_t j = 0;
    for (std::size_t k = 0; k < lcm.size(); ++k) {
      int have = 0;
      if (j < p.den_.size() && p.den_[j].poly == lcm[k].poly) have = p.den_[j++].exp;
      missing[k] = lcm[k].exp - have;
    }
    Poly scaled = p.num_ * expand(lcm, missing);
    for (const auto& [e, c] : scaled.terms()) r.num_.add_term(e, c);
  }
  r.den_ = std::move(lcm);
  r.cancel();
  return r;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::array<ScalarExpr, 2> parts{a, b};
  return ScalarExpr::sum(parts);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr r;
  if (a.is_zero() || b.is_zero()) return r;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_;
  for (const auto& f : b.den_) r.insert_factor(f.poly, f.exp);
  if (!a.den_.empty() || !b.den_.empty()) r.cancel();
  return r;
}

ScalarExpr ScalarExpr::scaled(const GaussQ& c) const {
  if (c.is_zero()) return {};
  ScalarExpr r = *this;
  r.num_ = r.num_.scaled(c);
  return r;
}

ScalarExpr ScalarExpr::inverse() const {
  if (is_zero()) throw DivisionByZero();
  Poly d = num_;
  Poly mult = Poly::constant(GaussQ(1));
  for (Sym g : {Sym::gamma, Sym::mu}) {
    if (!d.depends_on(g)) continue;
    Poly c = d.reflect(g);
    d = d * c;
    mult = mult * c;
  }
  ScalarExpr r;
  std::vector<int> exps;
  for (const auto& f : den_) exps.push_back(f.exp);
  r.num_ = mult * expand(den_, exps);
  r.absorb_denominator(std::move(d));
  r.cancel();
  return r;
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (auto c = b.constant_value()) return a.scaled(GaussQ(1) / *c);
  return a * b.inverse();
}

std::optional<ScalarExpr> ScalarExpr::checked_div(const ScalarExpr& b) const {
  if (b.is_zero()) return std::nullopt;
  return *this / b;
}

ScalarExpr ScalarExpr::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  ScalarExpr r(1);
  ScalarExpr b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

ScalarExpr ScalarExpr::conj() const {
  ScalarExpr r;
  r.num_ = num_.conj();
  for (const auto& f : den_) r.insert_factor(f.poly.conj(), f.exp);
  return r;
}

namespace {

ScalarExpr substitute_poly(const Poly& p, Sym s, const ScalarExpr& value) {
  if (!p.depends_on(s)) return ScalarExpr(p);
  std::vector<ScalarExpr> powers{ScalarExpr(1)};
  std::vector<ScalarExpr> parts;
  for (const auto& [e, c] : p.terms()) {
    int k = e[idx(s)];
    while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * value);
    Exponents rest = e;
    rest[idx(s)] = 0;
    parts.push_back(ScalarExpr(Poly::monomial(rest, c)) * powers[k]);
  }
  return ScalarExpr::sum(parts);
}

}  // namespace

ScalarExpr ScalarExpr::substitute(Sym s, const ScalarExpr& value) const {
  if (!depends_on(s)) return *this;
  ScalarExpr r = substitute_poly(num_, s, value);
  for (const auto& f : den_) r = r / substitute_poly(f.poly, s, value).pow(f.exp);
  return r;
}

ScalarExpr ScalarExpr::normalized() const {
  Poly n;
  for (const auto& [e, c] : num_.terms()) n.add_term(e, c);
  ScalarExpr r(n);
  for (const auto& f : den_) r = r / ScalarExpr(f.poly).pow(f.exp);
  return r;
}

std::complex<double> ScalarExpr::eval(const Bindings& b) const {
  std::complex<double> d(1.0, 0.0);
  for (const auto& f : den_) d *= ipow(f.poly.eval(b), f.exp);
  if (std::abs(d) < 1e-14) throw NearZeroDenominator(std::abs(d));
  return num_.eval(b) / d;
}

std::string ScalarExpr::str() const {
  std::string n = num_.str();
  if (den_.empty()) return n;
  if (num_.size() > 1) n = "(" + n + ")";
  std::string d;
  for (const auto& f : den_) {
    if (!d.empty()) d += "*";
    std::string p = f.poly.str();
    if (f.poly.size() > 1) p = "(" + p + ")";
    d += p;
    if (f.exp > 1) d += "^" + std::to_string(f.exp);
  }
  if (den_.size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

ScalarExpr omega_chain(const ScalarExpr& w0, int n) {
  ScalarExpr w = w0;
  for (int k = 0; k < n; ++k) w = (ScalarExpr(1) + w).scaled(GaussQ(mpq_class(1, 2)));
  return w;
}

}  // namespace bosonalg
