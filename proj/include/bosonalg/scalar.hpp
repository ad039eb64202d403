#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bosonalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero scalar") {}
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(std::string_view name)
      : Error("unbound symbol: " + std::string(name)) {}
};

class NearZeroDenominator : public Error {
 public:
  explicit NearZeroDenominator(double mag)
      : Error("denominator magnitude " + std::to_string(mag) + " below 1e-14") {}
};

enum class SymbolKind { deformation, derived, free, indeterminate, auxiliary };

// gamma/w0 and mu/wmu are tied by g^2 + w^2 = 1; everything else is free.
// ch, sh, cphi, sphi are the half-angle and azimuth scalars of the general
// biorthogonal construction. Lam, Del, CJ, CR stand in for commuting central
// operators when a coefficient identity is checked at the scalar level.
enum class Sym : std::uint8_t {
  gamma, w0, mu, wmu,
  s, s0, s1, sp, lam, lam0, lam1, lamp,
  x,
  ch, sh, cphi, sphi,
  Lam, Del, CJ, CR,
};
inline constexpr std::size_t kSymbolCount = 21;

struct SymbolInfo {
  std::string_view ascii;
  std::string_view unicode;
  SymbolKind kind;
  std::optional<Sym> partner;
};

const SymbolInfo& symbol_info(Sym s);
std::optional<Sym> symbol_from_name(std::string_view name);
std::vector<Sym> all_symbols();

struct GaussQ {
  mpq_class re;
  mpq_class im;

  GaussQ() = default;
  GaussQ(long v) : re(v), im(0) {}  // NOLINT
  GaussQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}  // NOLINT

  static GaussQ i() { return {0, 1}; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  GaussQ conj() const { return {re, -im}; }
  mpq_class norm2() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;

  friend GaussQ operator+(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussQ operator-(const GaussQ& a, const GaussQ& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussQ operator-(const GaussQ& a) { return {-a.re, -a.im}; }
  friend GaussQ operator*(const GaussQ& a, const GaussQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussQ operator/(const GaussQ& a, const GaussQ& b);
  GaussQ& operator+=(const GaussQ& b) { re += b.re; im += b.im; return *this; }
  GaussQ& operator-=(const GaussQ& b) { re -= b.re; im -= b.im; return *this; }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator<(const GaussQ& a, const GaussQ& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
};

// Parses "3", "-2/5", "0.25" into an exact rational.
mpq_class parse_rational(std::string_view text);

struct Bindings {
  std::array<std::optional<std::complex<double>>, kSymbolCount> values{};

  Bindings& set(Sym s, std::complex<double> v) {
    values[static_cast<std::size_t>(s)] = v;
    return *this;
  }
  const std::optional<std::complex<double>>& get(Sym s) const {
    return values[static_cast<std::size_t>(s)];
  }
  // Binds a deformation symbol and its partner sqrt(1 - g^2).
  Bindings& set_deformation(Sym g, double value);
  // Fails if a bound deformation pair violates g^2 + w^2 = 1 by more than tol.
  void validate(double tol = 1e-12) const;
};

using Exponents = std::array<std::uint16_t, kSymbolCount>;

// Polynomial over Q(i) in the symbol set, kept reduced modulo gamma^2 = 1 - w0^2
// and mu^2 = 1 - wmu^2. Terms are ordered lexicographically with gamma most
// significant.
class Poly {
 public:
  using Terms = std::map<Exponents, GaussQ>;

  Poly() = default;
  static Poly constant(const GaussQ& c);
  static Poly symbol(Sym s, int power = 1);
  static Poly monomial(const Exponents& e, const GaussQ& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussQ constant_term() const;
  std::size_t size() const { return terms_.size(); }
  int degree(Sym s) const;
  bool depends_on(Sym s) const { return degree(s) > 0; }
  const GaussQ& leading_coefficient() const { return terms_.rbegin()->second; }

  // Adds c * x^e, rewriting gamma^2 and mu^2.
  void add_term(Exponents e, const GaussQ& c);

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const GaussQ& c) const;
  Poly pow(int n) const;
  Poly conj() const;
  // Replaces symbol s by -s.
  Poly reflect(Sym s) const;

  std::optional<Poly> divide_exact(const Poly& f) const;
  std::complex<double> eval(const Bindings& b) const;
  std::string str() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

 private:
  Terms terms_;
};

// Element of the fraction field. The numerator is reduced; the denominator is
// a product of monic, gamma/mu-free, non-constant polynomial factors. Every
// operation returns this normal form, so is_zero is exact.
class ScalarExpr {
 public:
  struct Factor {
    Poly poly;
    int exp;
  };

  ScalarExpr() = default;
  ScalarExpr(long v) : num_(Poly::constant(GaussQ(v))) {}  // NOLINT
  ScalarExpr(const GaussQ& c) : num_(Poly::constant(c)) {}  // NOLINT
  explicit ScalarExpr(Poly p) : num_(std::move(p)) {}

  static ScalarExpr symbol(Sym s) { return ScalarExpr(Poly::symbol(s)); }
  static ScalarExpr imag_unit() { return ScalarExpr(GaussQ::i()); }
  static ScalarExpr rational(long n, long d);

  const Poly& numerator() const { return num_; }
  const std::vector<Factor>& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  std::optional<GaussQ> constant_value() const;
  bool depends_on(Sym s) const;
  bool equals(const ScalarExpr& other) const;

  ScalarExpr operator-() const;
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
  ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
  ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }

  ScalarExpr scaled(const GaussQ& c) const;
  std::optional<ScalarExpr> checked_div(const ScalarExpr& b) const;
  ScalarExpr inverse() const;
  ScalarExpr pow(int n) const;
  ScalarExpr conj() const;
  ScalarExpr substitute(Sym s, const ScalarExpr& value) const;
  // Re-runs reduction and cancellation; a no-op on values produced here.
  ScalarExpr normalized() const;

  std::complex<double> eval(const Bindings& b) const;
  std::string str() const;

  static ScalarExpr sum(std::span<const ScalarExpr> parts);

 private:
  void cancel();
  void absorb_denominator(Poly d);
  void insert_factor(const Poly& f, int e);

  Poly num_;
  std::vector<Factor> den_;
};

// w_n = (1 + w_{n-1}) / 2, w_0 given.
ScalarExpr omega_chain(const ScalarExpr& w0, int n);

inline ScalarExpr sym(Sym s) { return ScalarExpr::symbol(s); }
inline ScalarExpr imag() { return ScalarExpr::imag_unit(); }

}  // namespace bosonalg
