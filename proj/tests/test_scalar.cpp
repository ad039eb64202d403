#include <doctest.h>

#include <cmath>
#include <random>

#include "bosonalg/scalar.hpp"

using namespace bosonalg;

namespace {

const ScalarExpr g = sym(Sym::gamma);
const ScalarExpr w = sym(Sym::w0);
const ScalarExpr I = imag();

Bindings consistent_binding(double gamma, double s) {
  Bindings b;
  b.set_deformation(Sym::gamma, gamma).set_deformation(Sym::mu, 0.5 * gamma + 0.1);
  b.set(Sym::s, s).set(Sym::s0, s + 0.3).set(Sym::x, 0.37 - s);
  return b;
}

ScalarExpr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_int_distribution<int> small(-3, 3);
  if (depth == 0) {
    switch (pick(rng) % 5) {
      case 0: return g;
      case 1: return w;
      case 2: return sym(Sym::s);
      case 3: return I * ScalarExpr(small(rng));
      default: return ScalarExpr::rational(small(rng), 1 + std::abs(small(rng)));
    }
  }
  ScalarExpr a = random_expr(rng, depth - 1);
  ScalarExpr b = random_expr(rng, depth - 1);
  switch (pick(rng)) {
    case 0: case 1: return a + b;
    case 2: return a - b;
    case 3: case 4: return a * b;
    case 5:
      if (!b.is_zero()) return a / b;
      return a;
    default: return a * a + b;
  }
}

}  // namespace

TEST_CASE("scalar ring defining relation and inverses") {
  CHECK((g * g - (ScalarExpr(1) - w * w)).is_zero());
  CHECK(((ScalarExpr(1) / w) * w).equals(ScalarExpr(1)));
  Bindings b;
  b.set(Sym::gamma, 0.6).set(Sym::w0, 0.8);
  CHECK(std::abs((g * g + w * w).eval(b) - 1.0) < 1e-12);
}

TEST_CASE("gamma inverse rationalizes through the relation") {
  ScalarExpr inv = ScalarExpr(1) / g;
  CHECK((inv * g).equals(ScalarExpr(1)));
  CHECK(!inv.numerator().depends_on(Sym::w0));
  Bindings b;
  b.set(Sym::gamma, 0.6).set(Sym::w0, 0.8);
  CHECK(std::abs((g / (ScalarExpr(1) - w * w)).eval(b) - 1.0 / 0.6) < 1e-12);
  ScalarExpr z = (I * g * ScalarExpr(3)).inverse();
  CHECK((z * I * g * ScalarExpr(3)).equals(ScalarExpr(1)));
}

TEST_CASE("division by zero is reported") {
  CHECK_THROWS_AS(ScalarExpr(1) / (g * g + w * w - ScalarExpr(1)), DivisionByZero);
  CHECK(!ScalarExpr(1).checked_div(ScalarExpr(0)).has_value());
}

TEST_CASE("conjugation") {
  CHECK((I * g).conj().equals(-(I * g)));
  CHECK((ScalarExpr(3) / w).conj().equals(ScalarExpr(3) / w));
  ScalarExpr e = ScalarExpr(2) * I + w;
  CHECK(e.conj().conj().equals(e));
  ScalarExpr f = (I + w) / (ScalarExpr(1) + I * w);
  CHECK(f.conj().conj().str() == f.str());
}

TEST_CASE("omega chain") {
  for (int n = 0; n < 5; ++n) CHECK(omega_chain(ScalarExpr(1), n).equals(ScalarExpr(1)));
  ScalarExpr w08 = ScalarExpr::rational(4, 5);
  CHECK(omega_chain(w08, 1).equals(ScalarExpr::rational(9, 10)));
  CHECK(omega_chain(w08, 3).equals(ScalarExpr::rational(39, 40)));
  for (int n = 0; n < 6; ++n) {
    ScalarExpr closed = ScalarExpr(1) - (ScalarExpr(1) - w) / ScalarExpr(1L << n);
    CHECK(omega_chain(w, n).equals(closed));
  }
}

TEST_CASE("numeric evaluation") {
  Bindings b;
  b.set(Sym::gamma, 0.5);
  CHECK(std::abs((I * g).eval(b) - std::complex<double>(0, 0.5)) < 1e-15);
  Bindings c;
  c.set(Sym::w0, 0.8);
  CHECK(std::abs((ScalarExpr(2) * w.pow(-1)).eval(c) - 2.5) < 1e-14);
  CHECK_THROWS_AS((g + w).eval(c), UnboundSymbol);
  Bindings d;
  d.set(Sym::w0, 1.0);
  CHECK_THROWS_AS((ScalarExpr(1) / (ScalarExpr(1) - w)).eval(d), NearZeroDenominator);
}

TEST_CASE("inconsistent bindings are rejected") {
  Bindings b;
  b.set(Sym::gamma, 0.6).set(Sym::w0, 0.7);
  CHECK_THROWS_AS(b.validate(), Error);
  Bindings ok;
  ok.set_deformation(Sym::gamma, 0.6);
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("decimal parsing is exact") {
  CHECK(parse_rational("0.25") == mpq_class(1, 4));
  CHECK(parse_rational("-1.5") == mpq_class(-3, 2));
  CHECK(parse_rational("7/14") == mpq_class(1, 2));
}

TEST_CASE("canonical text") {
  CHECK(((ScalarExpr(1) + w) / (w * w)).str() == "(w0 + 1)/w0^2");
  CHECK((ScalarExpr(3) / (w * (ScalarExpr(1) + w))).str() == "3/((w0 + 1)*w0)");
  CHECK((I * g).str() == "i*gamma");
  CHECK((-ScalarExpr::rational(3, 2) * I * w).str() == "-3/2*i*w0");
}

TEST_CASE("ring laws and zero test on random expressions") {
  std::mt19937 rng(7);
  std::vector<Bindings> binds{consistent_binding(0.31, 0.7), consistent_binding(0.62, -0.4),
                              consistent_binding(0.83, 1.3)};
  for (int trial = 0; trial < 150; ++trial) {
    ScalarExpr a = random_expr(rng, 2);
    ScalarExpr b = random_expr(rng, 2);
    ScalarExpr c = random_expr(rng, 2);
    CHECK(((a + b) + c - (a + (b + c))).is_zero());
    CHECK(((a * b) * c - a * (b * c)).is_zero());
    CHECK((a * (b + c) - (a * b + a * c)).is_zero());
    CHECK((a * b - b * a).is_zero());
    CHECK(a.normalized().str() == a.str());
    ScalarExpr z = a * (b + c) - a * c - b * a;
    REQUIRE(z.is_zero());
    for (const auto& bind : binds) {
      try {
        CHECK(std::abs(z.eval(bind)) < 1e-10);
        auto diff = (a * b).eval(bind) - a.eval(bind) * b.eval(bind);
        CHECK(std::abs(diff) < 1e-8 * (1 + std::abs(a.eval(bind) * b.eval(bind))));
      } catch (const NearZeroDenominator&) {
      }
    }
    if (!b.is_zero()) CHECK(((a / b) * b - a).is_zero());
  }
}
