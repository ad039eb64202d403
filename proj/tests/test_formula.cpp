#include <doctest.h>

#include <random>

#include "bosonalg/formula.hpp"

using namespace bosonalg;

namespace {

OperatorExpr resolve2(const std::string& name) {
  if (name == "a1") return OperatorExpr::annihilate(2, 0);
  if (name == "a2") return OperatorExpr::annihilate(2, 1);
  if (name == "N") return OperatorExpr::number(2, 0) + OperatorExpr::number(2, 1);
  throw Error("unknown " + name);
}

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth == 0) {
    switch (pick(rng) % 5) {
      case 0: return Formula::label("a1");
      case 1: return Formula::label("a2");
      case 2: return Formula::label("N");
      case 3: return Formula(sym(Sym::gamma));
      default: return Formula(ScalarExpr::rational(pick(rng) - 4, 1 + pick(rng) % 3));
    }
  }
  Formula a = random_formula(rng, depth - 1);
  Formula b = random_formula(rng, depth - 1);
  switch (pick(rng)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: case 3: return a * b;
    case 4: return -a;
    case 5: return a.pow(2);
    case 6: return a.dag();
    case 7: return comm(a, b);
    case 8: return anti(a, b);
    default: return a / Formula(sym(Sym::w0));
  }
}

}  // namespace

TEST_CASE("parser precedence and operators") {
  Formula f = parse_formula("[a1, a1'] + 2*N^2 - {a1, a2}/w0");
  OperatorExpr v = evaluate(f, 2, resolve2);
  OperatorExpr n = resolve2("N");
  OperatorExpr expect = OperatorExpr::identity(2) + ScalarExpr(2) * power(n, 2) -
                        (ScalarExpr(1) / sym(Sym::w0)) * anticommutator(resolve2("a1"), resolve2("a2"));
  CHECK(v == expect);
  CHECK(evaluate(parse_formula("-a1^2"), 2, resolve2) == -power(resolve2("a1"), 2));
  CHECK(evaluate(parse_formula("a1'^2"), 2, resolve2) == power(dagger(resolve2("a1")), 2));
}

TEST_CASE("scalar subtrees fold and symbols are recognised") {
  Formula f = parse_formula("(1 - gamma^2)/w0^2");
  REQUIRE(f.is_scalar());
  CHECK(f.node().scalar.equals(ScalarExpr(1)));
  CHECK(parse_formula("i*i").node().scalar.equals(ScalarExpr(-1)));
  CHECK(parse_formula("J0").node().kind == NodeKind::label);
}

TEST_CASE("unicode spellings map to ascii") {
  CHECK(normalize_unicode("ω₀ γ J₊ a₁†") == "w0 gamma Jp a1'");
  Formula f = parse_formula("γ² + ω₀²");
  CHECK(f.node().scalar.equals(ScalarExpr(1)));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("a1 +"), ParseError);
  CHECK_THROWS_AS(parse_formula("[a1, a2"), ParseError);
  CHECK_THROWS_AS(parse_formula("a1 / a2"), ParseError);
  CHECK_THROWS_AS(parse_formula("a1 / 0"), ParseError);
  try {
    parse_formula("a1 $ a2");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("printing then parsing reproduces the tree") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    Formula f = random_formula(rng, 1 + trial % 4);
    Formula g = parse_formula(f.str());
    REQUIRE_MESSAGE(structurally_equal(f, g), f.str());
    REQUIRE(g.str() == f.str());
  }
}
