#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "bosonalg/fock.hpp"
#include "bosonalg/operator.hpp"

using namespace bosonalg;

namespace {

const ScalarExpr g = sym(Sym::gamma);
const ScalarExpr I = imag();

OperatorExpr cr(int n, int m) { return OperatorExpr::create(n, m); }
OperatorExpr an(int n, int m) { return OperatorExpr::annihilate(n, m); }

// Words of letters (mode, is_creation), rewritten by a_i a_i' -> a_i' a_i + 1
// and swaps of commuting neighbours until every creation sits left.
using Letter = std::pair<int, bool>;
using Word = std::vector<Letter>;

std::map<Word, long> swap_normal_order(const Word& w0) {
  std::map<Word, long> done;
  std::vector<std::pair<Word, long>> todo{{w0, 1}};
  while (!todo.empty()) {
    auto [w, c] = todo.back();
    todo.pop_back();
    bool moved = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const Letter& l = w[i];
      const Letter& r = w[i + 1];
      if (!l.second && r.second) {
        Word swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        todo.emplace_back(swapped, c);
        if (l.first == r.first) {
          Word contracted;
          for (std::size_t k = 0; k < w.size(); ++k)
            if (k != i && k != i + 1) contracted.push_back(w[k]);
          todo.emplace_back(contracted, c);
        }
        moved = true;
        break;
      }
    }
    if (!moved) done[w] += c;
  }
  return done;
}

OperatorExpr word_to_op(const Word& w, int modes) {
  OperatorExpr r = OperatorExpr::identity(modes);
  for (const auto& [m, dag] : w) r = r * (dag ? cr(modes, m) : an(modes, m));
  return r;
}

OperatorExpr normal_word(const Word& w, int modes) {
  ModeMonomial mono;
  for (const auto& [m, dag] : w) {
    if (dag) ++mono.cre[m];
    else ++mono.ann[m];
  }
  return OperatorExpr::term(modes, mono, ScalarExpr(1));
}

Word random_word(std::mt19937& rng, int modes, int len) {
  std::uniform_int_distribution<int> mode(0, modes - 1);
  std::bernoulli_distribution dag(0.5);
  Word w;
  for (int i = 0; i < len; ++i) w.emplace_back(mode(rng), dag(rng));
  return w;
}

OperatorExpr random_bilinear(std::mt19937& rng, int modes) {
  std::uniform_int_distribution<int> mode(0, modes - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  OperatorExpr r(modes);
  for (int t = 0; t < 3; ++t) {
    ScalarExpr c = ScalarExpr(coef(rng)) + I * ScalarExpr(coef(rng)) * g;
    r += c * (cr(modes, mode(rng)) * an(modes, mode(rng)));
  }
  if (coef(rng) > 1) r += ScalarExpr(coef(rng)) * cr(modes, mode(rng));
  return r;
}

OperatorExpr random_word_op(std::mt19937& rng, int modes, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  return word_to_op(random_word(rng, modes, len(rng)), modes);
}

}  // namespace

TEST_CASE("normal product examples") {
  OperatorExpr a1 = an(2, 0), a1d = cr(2, 0), a2 = an(2, 1), a2d = cr(2, 1);
  CHECK((a1 * a1d) == a1d * a1 + OperatorExpr::identity(2));
  CHECK((a1 * a1d * a1d) == a1d * a1d * a1 + ScalarExpr(2) * a1d);
  CHECK((a1 * a1d).str() == "a1'*a1 + 1");
  OperatorExpr p = (a1d * a2) * (a2d * a1);
  CHECK(p == a1d * a1 + a1d * a2d * a2 * a1);
}

TEST_CASE("commutator examples") {
  OperatorExpr a1 = an(2, 0), a1d = cr(2, 0), a2 = an(2, 1), a2d = cr(2, 1);
  CHECK(commutator(a1, a1d) == OperatorExpr::identity(2));
  CHECK(commutator(a1d * a2, a2d * a1) == a1d * a1 - a2d * a2);
  CHECK(commutator(a1d * a1, a2d * a2).is_zero());
  CHECK_THROWS_AS(commutator(a1, cr(3, 0)), ModeMismatch);
}

TEST_CASE("dagger examples") {
  OperatorExpr a1 = an(2, 0), a1d = cr(2, 0), a2 = an(2, 1), a2d = cr(2, 1);
  CHECK(dagger(a1) == a1d);
  CHECK(dagger((I * g) * (a1d * a2)) == (-(I * g)) * (a2d * a1));
  OperatorExpr j0 = ScalarExpr::rational(1, 2) * (a1d * a1 - a2d * a2) +
                    (I * g / ScalarExpr(2)) * (a1d * a2 + a2d * a1);
  CHECK_FALSE(dagger(j0) == j0);
  CHECK(dagger(j0).substitute(Sym::gamma, ScalarExpr(0)) == j0.substitute(Sym::gamma, ScalarExpr(0)));
}

TEST_CASE("pt transform examples") {
  OperatorExpr a1 = an(2, 0), a1d = cr(2, 0), a2 = an(2, 1), a2d = cr(2, 1);
  CHECK(pt_transform(a1d * a1, 0) == a1d * a1);
  OperatorExpr mix = (I * g) * (a1d * a2 + a2d * a1);
  CHECK(pt_transform(mix, 0) == mix);
  CHECK(pt_transform(mix, 1) == mix);
  OperatorExpr j0 = ScalarExpr::rational(1, 2) * (a1d * a1 - a2d * a2) + mix;
  CHECK_FALSE(pt_transform(j0, std::nullopt) == j0);
  CHECK(pt_transform(j0, std::nullopt) - j0 == ScalarExpr(-2) * mix);
}

TEST_CASE("canonical text orders modes and puts creations first") {
  OperatorExpr r = an(2, 1) * cr(2, 0) * cr(2, 0);
  CHECK(r.str() == "a1'^2*a2");
  OperatorExpr c = (ScalarExpr(1) + g) * cr(2, 1);
  CHECK(c.str() == "(gamma + 1)*a2'");
}

TEST_CASE("conserved charges") {
  std::vector<OperatorExpr> j{cr(2, 0) * an(2, 0) - cr(2, 1) * an(2, 1), cr(2, 0) * an(2, 1),
                              cr(2, 1) * an(2, 0) + (I * g) * cr(2, 0) * an(2, 1)};
  auto cj = conserved_charges(j);
  REQUIRE(cj.size() == 1);
  CHECK(cj[0] == std::vector<long>{1, 1});

  // Undeformed R generators: J+ a3 and J- a3'.
  std::vector<OperatorExpr> r{cr(3, 0) * an(3, 0), cr(3, 0) * an(3, 1) * an(3, 2),
                              cr(3, 1) * an(3, 0) * cr(3, 2)};
  auto cr3 = conserved_charges(r);
  REQUIRE(cr3.size() == 2);
  // Same span as {(1,1,0), (1,-1,2)}: both are combinations of the basis found.
  auto in_span = [&](std::vector<long> v) {
    long det = cr3[0][0] * cr3[1][1] - cr3[0][1] * cr3[1][0];
    for (int k = 0; k < 3; ++k) {
      long d = cr3[0][0] * cr3[1][k] - cr3[0][k] * cr3[1][0];
      long e = cr3[0][1] * cr3[1][k] - cr3[0][k] * cr3[1][1];
      long f = v[0] * e - v[1] * d + v[k] * det;
      if (f != 0) return false;
    }
    return true;
  };
  CHECK(in_span({1, 1, 0}));
  CHECK(in_span({1, -1, 2}));
  CHECK_FALSE(in_span({0, 0, 1}));

  std::vector<OperatorExpr> free1{an(1, 0), cr(1, 0)};
  CHECK(conserved_charges(free1).empty());
}

TEST_CASE("closed-form reordering agrees with single-swap rewriting") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int modes = 1 + trial % 3;
    Word w = random_word(rng, modes, 1 + trial % 7);
    OperatorExpr expected(modes);
    for (const auto& [nw, c] : swap_normal_order(w)) expected += ScalarExpr(c) * normal_word(nw, modes);
    REQUIRE(word_to_op(w, modes) == expected);
  }
}

TEST_CASE("Jacobi, Leibniz and adjoint of commutators on random operators") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    int modes = 2 + trial % 2;
    OperatorExpr a = random_bilinear(rng, modes);
    OperatorExpr b = random_bilinear(rng, modes);
    OperatorExpr c = random_bilinear(rng, modes);
    OperatorExpr jac = commutator(commutator(a, b), c) + commutator(commutator(b, c), a) +
                       commutator(commutator(c, a), b);
    REQUIRE(jac.is_zero());
    REQUIRE(commutator(a, b * c) == commutator(a, b) * c + b * commutator(a, c));
    REQUIRE(dagger(commutator(a, b)) == commutator(dagger(b), dagger(a)));
    REQUIRE(dagger(dagger(a)) == a);
    REQUIRE(commutator(a, b) == -commutator(b, a));
    REQUIRE(anticommutator(a, b) == anticommutator(b, a));
    int j = trial % modes;
    REQUIRE(pt_transform(pt_transform(a, j), j) == a);
  }
}

TEST_CASE("normal product matches truncated Fock matrix products") {
  std::mt19937 rng(5);
  FockSector box = box_sector(2, 6);
  std::vector<std::size_t> safe;
  for (std::size_t c = 0; c < box.dim(); ++c)
    if (box.basis[c][0] <= 2 && box.basis[c][1] <= 2) safe.push_back(c);
  for (int trial = 0; trial < 300; ++trial) {
    OperatorExpr a = random_word_op(rng, 2, 2);
    OperatorExpr b = random_word_op(rng, 2, 2);
    ExactMatrix prod = represent_exact(a, box) * represent_exact(b, box);
    ExactMatrix direct = represent_exact(a * b, box);
    for (std::size_t c : safe)
      for (std::size_t r = 0; r < box.dim(); ++r) REQUIRE(prod.at(r, c) == direct.at(r, c));
  }
}
