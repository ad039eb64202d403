#include <doctest.h>

#include <algorithm>

#include "bosonalg/fock.hpp"

using namespace bosonalg;

namespace {

const ScalarExpr g = sym(Sym::gamma);
const ScalarExpr I = imag();

OperatorExpr j0_deformed() {
  OperatorExpr n1 = OperatorExpr::number(2, 0), n2 = OperatorExpr::number(2, 1);
  OperatorExpr hop = OperatorExpr::create(2, 0) * OperatorExpr::annihilate(2, 1) +
                     OperatorExpr::create(2, 1) * OperatorExpr::annihilate(2, 0);
  return ScalarExpr::rational(1, 2) * (n1 - n2) + (I * g / ScalarExpr(2)) * hop;
}

Bindings at_gamma(double gamma) {
  Bindings b;
  b.set_deformation(Sym::gamma, gamma);
  return b;
}

}  // namespace

TEST_CASE("sector enumeration") {
  FockSector s = charge_sector(2, {{1, 1}}, {2});
  REQUIRE(s.dim() == 3);
  CHECK(s.basis[0] == Occupation{2, 0});
  CHECK(s.basis[1] == Occupation{1, 1});
  CHECK(s.basis[2] == Occupation{0, 2});

  FockSector t = charge_sector(3, {{1, 1, 0}, {1, -1, 2}}, {1, 1});
  REQUIRE(t.dim() == 2);
  CHECK(t.basis[0] == Occupation{1, 0, 0});
  CHECK(t.basis[1] == Occupation{0, 1, 1});

  CHECK(box_sector(2, 3).dim() == 16);
  for (int m = 0; m <= 12; ++m) CHECK(charge_sector(2, {{1, 1}}, {m}).dim() == std::size_t(m + 1));
  CHECK_THROWS_AS(charge_sector(2, {{1, -1}}, {0}), Error);
}

TEST_CASE("number operator is diagonal") {
  FockSector box = box_sector(2, 3);
  SparseMatrix m = represent(OperatorExpr::number(2, 1), box, Bindings{});
  for (std::size_t c = 0; c < box.dim(); ++c)
    for (std::size_t r = 0; r < box.dim(); ++r)
      CHECK(m.coeff(int(r), int(c)) == Cplx(r == c ? box.basis[c][1] : 0, 0));
}

TEST_CASE("J0 in the two-boson sector is half the tridiagonal matrix") {
  FockSector s = charge_sector(2, {{1, 1}}, {2});
  OperatorExpr j0 = specialize(j0_deformed(), {{Sym::gamma, ScalarExpr::rational(3, 5)}, {Sym::w0, ScalarExpr::rational(4, 5)}});
  ExactMatrix e = represent_exact(j0, s);
  // A: diagonal (2, 0, -2), super-diagonal i*gamma*(k+1), sub-diagonal i*gamma*(m-k)
  GaussQ ig{0, mpq_class(3, 5)};
  CHECK(e.at(0, 0) == GaussQ(1));
  CHECK(e.at(1, 1) == GaussQ(0));
  CHECK(e.at(2, 2) == GaussQ(-1));
  CHECK(e.at(0, 1) == ig * GaussQ(mpq_class(1, 2)));
  CHECK(e.at(1, 2) == ig);
  CHECK(e.at(1, 0) == ig);
  CHECK(e.at(2, 1) == ig * GaussQ(mpq_class(1, 2)));
  CHECK(e.at(0, 2) == GaussQ(0));

  SparseMatrix f = represent(j0_deformed(), s, at_gamma(0.6), Basis::fock);
  Eigen::MatrixXcd d(f);
  CHECK(std::abs(d(0, 1) - d(1, 0)) < 1e-15);
}

TEST_CASE("charge sector rejects non-conserving operators") {
  FockSector s = charge_sector(2, {{1, 1}}, {2});
  CHECK_THROWS_AS(represent(OperatorExpr::create(2, 0), s, Bindings{}), SectorNotInvariant);
}

TEST_CASE("representation is a homomorphism on the invariant sector") {
  FockSector s = charge_sector(2, {{1, 1}}, {4});
  OperatorExpr jp = OperatorExpr::create(2, 0) * OperatorExpr::annihilate(2, 1) + (I * g) * j0_deformed();
  OperatorExpr jm = dagger(jp);
  Bindings b = at_gamma(0.6);
  SparseMatrix lhs = represent(commutator(jp, jm), s, b);
  SparseMatrix a = represent(jp, s, b), c = represent(jm, s, b);
  SparseMatrix rhs = SparseMatrix(a * c) - SparseMatrix(c * a);
  CHECK(Eigen::MatrixXcd(lhs - rhs).norm() < 1e-12);
}

TEST_CASE("eigenvalues of J0") {
  FockSector s = charge_sector(2, {{1, 1}}, {2});
  EigenResult r = oracle_eigensolve(Eigen::MatrixXcd(represent(j0_deformed(), s, at_gamma(0.6))));
  std::vector<double> re;
  for (int k = 0; k < r.values.size(); ++k) {
    CHECK(std::abs(r.values[k].imag()) < 1e-9);
    re.push_back(r.values[k].real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-0.8).epsilon(1e-9));
  CHECK(std::abs(re[1]) < 1e-9);
  CHECK(re[2] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(r.max_residual < 1e-9);

  FockSector s5 = charge_sector(2, {{1, 1}}, {5});
  Eigen::MatrixXcd m5(represent(j0_deformed(), s5, at_gamma(0.0)));
  CHECK((m5 - m5.adjoint()).norm() < 1e-15);
  EigenResult h = oracle_eigensolve(m5);
  std::vector<double> hv;
  for (int k = 0; k < h.values.size(); ++k) hv.push_back(h.values[k].real());
  std::sort(hv.begin(), hv.end());
  std::vector<double> expect{-2.5, -1.5, -0.5, 0.5, 1.5, 2.5};
  for (std::size_t k = 0; k < 6; ++k) CHECK(hv[k] == doctest::Approx(expect[k]).epsilon(1e-9));

  Eigen::MatrixXcd m(represent(j0_deformed(), s, at_gamma(0.6)));
  CHECK((m * m.adjoint() - m.adjoint() * m).norm() > 0.1);
}

TEST_CASE("box comparisons respect margins") {
  OperatorExpr a3 = OperatorExpr::annihilate(3, 2);
  DefinitionLookup lookup = [&](const std::string& name) {
    NumericDefinition d;
    if (name == "a3") d.leaf = a3;
    return d;
  };
  Formula lhs = comm(Formula::label("a3"), Formula::label("a3").dag());
  std::vector<std::vector<long>> w{{1, 1, 0}, {0, 0, 1}};
  auto peaks = formula_peaks(lhs, lookup, w);
  CHECK(peaks == std::vector<long>{0, 1});
  FockSector b = weighted_box(3, w, {2, 6});
  MatrixEvaluator ev(b, Bindings{}, lookup);
  SparseMatrix l = ev.eval(lhs);
  SparseMatrix one = ev.eval(Formula(1));
  CompareResult r = boundary_safe_compare(l, one, b, peaks, {0, 1});
  CHECK(r.max_abs_diff < 1e-12);
  CHECK(r.columns > 0);
  CHECK_THROWS_AS(boundary_safe_compare(l, one, b, {0, 2}, {0, 1}), MarginViolation);
  std::size_t top = *b.find({0, 0, 6});
  CHECK(column_diff(l, one, {top}) > 0.0);
}

TEST_CASE("matrix export lists nonzero entries") {
  FockSector s = charge_sector(2, {{1, 1}}, {1});
  std::string csv = matrix_csv(represent(OperatorExpr::number(2, 0), s, Bindings{}));
  CHECK(csv.find("row,col,re,im") == 0);
  CHECK(csv.find("0,0,1,0") != std::string::npos);
}
