#include <doctest.h>

#include <random>

#include "bosonalg/spectral.hpp"

using namespace bosonalg;

namespace {

const ScalarExpr I = imag();
const ScalarExpr g = sym(Sym::gamma);
const ScalarExpr w = sym(Sym::w0);

}  // namespace

TEST_CASE("tridiagonal matrix of 2 J0") {
  Tridiagonal t = build_j0_matrix(2);
  CHECK(t.at(0, 0).equals(ScalarExpr(2)));
  CHECK(t.at(0, 1).equals(I * g));
  CHECK(t.at(1, 0).equals(ScalarExpr(2) * I * g));
  CHECK(t.at(1, 2).equals(ScalarExpr(2) * I * g));
  CHECK(t.at(2, 1).equals(I * g));
  CHECK(t.at(2, 2).equals(ScalarExpr(-2)));
  CHECK(t.at(0, 2).is_zero());

  Tridiagonal t1 = build_j0_matrix(1);
  CHECK(t1.at(0, 1).equals(I * g));
  CHECK(t1.at(1, 0).equals(I * g));

  Eigen::MatrixXcd z = j0_matrix(4, 0.0);
  CHECK((z - Eigen::MatrixXcd(Eigen::VectorXcd::LinSpaced(5, 4, -4).asDiagonal())).norm() == 0.0);
  CHECK_THROWS_AS(build_j0_matrix(0), Error);
}

TEST_CASE("matrix agrees with the Bargmann representation") {
  for (int m = 1; m <= 12; ++m) {
    CHECK(matches_representation_exact(m, Deformation::exact(mpq_class(3, 5), mpq_class(4, 5))));
    CHECK(matches_representation_exact(m, Deformation::exact(mpq_class(5, 13), mpq_class(12, 13))));
    CHECK(representation_diff(m, 0.37) < 1e-14);
  }
}

TEST_CASE("Gershgorin disks") {
  GershgorinReport a = gershgorin(3, mpq_class(1, 5));
  CHECK(a.centers == std::vector<long>{3, 1, -1, -3});
  CHECK(a.radius == mpq_class(3, 5));
  CHECK(a.columns_uniform);
  CHECK(a.disjoint);
  CHECK(a.per_disk == std::vector<int>{1, 1, 1, 1});

  GershgorinReport b = gershgorin(3, mpq_class(1, 2));
  CHECK_FALSE(b.disjoint);
  CHECK(b.contained);
  // interior rows carry (m + 2) gamma
  CHECK(b.row_radii[1] == mpq_class(5, 2));

  GershgorinReport c = gershgorin(2, mpq_class(3, 5));
  CHECK(c.contained);
  CHECK(std::abs(c.eigenvalues[0] - std::complex<double>(1.6, 0)) < 1e-12);

  // touching disks at gamma = 1/m are not disjoint
  CHECK_FALSE(gershgorin(4, mpq_class(1, 4)).disjoint);
  for (int m = 1; m <= 12; ++m)
    for (const char* s : {"0.1", "0.25", "0.5", "0.75", "0.9"}) {
      GershgorinReport r = gershgorin(m, parse_rational(s));
      CHECK(r.columns_uniform);
      CHECK(r.disjoint == r.below_threshold);
      CHECK(r.contained);
    }
  CHECK_THROWS_AS(gershgorin(2, 1), Error);
}

TEST_CASE("recursion polynomial vanishes on the closed-form roots") {
  Tridiagonal t2 = build_j0_matrix(2);
  CharPoly c2 = char_poly(t2);
  CHECK(c2.all_roots());
  CHECK(c2.factored);
  ScalarExpr x = sym(Sym::x);
  CHECK((c2.P[3] - c2.leading * x * (x * x - ScalarExpr(4) * w * w)).is_zero());

  CharPoly c3 = char_poly(build_j0_matrix(3));
  CHECK((c3.P[4] - c3.leading * (x * x - w * w) * (x * x - ScalarExpr(9) * w * w)).is_zero());

  for (int m = 1; m <= 12; ++m) {
    CharPoly cp = char_poly(build_j0_matrix(m));
    CHECK_MESSAGE(cp.all_roots(), m);
    CHECK(cp.factored);
  }
  CHECK_THROWS_AS(char_poly(build_j0_matrix(3, Deformation::undeformed())), DivisionByZero);
}

TEST_CASE("closed-form spectrum against the dense oracle") {
  auto s2 = closed_form_spectrum(2, 0.6);
  CHECK(s2[0] == doctest::Approx(0.8));
  CHECK(s2[1] == 0.0);
  CHECK(s2[2] == doctest::Approx(-0.8));

  auto s5 = closed_form_spectrum(5, 0.3);
  CHECK(s5[0] == doctest::Approx(2.5 * std::sqrt(0.91)));
  CHECK(s5[2] == doctest::Approx(0.5 * std::sqrt(0.91)));

  for (double v : closed_form_spectrum(4, 0.999999)) CHECK(std::abs(v) < 3e-3);

  for (int m = 1; m <= 12; ++m)
    for (double gm : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      OracleSpectrum o = oracle_spectrum(m, gm);
      auto cf = closed_form_spectrum(m, gm);
      for (int k = 0; k <= m; ++k) CHECK(std::abs(o.values[k] - cf[k]) < 1e-9);
      CHECK(o.max_imag < 1e-9);
    }
}

TEST_CASE("eigenvectors from the recursion") {
  Tridiagonal t = build_j0_matrix(2);
  CharPoly cp = char_poly(t);
  auto v = eigenvector_exact(cp, 2, ScalarExpr(2) * w);
  CHECK(v[0].equals(-(ScalarExpr(1) + w) / (ScalarExpr(1) - w)));
  CHECK(v[1].equals(ScalarExpr(-2) * I * (ScalarExpr(1) + w) / g));
  CHECK(v[2].equals(ScalarExpr(1)));
  for (const auto& r : eigen_residual(t, ScalarExpr(2) * w, v)) CHECK(r.is_zero());

  auto v0 = eigenvector_exact(cp, 2, ScalarExpr(0));
  CHECK(v0[0].equals(ScalarExpr(-1)));
  CHECK(v0[1].equals(ScalarExpr(-2) * I / g));
  CHECK_THROWS_AS(eigenvector_exact(cp, 2, w), Error);

  for (int m = 1; m <= 8; ++m) {
    Tridiagonal tm = build_j0_matrix(m);
    CharPoly cm = char_poly(tm);
    for (const auto& ev : closed_form_spectrum(m)) {
      ScalarExpr x = ScalarExpr(2) * ev;
      for (const auto& r : eigen_residual(tm, x, eigenvector_exact(cm, m, x))) CHECK(r.is_zero());
    }
  }

  // the zero-eigenvalue middle component grows without bound as gamma -> 0
  CHECK(std::abs(eigenvector_numeric(2, 1e-6, 0.0)[1]) > 1e5);
}

TEST_CASE("partial PT classification") {
  for (int m : {2, 3}) {
    SpectralResult r = spectrum(m, mpq_class(3, 5), {true});
    for (const auto& s : r.states) {
      CHECK(s.pt.label == (m == 2 ? "conforming" : "breaking"));
      CHECK(s.exact_pt->label == s.pt.label);
      CHECK(*s.exact_residual_zero);
      CHECK(s.alternates);
    }
  }
  for (int m = 1; m <= 12; ++m)
    for (double gm : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      SpectralResult r = spectrum(m, mpq_class(gm));
      for (const auto& s : r.states) CHECK(std::abs(s.pt.ratio - double(s.pt.expected)) < 1e-8);
    }

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    int m = 1 + trial % 7;
    Eigen::VectorXcd v = eigenvector_numeric(m, 0.45, (m - 2 * (trial % (m + 1))) * std::sqrt(1 - 0.45 * 0.45));
    std::complex<double> z(u(rng), u(rng));
    PTClass a = pt_classify(v, m);
    PTClass b = pt_classify(z * v, m);
    CHECK(std::abs(a.ratio - b.ratio) < 1e-9);
    CHECK(a.label == b.label);
    CHECK(std::abs(std::abs(b.lambda1) - 1.0) < 1e-9);
  }

  Eigen::VectorXcd junk(3);
  junk << 1.0, std::complex<double>(1, 1), 2.0;
  CHECK(pt_classify(junk, 2).label == "non-eigenstate-of-Pi");
}

TEST_CASE("printed eigenfunction coefficients") {
  auto d2 = reference_diff(2, 0.6);
  REQUIRE(d2.size() == 3);
  for (const auto& d : d2) CHECK(d.middle_match);
  CHECK_FALSE(d2[0].leading_match);
  CHECK_FALSE(d2[1].leading_match);
  CHECK(d2[2].leading_match);

  auto d3 = reference_diff(3, 0.6);
  REQUIRE(d3.size() == 4);
  CHECK(d3[0].middle_match);
  CHECK(d3[1].middle_match);
  CHECK_FALSE(d3[2].components[1].match);
  CHECK(d3[2].components[2].match);
  CHECK(reference_diff(4, 0.6).empty());
}

TEST_CASE("spectral report") {
  SpectralResult r = spectrum(3, mpq_class(3, 5));
  auto j = r.json();
  CHECK(j["m"] == 3);
  CHECK(j["eigen"].size() == 4);
  CHECK(j["gershgorin"]["disjoint"] == false);
  CHECK(j["eigen"][0]["value"].get<double>() == doctest::Approx(1.2));
  CHECK(j["eigen"][3]["pt"]["label"] == "breaking");
  CHECK(r.symmetric());
  CHECK(nlohmann::ordered_json::parse(j.dump()) == j);

  std::string csv = trajectory_csv(4, 0.05, 0.95, 19);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 19 * 5);
  CHECK_THROWS_AS(trajectory_csv(4, 0.0, 0.5, 3), Error);
  CHECK_THROWS_AS(spectrum(2, mpq_class(3, 2)), Error);
}
