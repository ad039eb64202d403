#include <doctest.h>

#include "bosonalg/realizations.hpp"

using namespace bosonalg;

namespace {

const ScalarExpr I = imag();
const ScalarExpr g = sym(Sym::gamma);
const ScalarExpr w = sym(Sym::w0);

bool residual_zero(const AlgebraInstance& inst, const std::string& id) {
  for (const auto& r : inst.relations())
    if (r.id == id) return inst.evaluate(r.lhs - r.rhs).is_zero();
  throw Error("no relation " + id);
}

Mat2 half(const Mat2& m) { return mat_scale(ScalarExpr::rational(1, 2), m); }

}  // namespace

TEST_CASE("Pauli matrices from dyads") {
  auto s = pauli_from_dyads();
  for (int m = 1; m <= 3; ++m) CHECK(mat_is_zero(mat_sub(s[m - 1], half(pauli(m)))));
}

TEST_CASE("deformed Pauli matrices") {
  auto s = deformed_pauli(Deformation::gamma());
  CHECK(mat_is_zero(mat_sub(s[0], half(mat_sub(pauli(1), mat_scale(I * g, pauli(3)))))));
  CHECK(mat_is_zero(mat_sub(s[1], half(pauli(2)))));
  CHECK(mat_is_zero(mat_sub(s[2], half(mat_add(pauli(3), mat_scale(I * g, pauli(1)))))));
  for (const auto& m : s) CHECK(mat_trace(m).is_zero());
  CHECK_FALSE(mat_is_zero(mat_sub(s[0], mat_adjoint(s[0]))));
  CHECK_FALSE(mat_is_zero(mat_sub(s[2], mat_adjoint(s[2]))));

  auto u = deformed_pauli(Deformation::undeformed());
  for (int m = 1; m <= 3; ++m) CHECK(mat_is_zero(mat_sub(u[m - 1], half(pauli(m)))));

  // deformation enters only the bracket that produces sigma_2
  CHECK(mat_is_zero(mat_sub(mat_comm(s[0], s[1]), mat_scale(I, s[2]))));
  CHECK(mat_is_zero(mat_sub(mat_comm(s[1], s[2]), mat_scale(I, s[0]))));
  CHECK(mat_is_zero(mat_sub(mat_comm(s[2], s[0]), mat_scale(I * w * w, s[1]))));

  auto n = deformed_pauli_numeric(0.6);
  Bindings b;
  b.set_deformation(Sym::gamma, 0.6);
  for (int m = 0; m < 3; ++m)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(std::abs(n[m](r, c) - s[m][r][c].eval(b)) < 1e-12);
}

TEST_CASE("biorthogonal pairing") {
  BiorthogonalSystem b = biorthogonal_system();
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      ScalarExpr p = b.pairing(j, k);
      ScalarExpr expect = j == k ? w : ScalarExpr(0);
      CHECK(p.equals(expect));
    }
}

TEST_CASE("deformed su(2) relations hold exactly") {
  AlgebraInstance su2 = js_su2_deformed();
  for (const char* id : {"su2g.ladder.plus", "su2g.ladder.minus", "su2g.raise_lower", "su2g.raise_lower.poly",
                         "su2g.casimir.central.J0", "su2g.casimir.central.Jp", "su2g.casimir.central.Jm",
                         "su2g.casimir.sign_forms", "su2g.casimir.poly_form"})
    CHECK_MESSAGE(residual_zero(su2, id), std::string(id));
  CHECK_FALSE(residual_zero(su2, "su2g.hermiticity.J0"));

  InstanceOptions p2;
  p2.p = 2;
  AlgebraInstance su2p = js_su2_deformed(p2);
  CHECK(residual_zero(su2p, "su2g.raise_lower"));
  CHECK(residual_zero(su2p, "su2g.casimir.central.Jp"));
}

TEST_CASE("su(1,1) Casimir forms") {
  AlgebraInstance z = js_su11_deformed();
  CHECK(residual_zero(z, "su11m.ladder.plus"));
  CHECK(residual_zero(z, "su11m.raise_lower"));
  CHECK(residual_zero(z, "su11m.casimir.central.Zp"));
  CHECK(residual_zero(z, "su11m.casimir.sign_forms"));
  CHECK_FALSE(residual_zero(z, "su11m.casimir_printed.central.Zp"));
  InstanceOptions o;
  o.mu = Deformation::undeformed();
  CHECK_FALSE(residual_zero(js_su11_deformed(o), "su11m.casimir_printed.central.Zp"));
}

TEST_CASE("fusion scalars") {
  CHECK(omega_chain(ScalarExpr::rational(4, 5), 1).equals(ScalarExpr::rational(9, 10)));
  CHECK(omega_chain(ScalarExpr::rational(4, 5), 2).equals(ScalarExpr::rational(19, 20)));
  Deformation G = Deformation::gamma();
  CHECK(omega_pm(G, G, 1, 1, -1).is_zero());
  CHECK(omega_pm(G, Deformation::negated(G), 2, 1, -1).is_zero());
  CHECK(omega_pm(G, G, 1, 1, 1).equals(ScalarExpr(2) / w.pow(3)));
  CHECK(beta_coefficients(ScalarExpr(1)).b2.equals(ScalarExpr::rational(-4, 3)));
}

TEST_CASE("quadratic fusion") {
  AlgebraInstance q = fuse_boson_quadratic();
  for (const char* id : {"quad.ladder.plus", "quad.ladder.minus", "quad.raise_lower", "quad.casimir6.central.R0",
                         "quad.casimir6.sign_forms"})
    CHECK_MESSAGE(residual_zero(q, id), std::string(id));
  // Lam0 only commutes with Rp when w0 = 1
  CHECK_FALSE(residual_zero(q, "quad.Lam0.central.Rp"));
  CHECK_FALSE(residual_zero(q, "quad.casimir6.central.Rp"));

  InstanceOptions o;
  o.gamma = Deformation::undeformed();
  AlgebraInstance u = fuse_boson_quadratic(o);
  CHECK(residual_zero(u, "quad.Lam0.central.Rp"));
  CHECK(residual_zero(u, "quad.casimir6.central.Rp"));
  CHECK(residual_zero(u, "quad.casimir6.central.Rm"));
  CHECK_FALSE(residual_zero(u, "quad.casimir.central.Rp"));
}

TEST_CASE("Killing form of the deformed ladder basis") {
  AlgebraInstance su2 = js_su2_deformed();
  KillingResult k = killing_metric(su2, {"J0", "Jp", "Jm"});
  REQUIRE(k.closes);
  CHECK(k.metric[0][0].equals(ScalarExpr(2) * w * w));
  CHECK(k.metric[1][2].equals(ScalarExpr(4)));
  CHECK(k.metric[1][1].is_zero());

  InstanceOptions p2;
  p2.p = 2;
  KillingResult k2 = killing_metric(js_su2_deformed(p2), {"J0", "Jp", "Jm"});
  CHECK(k2.metric[1][2].equals(ScalarExpr(4) / (w * w)));

  auto s = deformed_pauli(Deformation::gamma());
  KillingResult km = killing_metric(s, {"s1", "s2", "s3"});
  REQUIRE(km.closes);
  // [s3, s1] = i w^2 s2
  CHECK(km.f[2][0][1].equals(I * w * w));
  CHECK(km.f[0][1][2].equals(I));
  Bindings b;
  b.set_deformation(Sym::gamma, 0.6);
  Signature sig = metric_signature(km.metric, b);
  CHECK_MESSAGE(sig.positive == 3, sig.str());
}

TEST_CASE("instances build") {
  for (const auto& n : instance_names()) {
    AlgebraInstance inst = make_instance(n);
    CHECK(inst.name() == n);
    CHECK_FALSE(inst.relations().empty());
  }
  CHECK_THROWS_AS(make_instance("nope"), Error);
}
