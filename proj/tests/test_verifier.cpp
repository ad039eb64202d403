#include <doctest.h>

#include "bosonalg/verifier.hpp"

using namespace bosonalg;

TEST_CASE("su2g suite is confirmed throughout") {
  SuiteReport r = run_suite("su2g");
  CHECK(r.oracle_ok());
  CHECK(r.count("finding") == 0);
  CHECK(r.count("confirmed") == r.results.size());
  const RelationResult* herm = r.find("su2g.hermiticity.J0");
  REQUIRE(herm);
  CHECK(herm->claim == "nonzero");
  CHECK_FALSE(herm->exact_zero);
  CHECK(run_suite("su2γ").results.size() == r.results.size());
}

TEST_CASE("reports are deterministic without timings") {
  SuiteReport a = run_suite("su11m");
  SuiteReport b = run_suite("su11m");
  CHECK(a.json(false).dump() == b.json(false).dump());
  CHECK_FALSE(a.json(false).dump().find("seconds") != std::string::npos);
  auto j = a.json(false);
  CHECK(j["summary"]["oracle_ok"] == true);
  CHECK(nlohmann::ordered_json::parse(j.dump()) == j);
}

TEST_CASE("printed su(1,1) Casimir is a finding, not an oracle failure") {
  SuiteReport r = run_suite("su11m");
  const RelationResult* x = r.find("su11m.casimir_printed.central.Zp");
  REQUIRE(x);
  CHECK(x->verdict == "finding");
  CHECK(x->oracle_ok);
  CHECK_FALSE(x->numeric.empty());
  for (const auto& s : x->numeric) CHECK(s.residual_norm > 1e-6);
}

TEST_CASE("commutator antisymmetry is seen by the oracle") {
  AlgebraInstance inst = js_su2_deformed();
  RelationSpec r;
  r.id = "anti";
  r.title = "[Jp, Jm] = -[Jm, Jp]";
  r.lhs = comm(Formula::label("Jp"), Formula::label("Jm"));
  r.rhs = -comm(Formula::label("Jm"), Formula::label("Jp"));
  RelationResult x = check_relation(inst, r);
  CHECK(x.exact_zero);
  CHECK(x.verdict == "confirmed");

  RelationSpec wrong = r;
  wrong.id = "wrong";
  wrong.rhs = comm(Formula::label("Jm"), Formula::label("Jp"));
  RelationResult y = check_relation(inst, wrong);
  CHECK_FALSE(y.exact_zero);
  CHECK(y.verdict == "finding");
  CHECK(y.oracle_ok);
}

TEST_CASE("pauli checks") {
  auto r = pauli_checks();
  CHECK_FALSE(r.empty());
  for (const auto& x : r) {
    CHECK_MESSAGE(x.oracle_ok, x.id);
    CHECK_MESSAGE(x.verdict == "confirmed", x.id);
  }
}

TEST_CASE("pt-all runs only partial PT relations") {
  SuiteReport r = run_suite("pt-all");
  CHECK(r.oracle_ok());
  for (const auto& x : r.results) CHECK(x.kind == "pt");
  const RelationResult* j0 = r.find("su2g.pt.J0.mode1");
  REQUIRE(j0);
  CHECK(j0->verdict == "confirmed");
  const RelationResult* h0 = r.find("higgs.pt.H0.mode1");
  REQUIRE(h0);
  CHECK(h0->verdict == "finding");
}

TEST_CASE("unknown suites are rejected") {
  CHECK_THROWS_AS(run_suite("nosuch"), Error);
}

TEST_CASE("Killing report in three bases") {
  auto j = killing_report(1, 0.6);
  CHECK(j["ladder"]["closes"] == true);
  CHECK(j["ladder"]["signature"]["positive"] == 2);
  CHECK(j["ladder"]["signature"]["negative"] == 1);
  CHECK(j["hermitian_combination"]["signature"]["positive"] == 3);
  CHECK(j["pauli"]["signature"]["positive"] == 3);
  CHECK(j["pauli"]["metric"][1][1] == "2");
}

TEST_CASE("instance serialization") {
  auto j = instance_json(js_su2_deformed());
  CHECK(j["name"] == "su2g");
  CHECK(j["generators"].size() == 3);
  CHECK_FALSE(j["relations"].empty());
  CHECK(nlohmann::ordered_json::parse(j.dump()) == j);
}
