#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bosonalg/spectral.hpp"
#include "bosonalg/verifier.hpp"

using namespace bosonalg;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.3.0";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string out;
  std::string format = "json";
  unsigned seed = 1;
  bool no_timing = false;
};

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Json manifest(const std::string& command, const Json& params, const Common& c) {
  Json m;
  m["command"] = command;
  m["parameters"] = params;
  m["tool"] = "bosonalg";
  m["version"] = kVersion;
  if (!c.no_timing) m["timestamp"] = utc_now();
  return m;
}

// Writes to a sibling temporary and renames, so readers never see half a file.
void emit(const std::string& text, const Common& c) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const std::string tmp = c.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
  }
  if (std::rename(tmp.c_str(), c.out.c_str()) != 0) throw std::runtime_error("cannot rename to " + c.out);
}

void emit_json(const Json& j, const Common& c) { emit(j.dump(2), c); }

bool is_symbolic(const std::string& s) { return s == "sym" || s == "symbolic" || s == "gamma" || s == "γ" || s == "mu" || s == "μ"; }

mpq_class parse_unit_interval(const std::string& text, const char* what) {
  mpq_class v;
  try {
    v = parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot read ") + what + " '" + text + "'");
  }
  if (v <= 0 || v >= 1) throw UsageError(std::string(what) + " must lie in (0, 1)");
  return v;
}

// An exact square root of 1 - g^2 when one exists.
std::optional<mpq_class> rational_partner(const mpq_class& g) {
  mpq_class r = 1 - g * g;
  if (r < 0) return std::nullopt;
  mpz_class n = r.get_num(), d = r.get_den();
  mpz_class sn = sqrt(n), sd = sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return mpq_class(sn, sd);
}

struct DeformationArg {
  Deformation def;
  std::optional<double> value;
  std::string label;
};

DeformationArg deformation_arg(const std::string& text, Deformation symbolic, const char* what) {
  if (is_symbolic(text)) return {symbolic, std::nullopt, "symbolic"};
  mpq_class v;
  try {
    v = parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot read ") + what + " '" + text + "'");
  }
  if (v < 0 || v >= 1) throw UsageError(std::string(what) + " must lie in [0, 1)");
  auto w = rational_partner(v);
  if (w) return {Deformation::exact(v, *w), v.get_d(), text + " (exact)"};
  return {symbolic, v.get_d(), text + " (oracle binding; engine symbolic)"};
}

int cmd_verify(const std::string& suite, const std::string& gamma, const std::string& mu, int p, int q, int r,
               int sectors, const Common& c) {
  auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end() && suite != "su2γ" && suite != "su11μ" &&
      suite != "su2gamma" && suite != "su11mu")
    throw UsageError("unknown suite '" + suite + "'");
  if (p < 0 || q < 0 || r < 0) throw UsageError("p, q, r must be non-negative");
  InstanceOptions o;
  o.p = p;
  o.q = q;
  o.r = r;
  DeformationArg g = deformation_arg(gamma, Deformation::gamma(), "gamma");
  DeformationArg m = deformation_arg(mu, Deformation::mu(), "mu");
  o.gamma = g.def;
  o.mu = m.def;
  VerifyOptions v;
  v.sectors = sectors;
  if (g.value || m.value) v.bindings = {oracle_binding(g.value.value_or(0.3), m.value.value_or(0.5))};

  SuiteReport rep = run_suite(suite, o, v);
  Json params{{"suite", rep.suite}, {"gamma", g.label}, {"mu", m.label}, {"p", p}, {"q", q}, {"r", r},
              {"sectors", sectors}};
  if (c.format == "text") {
    std::ostringstream os;
    os << "# bosonalg " << kVersion << " verify " << rep.suite << " gamma=" << g.label << " mu=" << m.label
       << " p=" << p << " q=" << q << " r=" << r << "\n";
    for (const auto& x : rep.results) {
      os << (x.oracle_ok ? "ok   " : "FAIL ") << x.id << "  [" << x.verdict << "]";
      if (!x.exact_zero) os << "  residual: " << x.residual.substr(0, 160) << (x.residual.size() > 160 ? " ..." : "");
      os << "\n";
    }
    for (const char* s : {"confirmed", "confirmed on condition states", "finding", "finding on condition states",
                          "untestable"})
      os << "# " << s << ": " << rep.count(s) << "\n";
    os << "# oracle_ok: " << (rep.oracle_ok() ? "true" : "false") << "\n";
    emit(os.str(), c);
  } else {
    Json j;
    j["manifest"] = manifest("verify", params, c);
    Json body = rep.json(!c.no_timing);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    emit_json(j, c);
  }
  return rep.oracle_ok() ? 0 : 1;
}

struct SweepArg {
  double a, b;
  int n;
};

SweepArg parse_sweep(const std::string& s) {
  SweepArg w{};
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> w.a >> c1 >> w.b >> c2 >> w.n) || c1 != ':' || c2 != ':' || w.n < 1 || w.a <= 0 || w.b >= 1 ||
      w.a > w.b)
    throw UsageError("sweep must be a:b:n with 0 < a <= b < 1 and n >= 1");
  return w;
}

void check_degree(int m) {
  if (m < 1) throw UsageError("m must be at least 1");
  if (m > 40) throw UsageError("m above 40 is not supported");
}

int cmd_spectrum(int m, const std::string& gamma, bool exact, const std::string& sweep, const Common& c) {
  check_degree(m);
  Json params{{"m", m}, {"gamma", gamma}, {"exact", exact}};
  if (!sweep.empty()) {
    SweepArg s = parse_sweep(sweep);
    params["sweep"] = sweep;
    std::string csv = trajectory_csv(m, s.a, s.b, s.n);
    if (c.format == "json") {
      Json j;
      j["manifest"] = manifest("spectrum", params, c);
      j["trajectories"] = Json::array();
      std::istringstream is(csv);
      std::string line;
      std::getline(is, line);
      while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string f;
        std::vector<double> v;
        while (std::getline(ls, f, ',')) v.push_back(std::stod(f));
        j["trajectories"].push_back({{"gamma", v[0]}, {"omega0", v[1]}, {"k", int(v[2])}, {"closed_form", v[3]},
                                     {"oracle", Json::array({v[4], v[5]})}});
      }
      emit_json(j, c);
    } else {
      emit("# " + manifest("spectrum", params, c).dump() + "\n" + csv, c);
    }
    return 0;
  }
  if (is_symbolic(gamma)) {
    if (!exact) throw UsageError("symbolic gamma needs --exact");
    if (m > 12) throw UsageError("symbolic spectra are limited to m <= 12");
    Json j;
    j["manifest"] = manifest("spectrum", params, c);
    Json body = symbolic_spectrum_json(m);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    emit_json(j, c);
    return 0;
  }
  mpq_class g = parse_unit_interval(gamma, "gamma");
  SpectralOptions o;
  o.exact = exact;
  if (exact && m > 12) throw UsageError("--exact is limited to m <= 12");
  SpectralResult r = spectrum(m, g, o);
  if (c.format == "text") {
    std::ostringstream os;
    os.precision(12);
    os << "# bosonalg " << kVersion << " spectrum m=" << m << " gamma=" << gamma << " omega0=" << r.omega0 << "\n";
    for (const auto& s : r.states)
      os << s.exact_value.str() << " = " << s.value << "  " << s.pt.label << "\n";
    os << "# gershgorin disjoint: " << (r.gersh.disjoint ? "true" : "false")
       << ", contained: " << (r.gersh.contained ? "true" : "false") << "\n";
    os << "# oracle max diff: " << r.max_oracle_diff() << "\n";
    emit(os.str(), c);
  } else {
    Json j;
    j["manifest"] = manifest("spectrum", params, c);
    Json body = r.json();
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    emit_json(j, c);
  }
  return 0;
}

int cmd_classify(int m, const std::string& gamma, const Common& c) {
  check_degree(m);
  mpq_class g = parse_unit_interval(gamma, "gamma");
  SpectralResult r = spectrum(m, g);
  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Json states = Json::array();
  bool invariant = true;
  for (const auto& s : r.states) {
    std::complex<double> z(u(rng), u(rng));
    PTClass scaled = pt_classify(z * s.vector, m);
    bool same = std::abs(scaled.ratio - s.pt.ratio) < 1e-8 && scaled.label == s.pt.label;
    invariant = invariant && same;
    Json e;
    e["value"] = s.value;
    e["value_exact"] = s.exact_value.str();
    Json pt = s.pt.json();
    for (auto it = pt.begin(); it != pt.end(); ++it) e[it.key()] = it.value();
    e["alternates_real_imaginary"] = s.alternates;
    states.push_back(e);
  }
  Json j;
  j["manifest"] = manifest("classify", {{"m", m}, {"gamma", gamma}, {"seed", c.seed}}, c);
  j["m"] = m;
  j["gamma"] = g.get_d();
  j["omega0"] = r.omega0;
  j["states"] = states;
  j["rescale_invariant"] = invariant;
  if (c.format == "text") {
    std::ostringstream os;
    for (const auto& s : states)
      os << s["value_exact"].get<std::string>() << "  ratio " << s["ratio"][0].get<double>() << "  "
         << s["label"].get<std::string>() << "\n";
    emit(os.str(), c);
  } else {
    emit_json(j, c);
  }
  return 0;
}

int cmd_gershgorin(int m, const std::string& gamma, const Common& c) {
  check_degree(m);
  mpq_class g = parse_unit_interval(gamma, "gamma");
  GershgorinReport r = gershgorin(m, g);
  if (c.format == "text") {
    std::ostringstream os;
    os << "disjoint: " << (r.disjoint ? "true" : "false") << "\ncontained: " << (r.contained ? "true" : "false")
       << "\nradius: " << r.radius.get_str() << "\n";
    for (int k = 0; k <= m; ++k) os << "disk " << r.centers[k] << "  eigenvalues " << r.per_disk[k] << "\n";
    emit(os.str(), c);
    return 0;
  }
  Json j;
  j["manifest"] = manifest("gershgorin", {{"m", m}, {"gamma", gamma}}, c);
  Json body = r.json();
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  emit_json(j, c);
  return 0;
}

int cmd_export(int m, const std::string& instance, const std::string& expr, const std::string& gamma, int bound,
               const std::string& basis, const Common& c) {
  Json params{{"gamma", gamma}};
  Eigen::MatrixXcd mat;
  std::string sector;
  if (instance.empty()) {
    check_degree(m);
    mpq_class g = parse_unit_interval(gamma, "gamma");
    mat = j0_matrix(m, g.get_d());
    params["m"] = m;
    sector = "2 J0 on degree " + std::to_string(m);
  } else {
    if (expr.empty()) throw UsageError("export-matrix with --instance needs --expr");
    auto names = instance_names();
    if (std::find(names.begin(), names.end(), instance) == names.end())
      throw UsageError("unknown instance '" + instance + "'");
    if (bound < 1) throw UsageError("bound must be positive");
    mpq_class g = gamma.empty() || is_symbolic(gamma) ? mpq_class(3, 10) : parse_unit_interval(gamma, "gamma");
    AlgebraInstance inst = make_instance(instance);
    Formula f;
    try {
      f = parse_formula(expr);
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
    for (const auto& l : f.labels())
      if (!inst.has(l)) throw UsageError("unknown label '" + l + "' in instance " + instance);
    OperatorExpr op = inst.evaluate(f);
    FockSector box = weighted_box(inst.modes(), inst.box().weights, std::vector<long>(inst.box().weights.size(), bound));
    Bindings b = oracle_binding(g.get_d(), 0.5).values;
    mat = Eigen::MatrixXcd(represent(op, box, b, basis == "bargmann" ? Basis::bargmann : Basis::fock));
    params["instance"] = instance;
    params["expr"] = expr;
    params["bound"] = bound;
    params["basis"] = basis;
    sector = box.describe();
  }
  if (c.format == "csv") {
    emit("# " + manifest("export-matrix", params, c).dump() + "\n" + matrix_csv(mat), c);
    return 0;
  }
  Json j;
  j["manifest"] = manifest("export-matrix", params, c);
  j["sector"] = sector;
  j["rows"] = mat.rows();
  j["cols"] = mat.cols();
  j["entries"] = Json::array();
  for (int r = 0; r < mat.rows(); ++r)
    for (int col = 0; col < mat.cols(); ++col)
      if (std::abs(mat(r, col)) > 0) j["entries"].push_back({{"row", r}, {"col", col}, {"value", complex_json(mat(r, col))}});
  emit_json(j, c);
  return 0;
}

int cmd_expr(const std::string& instance, const std::string& text, const Common& c) {
  Formula f;
  try {
    f = parse_formula(text);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  Json j;
  j["manifest"] = manifest("expr", {{"instance", instance}, {"expr", text}}, c);
  j["formula"] = f.str();
  if (!instance.empty()) {
    auto names = instance_names();
    if (std::find(names.begin(), names.end(), instance) == names.end())
      throw UsageError("unknown instance '" + instance + "'");
    AlgebraInstance inst = make_instance(instance);
    for (const auto& l : f.labels())
      if (!inst.has(l)) throw UsageError("unknown label '" + l + "' in instance " + instance);
    OperatorExpr op = inst.evaluate(f);
    j["operator"] = op.str();
    j["terms"] = op.terms().size();
    j["zero"] = op.is_zero();
  }
  if (c.format == "text") {
    emit(j.contains("operator") ? j["operator"].get<std::string>() : j["formula"].get<std::string>(), c);
  } else {
    emit_json(j, c);
  }
  return 0;
}

int cmd_instance(const std::string& name, int p, int q, const Common& c) {
  auto names = instance_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UsageError("unknown instance '" + name + "'");
  InstanceOptions o;
  o.p = p;
  o.q = q;
  Json j;
  j["manifest"] = manifest("instance", {{"name", name}, {"p", p}, {"q", q}}, c);
  Json body = instance_json(make_instance(name, o));
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  emit_json(j, c);
  return 0;
}

int cmd_killing(int p, const std::string& gamma, const Common& c) {
  if (p < 0) throw UsageError("p must be non-negative");
  mpq_class g = parse_unit_interval(gamma, "gamma");
  Json j;
  j["manifest"] = manifest("killing", {{"p", p}, {"gamma", gamma}}, c);
  Json body = killing_report(p, g.get_d());
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  emit_json(j, c);
  return 0;
}

Json schemas() {
  Json cplx = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 2}, {"maxItems", 2}};
  Json man = {{"type", "object"},
              {"required", {"command", "parameters", "tool", "version"}},
              {"properties",
               {{"command", {{"type", "string"}}},
                {"parameters", {{"type", "object"}}},
                {"tool", {{"type", "string"}}},
                {"version", {{"type", "string"}}},
                {"timestamp", {{"type", "string"}}}}}};
  Json pt = {{"type", "object"},
             {"required", {"lambda1", "lambda2", "ratio", "label"}},
             {"properties",
              {{"lambda1", cplx},
               {"lambda2", cplx},
               {"ratio", cplx},
               {"label", {{"enum", {"conforming", "breaking", "non-eigenstate-of-Pi"}}}}}}};
  Json gersh = {{"type", "object"},
                {"required", {"m", "gamma", "centers", "radius", "column_radii", "row_radii", "disjoint", "per_disk",
                              "contained"}},
                {"properties",
                 {{"m", {{"type", "integer"}}},
                  {"gamma", {{"type", "number"}}},
                  {"centers", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
                  {"radius", {{"type", "number"}}},
                  {"column_radii", {{"type", "array"}, {"items", {{"type", "number"}}}}},
                  {"row_radii", {{"type", "array"}, {"items", {{"type", "number"}}}}},
                  {"disjoint", {{"type", "boolean"}}},
                  {"per_disk", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
                  {"contained", {{"type", "boolean"}}},
                  {"eigenvalues", {{"type", "array"}, {"items", cplx}}}}}};
  Json verdicts = {"confirmed", "confirmed on condition states", "finding", "finding on condition states",
                   "untestable"};
  Json verify = {
      {"$schema", "http://json-schema.org/draft-07/schema#"},
      {"type", "object"},
      {"required", {"manifest", "suite", "params", "results", "summary"}},
      {"properties",
       {{"manifest", man},
        {"suite", {{"type", "string"}}},
        {"params", {{"type", "object"}}},
        {"results",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"required", {"id", "anchor", "kind", "claim", "status", "verdict", "residual", "numeric_norms",
                          "oracle_ok"}},
            {"properties",
             {{"id", {{"type", "string"}}},
              {"anchor", {{"type", "string"}}},
              {"kind", {{"enum", {"equation", "pt", "matrix"}}}},
              {"claim", {{"enum", {"zero", "nonzero"}}}},
              {"status", {{"enum", {"exact-zero", "nonzero-residual"}}}},
              {"verdict", {{"enum", verdicts}}},
              {"residual", {{"type", "string"}}},
              {"numeric_norms", {{"type", "array"}, {"items", {{"type", "number"}}}}},
              {"oracle_ok", {{"type", "boolean"}}},
              {"seconds", {{"type", "number"}}}}}}}}},
        {"summary", {{"type", "object"}, {"required", {"oracle_ok"}}}}}}};
  Json spectrum = {
      {"$schema", "http://json-schema.org/draft-07/schema#"},
      {"type", "object"},
      {"required", {"manifest", "m", "gamma", "omega0", "matrix", "gershgorin", "eigen", "reference_diff"}},
      {"properties",
       {{"manifest", man},
        {"m", {{"type", "integer"}}},
        {"gamma", {{"type", "number"}}},
        {"omega0", {{"type", "number"}}},
        {"matrix", {{"type", "array"}, {"items", {{"type", "array"}, {"items", cplx}}}}},
        {"gershgorin", gersh},
        {"eigen",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"required", {"value", "vector", "pt"}},
            {"properties",
             {{"value", {{"type", "number"}}},
              {"vector", {{"type", "array"}, {"items", cplx}}},
              {"pt", pt}}}}}}},
        {"reference_diff",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"required", {"m", "state", "components", "leading_match", "middle_match"}}}}}}}}};
  Json classify = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                   {"type", "object"},
                   {"required", {"manifest", "m", "gamma", "states", "rescale_invariant"}},
                   {"properties",
                    {{"manifest", man},
                     {"states", {{"type", "array"}, {"items", pt}}},
                     {"rescale_invariant", {{"type", "boolean"}}}}}};
  Json gschema = gersh;
  gschema["$schema"] = "http://json-schema.org/draft-07/schema#";
  gschema["required"].push_back("manifest");
  gschema["properties"]["manifest"] = man;
  Json exportm = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                  {"type", "object"},
                  {"required", {"manifest", "rows", "cols", "entries"}},
                  {"properties",
                   {{"manifest", man},
                    {"entries",
                     {{"type", "array"},
                      {"items",
                       {{"type", "object"},
                        {"required", {"row", "col", "value"}},
                        {"properties", {{"value", cplx}}}}}}}}}};
  Json relation = {{"type", "object"},
                   {"required", {"id", "title", "kind", "claim"}},
                   {"properties", {{"kind", {{"enum", {"equation", "pt"}}}}}}};
  Json instance = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                   {"type", "object"},
                   {"required", {"manifest", "name", "modes", "generators", "definitions", "relations", "box"}},
                   {"properties",
                    {{"manifest", man},
                     {"name", {{"type", "string"}}},
                     {"modes", {{"type", "integer"}}},
                     {"generators", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                     {"relations", {{"type", "array"}, {"items", relation}}}}}};
  Json basis = {{"type", "object"},
                {"required", {"basis", "closes"}},
                {"properties",
                 {{"closes", {{"type", "boolean"}}},
                  {"metric", {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
                  {"signature", {{"type", "object"}, {"required", {"positive", "negative", "zero", "complex"}}}},
                  {"eigenvalues", {{"type", "array"}, {"items", cplx}}}}}};
  Json killing = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                  {"type", "object"},
                  {"required", {"manifest", "p", "gamma", "ladder", "hermitian_combination", "pauli"}},
                  {"properties",
                   {{"manifest", man},
                    {"ladder", basis},
                    {"hermitian_combination", basis},
                    {"pauli", basis}}}};
  return {{"verify", verify},          {"spectrum", spectrum}, {"classify", classify}, {"gershgorin", gschema},
          {"export-matrix", exportm}, {"instance", instance}, {"killing", killing}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bosonalg: deformed boson algebras, relation verification and J0 spectra"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Common c;
  bool help_schema = false;
  bool legend = false;
  app.add_option("--out", c.out, "write the report to FILE (atomically)");
  app.add_option("--format", c.format, "json | text | csv")->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--seed", c.seed, "seed for randomized checks");
  app.add_flag("--no-timing", c.no_timing, "omit timestamps and per-relation timings");
  app.add_flag("--help-schema", help_schema, "print the JSON schemas of every report");
  app.add_flag("--legend", legend, "print the ASCII symbol legend");

  std::string suite, gamma = "sym", mu = "sym";
  int p = 1, q = 1, r = 0, sectors = 2;
  auto* verify = app.add_subcommand("verify", "check every relation of a suite");
  verify->add_option("--suite", suite, "one of: " + [] {
    std::string s;
    for (const auto& n : suite_names()) s += n + " ";
    return s;
  }())->required();
  verify->add_option("--gamma", gamma, "sym, or a value in [0, 1)");
  verify->add_option("--mu", mu, "sym, or a value in [0, 1)");
  verify->add_option("--p", p);
  verify->add_option("--q", q);
  verify->add_option("--r", r);
  verify->add_option("--sectors", sectors, "box sectors per oracle binding")->check(CLI::Range(1, 4));

  int m = 2;
  bool exact = false;
  std::string sweep, sgamma = "0.6";
  auto* spec = app.add_subcommand("spectrum", "eigenvalues, eigenvectors, disks and PT labels of 2 J0");
  spec->add_option("--m", m, "polynomial degree")->required();
  spec->add_option("--gamma", sgamma, "value in (0, 1), or sym with --exact");
  spec->add_flag("--exact", exact, "exact recursion roots, eigenvectors and classification");
  spec->add_option("--sweep", sweep, "a:b:n trajectories over a gamma grid");

  int cm = 2;
  std::string cgamma = "0.6";
  auto* classify = app.add_subcommand("classify", "partial PT classification of the eigenstates");
  classify->add_option("--m", cm)->required();
  classify->add_option("--gamma", cgamma);

  int gm = 2;
  std::string ggamma = "0.6";
  auto* gersh = app.add_subcommand("gershgorin", "column Gershgorin disks of 2 J0");
  gersh->add_option("--m", gm)->required();
  gersh->add_option("--gamma", ggamma);

  int em = 2, bound = 4;
  std::string einst, eexpr, egamma = "0.6", basis = "fock";
  auto* exportm = app.add_subcommand("export-matrix", "matrix of 2 J0, or of an expression on an instance box");
  exportm->add_option("--m", em);
  exportm->add_option("--gamma", egamma);
  exportm->add_option("--instance", einst);
  exportm->add_option("--expr", eexpr);
  exportm->add_option("--bound", bound);
  exportm->add_option("--basis", basis)->check(CLI::IsMember({"fock", "bargmann"}));

  std::string iname;
  int ip = 1, iq = 1;
  auto* instance = app.add_subcommand("instance", "serialize an algebra instance");
  instance->add_option("--name", iname, "instance name")->required();
  instance->add_option("--p", ip);
  instance->add_option("--q", iq);

  int kp = 1;
  std::string kgamma = "0.6";
  auto* killing = app.add_subcommand("killing", "structure constants, Killing metric and signature of su_g(2)");
  killing->add_option("--p", kp);
  killing->add_option("--gamma", kgamma, "value in (0, 1) for the signature");

  std::string xinst, xtext;
  auto* expr = app.add_subcommand("expr", "parse an expression and normal-order it on an instance");
  expr->add_option("text", xtext)->required();
  expr->add_option("--instance", xinst);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (help_schema) {
      emit_json(schemas(), c);
      return 0;
    }
    if (legend) {
      emit(ascii_legend(), c);
      return 0;
    }
    if (*verify) return cmd_verify(suite, gamma, mu, p, q, r, sectors, c);
    if (*spec) {
      if (!sweep.empty() && c.format == "json" && !app.get_option("--format")->count()) c.format = "csv";
      return cmd_spectrum(m, sgamma, exact, sweep, c);
    }
    if (*classify) return cmd_classify(cm, cgamma, c);
    if (*gersh) return cmd_gershgorin(gm, ggamma, c);
    if (*exportm) return cmd_export(em, einst, eexpr, egamma, bound, basis, c);
    if (*expr) return cmd_expr(xinst, xtext, c);
    if (*instance) return cmd_instance(iname, ip, iq, c);
    if (*killing) return cmd_killing(kp, kgamma, c);
    std::cout << app.help();
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
