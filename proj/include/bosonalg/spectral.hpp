#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bosonalg/realizations.hpp"

namespace bosonalg {

// A = 2 J0 on the degree-m Bargmann sector, basis f_k = z1^(m-k) z2^k.
// b_k = m - 2k, d_k = i(k+1)g (above the diagonal), c_k = i g (m-k) (below).
struct Tridiagonal {
  int m = 0;
  Deformation def;
  std::vector<ScalarExpr> b;  // k = 0..m
  std::vector<ScalarExpr> d;  // k = 0..m; d_m closes the recursion
  std::vector<ScalarExpr> c;  // k = 0..m-1

  ScalarExpr at(int row, int col) const;
  Eigen::MatrixXcd numeric(const Bindings& bind) const;
};

Tridiagonal build_j0_matrix(int m, const Deformation& d = Deformation::gamma());
Eigen::MatrixXcd j0_matrix(int m, double gamma);

// Binds gamma and w0 = sqrt(1 - gamma^2).
Bindings gamma_binding(double gamma);

// 2 J0 represented on the n1 + n2 = m charge sector, against build_j0_matrix.
bool matches_representation_exact(int m, const Deformation& exact);
double representation_diff(int m, double gamma);

struct GershgorinReport {
  int m = 0;
  mpq_class gamma;
  std::vector<long> centers;
  // Off-diagonal absolute sums as multiples of gamma.
  std::vector<mpq_class> column_radii;
  std::vector<mpq_class> row_radii;
  bool columns_uniform = false;  // every column radius is m*gamma
  mpq_class radius;              // m*gamma
  bool disjoint = false;
  bool below_threshold = false;  // gamma < 1/m
  std::vector<std::complex<double>> eigenvalues;  // of A, from the oracle
  std::vector<int> per_disk;
  double worst_excess = 0.0;  // max over eigenvalues of (distance to nearest center - radius)
  bool contained = false;

  nlohmann::ordered_json json() const;
};

GershgorinReport gershgorin(int m, const mpq_class& gamma);

// P_-1 = 0, P_0 = 1, P_{n+1} = ((x - b_n) P_n - c_{n-1} P_{n-1}) / d_n, in Sym::x.
struct CharPoly {
  std::vector<ScalarExpr> P;        // P_0..P_{m+1}
  std::vector<ScalarExpr> roots;    // (m - 2k) w, k = 0..m
  std::vector<bool> root_vanishes;  // P_{m+1}(root_k) == 0
  ScalarExpr leading;               // prod 1/d_n
  bool factored = false;            // P_{m+1} == leading * prod (x - root_k)

  bool all_roots() const;
};

CharPoly char_poly(const Tridiagonal& t);

// Eigenvalues of J0: (m - 2k) w / 2, k = 0..m.
std::vector<ScalarExpr> closed_form_spectrum(int m, const Deformation& d = Deformation::gamma());
std::vector<double> closed_form_spectrum(int m, double gamma);

struct OracleSpectrum {
  std::vector<std::complex<double>> values;  // eigenvalues of J0, descending real part
  double max_imag = 0.0;
  double max_residual = 0.0;
};

// Extended-precision dense eigensolve of A / 2.
OracleSpectrum oracle_spectrum(int m, double gamma);

// (P_0(x), ..., P_m(x)) scaled so the last nonzero component from the bottom is 1.
std::vector<ScalarExpr> eigenvector_exact(const CharPoly& cp, int m, const ScalarExpr& x);
std::vector<ScalarExpr> eigen_residual(const Tridiagonal& t, const ScalarExpr& x, const std::vector<ScalarExpr>& v);
Eigen::VectorXcd eigenvector_numeric(int m, double gamma, double x);

struct PTClass {
  bool proportional1 = false;
  bool proportional2 = false;
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  std::complex<double> ratio;
  int expected = 0;   // (-1)^m
  std::string label;  // conforming | breaking | non-eigenstate-of-Pi

  nlohmann::ordered_json json() const;
};

// psi = sum v_k z1^(m-k) z2^k; Pi_T^j conjugates coefficients and flips z_j.
PTClass pt_classify(const Eigen::VectorXcd& v, int m, double tol = 1e-8);

struct ExactPTClass {
  bool proportional1 = false;
  bool proportional2 = false;
  ScalarExpr lambda1;
  ScalarExpr lambda2;
  std::optional<int> ratio;
  std::string label;
};

ExactPTClass pt_classify_exact(const std::vector<ScalarExpr>& v, int m);

// In the gauge v_m = 1, does v_k lie in i^(m-k) R for every k?
bool alternates_real_imaginary(const Eigen::VectorXcd& v, int m, double tol = 1e-9);

struct ReferenceComponent {
  int k = 0;
  std::complex<double> computed;
  std::complex<double> printed;
  bool match = false;
};

struct ReferenceDiff {
  int m = 0;
  std::string state;  // e.g. "+w0", "-3w0/2"
  double eigenvalue = 0.0;
  std::vector<ReferenceComponent> components;
  bool leading_match = false;
  bool middle_match = false;

  nlohmann::ordered_json json() const;
};

// Compares against the printed eigenfunction coefficients for m = 2 and 3; both
// vectors are scaled to a unit last component first. Other m give no entries.
std::vector<ReferenceDiff> reference_diff(int m, double gamma, double tol = 1e-10);

struct EigenState {
  ScalarExpr exact_value;  // eigenvalue of J0
  double value = 0.0;
  Eigen::VectorXcd vector;
  std::optional<std::vector<ScalarExpr>> exact_vector;
  std::optional<bool> exact_residual_zero;
  std::optional<ExactPTClass> exact_pt;
  double residual = 0.0;
  PTClass pt;
  bool alternates = false;
};

struct SpectralOptions {
  // Symbolic eigenvectors, residuals and classification; limited to m <= exact_limit.
  bool exact = false;
  int exact_limit = 8;
};

struct SpectralResult {
  int m = 0;
  mpq_class gamma;
  double omega0 = 0.0;
  Eigen::MatrixXcd matrix;
  GershgorinReport gersh;
  OracleSpectrum oracle;
  std::vector<EigenState> states;
  std::vector<ReferenceDiff> diff;
  std::optional<bool> exact_roots;

  double max_oracle_diff() const;
  bool symmetric() const;
  nlohmann::ordered_json json() const;
};

SpectralResult spectrum(int m, const mpq_class& gamma, const SpectralOptions& o = {});

// Symbolic-gamma report: matrix, recursion roots, eigenvectors and classification.
nlohmann::ordered_json symbolic_spectrum_json(int m, int exact_limit = 8);

// Rows gamma,omega0,k,closed_form,oracle_re,oracle_im over n points of [a, b].
std::string trajectory_csv(int m, double a, double b, int n);

nlohmann::ordered_json complex_json(std::complex<double> z);

}  // namespace bosonalg
