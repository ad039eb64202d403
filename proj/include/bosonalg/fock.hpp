#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosonalg/formula.hpp"
#include "bosonalg/operator.hpp"

namespace bosonalg {

using Occupation = std::vector<int>;
using Cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Cplx>;

// Finite set of occupation vectors, ordered descending lexicographically.
// A charge sector fixes w.n = value for each charge and is invariant under any
// operator conserving the charges. A box keeps w.n <= bound for each
// (non-negative) weight and truncates.
struct FockSector {
  enum class Kind { charge, box };
  Kind kind = Kind::box;
  int modes = 0;
  std::vector<std::vector<long>> weights;
  std::vector<long> bounds;
  std::vector<Occupation> basis;
  std::map<Occupation, std::size_t> index;

  std::size_t dim() const { return basis.size(); }
  std::optional<std::size_t> find(const Occupation& n) const;
  std::string describe() const;
};

FockSector charge_sector(int modes, const std::vector<std::vector<long>>& charges,
                         const std::vector<long>& values);
FockSector box_sector(int modes, int max_occupation);
FockSector weighted_box(int modes, const std::vector<std::vector<long>>& weights,
                        const std::vector<long>& bounds);

class SectorNotInvariant : public Error {
 public:
  using Error::Error;
};

class MarginViolation : public Error {
 public:
  using Error::Error;
};

// fock: orthonormal |n>, a'|n> = sqrt(n+1)|n+1>.
// bargmann: monomials z^n, a' = z, a = d/dz; integer matrix elements.
enum class Basis { fock, bargmann };

// Columns are images of basis states. Charge sectors reject images that leave
// the sector; boxes drop them.
SparseMatrix represent(const OperatorExpr& op, const FockSector& sector, const Bindings& b,
                       Basis basis = Basis::fock);

struct ExactMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::map<std::size_t, GaussQ>> columns;

  GaussQ at(std::size_t r, std::size_t c) const;
  ExactMatrix operator*(const ExactMatrix& o) const;
  ExactMatrix operator-(const ExactMatrix& o) const;
  bool column_is_zero(std::size_t c) const { return columns[c].empty(); }
};

// Exact representation in the Bargmann basis; every coefficient must be constant.
ExactMatrix represent_exact(const OperatorExpr& op, const FockSector& sector);
OperatorExpr specialize(const OperatorExpr& op, const std::vector<std::pair<Sym, ScalarExpr>>& values);

struct NumericDefinition {
  std::optional<OperatorExpr> leaf;
  std::optional<Formula> formula;
};
using DefinitionLookup = std::function<NumericDefinition(const std::string&)>;

// Evaluates a formula by sparse matrix arithmetic on a box, expanding derived
// labels through their formulas so the normal-ordering engine is never used.
class MatrixEvaluator {
 public:
  MatrixEvaluator(const FockSector& sector, Bindings b, DefinitionLookup lookup);
  SparseMatrix eval(const Formula& f);

 private:
  SparseMatrix eval_node(const Node& n);
  SparseMatrix label(const std::string& name);

  const FockSector& sector_;
  Bindings bindings_;
  DefinitionLookup lookup_;
  std::map<std::string, SparseMatrix> cache_;
};

// Upper bound, per weight, on how far w.n can rise above its starting value
// while the formula acts on a state. States with w.n + peak <= bound are
// represented exactly by box matrix arithmetic.
std::vector<long> formula_peaks(const Formula& f, const DefinitionLookup& lookup,
                                const std::vector<std::vector<long>>& weights);
std::vector<std::size_t> safe_columns(const FockSector& box, const std::vector<long>& peaks);

struct CompareResult {
  double max_abs_diff = 0.0;
  double scale = 0.0;
  std::size_t columns = 0;
};

// Compares two box matrices on the given columns; fails if a declared margin
// is smaller than the peaks the operators need.
CompareResult boundary_safe_compare(const SparseMatrix& a, const SparseMatrix& b,
                                    const FockSector& box, const std::vector<long>& peaks,
                                    const std::vector<long>& declared_margin);
double column_norm(const SparseMatrix& m, const std::vector<std::size_t>& cols);
double column_diff(const SparseMatrix& a, const SparseMatrix& b, const std::vector<std::size_t>& cols);

struct EigenResult {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  double max_residual = 0.0;
};

// General complex eigensolver (Hessenberg reduction + shifted QR) with a
// residual check ||A v - lambda v|| per pair.
EigenResult oracle_eigensolve(const Eigen::MatrixXcd& a);

std::string matrix_csv(const SparseMatrix& m);
std::string matrix_csv(const Eigen::MatrixXcd& m);

}  // namespace bosonalg
