#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bosonalg/scalar.hpp"

namespace bosonalg {

inline constexpr int kMaxModes = 6;

// prod_i a_i'^cre[i] a_i^ann[i], creations left of annihilations. Modes are 0-based.
struct ModeMonomial {
  std::array<std::uint8_t, kMaxModes> cre{};
  std::array<std::uint8_t, kMaxModes> ann{};

  int degree() const;
  int delta(int mode) const { return int(cre[mode]) - int(ann[mode]); }
  bool is_identity() const { return degree() == 0; }
  friend bool operator==(const ModeMonomial&, const ModeMonomial&) = default;
};

// Higher total degree first, then lexicographic on (cre_1, ann_1, cre_2, ...).
struct MonomialOrder {
  bool operator()(const ModeMonomial& a, const ModeMonomial& b) const;
};

class OperatorExpr {
 public:
  using Terms = std::map<ModeMonomial, ScalarExpr, MonomialOrder>;

  explicit OperatorExpr(int modes = 1);
  static OperatorExpr identity(int modes, const ScalarExpr& c = ScalarExpr(1));
  static OperatorExpr create(int modes, int mode);
  static OperatorExpr annihilate(int modes, int mode);
  static OperatorExpr number(int modes, int mode);
  static OperatorExpr term(int modes, const ModeMonomial& m, const ScalarExpr& c);

  int modes() const { return modes_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<ScalarExpr> as_scalar() const;
  ScalarExpr coefficient(const ModeMonomial& m) const;

  void add(const ModeMonomial& m, const ScalarExpr& c);

  OperatorExpr operator-() const;
  friend OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator*(const ScalarExpr& c, const OperatorExpr& a);
  OperatorExpr& operator+=(const OperatorExpr& b) { return *this = *this + b; }

  OperatorExpr substitute(Sym s, const ScalarExpr& v) const;
  OperatorExpr with_modes(int modes) const;
  bool depends_on(Sym s) const;
  std::string str() const;

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b);

 private:
  int modes_;
  Terms terms_;
};

std::string monomial_str(const ModeMonomial& m, int modes);

OperatorExpr normal_product(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr power(const OperatorExpr& a, int n);
OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr anticommutator(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr dagger(const OperatorExpr& a);
// Parity on one mode (or all when mode is empty) composed with conjugation of coefficients.
OperatorExpr pt_transform(const OperatorExpr& a, std::optional<int> mode);

// Integer basis of {w : w . delta = 0 for every monomial of every generator}.
std::vector<std::vector<long>> conserved_charges(std::span<const OperatorExpr> generators);

class ModeMismatch : public Error {
 public:
  ModeMismatch(int a, int b)
      : Error("mode count mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

}  // namespace bosonalg
