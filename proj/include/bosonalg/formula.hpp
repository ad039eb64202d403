#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bosonalg/operator.hpp"
#include "bosonalg/scalar.hpp"

namespace bosonalg {

enum class NodeKind { label, scalar, add, sub, neg, mul, div, pow, dagger, comm, anti };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::scalar;
  std::string label;
  ScalarExpr scalar;
  int exponent = 0;
  NodePtr lhs;
  NodePtr rhs;
};

// Expression tree over generator labels and scalars. Subtrees without labels are
// folded into a single scalar node on construction, so parsed and hand-built
// trees share one shape.
class Formula {
 public:
  Formula() : Formula(ScalarExpr(0)) {}
  Formula(const ScalarExpr& s);  // NOLINT
  Formula(long v) : Formula(ScalarExpr(v)) {}  // NOLINT
  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static Formula label(std::string name);

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  bool is_scalar() const { return node_->kind == NodeKind::scalar; }
  std::vector<std::string> labels() const;
  std::string str() const;

  Formula operator-() const;
  friend Formula operator+(const Formula& a, const Formula& b);
  friend Formula operator-(const Formula& a, const Formula& b);
  friend Formula operator*(const Formula& a, const Formula& b);
  friend Formula operator/(const Formula& a, const Formula& b);
  Formula pow(int n) const;
  Formula dag() const;
  friend Formula comm(const Formula& a, const Formula& b);
  friend Formula anti(const Formula& a, const Formula& b);

 private:
  NodePtr node_;
};

bool structurally_equal(const Formula& a, const Formula& b);

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at offset " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Maps Unicode spellings (γ, ω₀, †, subscripts, ...) onto the ASCII aliases.
std::string normalize_unicode(std::string_view text);

// Grammar: + - (binary), * /, unary -, ^ integer, postfix ' (dagger),
// [A, B] commutator, {A, B} anticommutator. Identifiers naming ring symbols
// and i become scalars; any other identifier is a generator label.
Formula parse_formula(std::string_view text);

using LabelResolver = std::function<OperatorExpr(const std::string&)>;

OperatorExpr evaluate(const Formula& f, int modes, const LabelResolver& resolve);
std::optional<ScalarExpr> as_scalar(const Formula& f);

// Printed legend of ASCII aliases.
std::string ascii_legend();

}  // namespace bosonalg
