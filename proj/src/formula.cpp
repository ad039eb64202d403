#include "bosonalg/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace bosonalg {

namespace {

NodePtr make(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_scalar(const ScalarExpr& s) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::scalar;
  n->scalar = s;
  return n;
}

const ScalarExpr* scalar_of(const NodePtr& n) {
  return n->kind == NodeKind::scalar ? &n->scalar : nullptr;
}

void collect_labels(const Node& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::label) out.insert(n.label);
  if (n.lhs) collect_labels(*n.lhs, out);
  if (n.rhs) collect_labels(*n.rhs, out);
}

// precedence used by the printer
int prec_of_scalar_text(const std::string& t) {
  int depth = 0;
  bool mul = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    char c = t[k];
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (depth == 0) {
      if ((c == '+' || c == '-') && k > 0) return 1;
      if (c == '*' || c == '/') mul = true;
    }
  }
  if (mul) return 2;
  if (!t.empty() && t[0] == '-') return 3;
  if (t.find('^') != std::string::npos) return 4;
  return 6;
}

int prec(const Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    case NodeKind::dagger: return 5;
    case NodeKind::scalar: return prec_of_scalar_text(n.scalar.str());
    default: return 6;
  }
}

std::string print(const Node& n);

std::string wrap(const Node& n, bool paren) {
  std::string s = print(n);
  return paren ? "(" + s + ")" : s;
}

std::string print(const Node& n) {
  switch (n.kind) {
    case NodeKind::label: return n.label;
    case NodeKind::scalar: return n.scalar.str();
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      int p = prec(n);
      const char* op = n.kind == NodeKind::add ? " + "
                       : n.kind == NodeKind::sub ? " - "
                       : n.kind == NodeKind::mul ? "*"
                                                 : "/";
      return wrap(*n.lhs, prec(*n.lhs) < p) + op + wrap(*n.rhs, prec(*n.rhs) <= p);
    }
    case NodeKind::neg: return "-" + wrap(*n.lhs, prec(*n.lhs) < 3);
    case NodeKind::pow: {
      std::string e = n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent);
      return wrap(*n.lhs, prec(*n.lhs) < 5) + "^" + e;
    }
    case NodeKind::dagger: return wrap(*n.lhs, prec(*n.lhs) < 6) + "'";
    case NodeKind::comm: return "[" + print(*n.lhs) + ", " + print(*n.rhs) + "]";
    case NodeKind::anti: return "{" + print(*n.lhs) + ", " + print(*n.rhs) + "}";
  }
  return {};
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::label: return a.label == b.label;
    case NodeKind::scalar: return a.scalar.equals(b.scalar);
    case NodeKind::pow: return a.exponent == b.exponent && equal_nodes(*a.lhs, *b.lhs);
    case NodeKind::neg:
    case NodeKind::dagger: return equal_nodes(*a.lhs, *b.lhs);
    default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

}  // namespace

Formula::Formula(const ScalarExpr& s) : node_(make_scalar(s)) {}

Formula Formula::label(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::label;
  n->label = std::move(name);
  return Formula(NodePtr(n));
}

std::vector<std::string> Formula::labels() const {
  std::set<std::string> out;
  collect_labels(*node_, out);
  return {out.begin(), out.end()};
}

std::string Formula::str() const { return print(*node_); }

Formula Formula::operator-() const {
  if (auto s = scalar_of(node_)) return Formula(-*s);
  return Formula(make(NodeKind::neg, node_));
}

Formula operator+(const Formula& a, const Formula& b) {
  auto sa = scalar_of(a.node_);
  auto sb = scalar_of(b.node_);
  if (sa && sb) return Formula(*sa + *sb);
  return Formula(make(NodeKind::add, a.node_, b.node_));
}

Formula operator-(const Formula& a, const Formula& b) {
  auto sa = scalar_of(a.node_);
  auto sb = scalar_of(b.node_);
  if (sa && sb) return Formula(*sa - *sb);
  return Formula(make(NodeKind::sub, a.node_, b.node_));
}

Formula operator*(const Formula& a, const Formula& b) {
  auto sa = scalar_of(a.node_);
  auto sb = scalar_of(b.node_);
  if (sa && sb) return Formula(*sa * *sb);
  return Formula(make(NodeKind::mul, a.node_, b.node_));
}

Formula operator/(const Formula& a, const Formula& b) {
  auto sa = scalar_of(a.node_);
  auto sb = scalar_of(b.node_);
  if (sa && sb) return Formula(*sa / *sb);
  if (!sb && !b.labels().empty()) throw Error("division by an operator: " + b.str());
  return Formula(make(NodeKind::div, a.node_, b.node_));
}

Formula Formula::pow(int n) const {
  if (auto s = scalar_of(node_)) return Formula(s->pow(n));
  if (n < 0) throw Error("negative power of an operator");
  auto p = std::make_shared<Node>();
  p->kind = NodeKind::pow;
  p->exponent = n;
  p->lhs = node_;
  return Formula(NodePtr(p));
}

Formula Formula::dag() const {
  if (auto s = scalar_of(node_)) return Formula(s->conj());
  return Formula(make(NodeKind::dagger, node_));
}

Formula comm(const Formula& a, const Formula& b) {
  if (scalar_of(a.node_) && scalar_of(b.node_)) return Formula(ScalarExpr(0));
  return Formula(make(NodeKind::comm, a.node_, b.node_));
}

Formula anti(const Formula& a, const Formula& b) {
  auto sa = scalar_of(a.node_);
  auto sb = scalar_of(b.node_);
  if (sa && sb) return Formula(ScalarExpr(2) * *sa * *sb);
  return Formula(make(NodeKind::anti, a.node_, b.node_));
}

bool structurally_equal(const Formula& a, const Formula& b) { return equal_nodes(a.node(), b.node()); }

std::string normalize_unicode(std::string_view text) {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"ω₀(μ)", "wmu"}, {"ω₀", "w0"}, {"ω", "w0"}, {"γ", "gamma"}, {"μ", "mu"},
      {"s′", "sp"}, {"λ′", "lamp"}, {"λ₀", "lam0"}, {"λ₁", "lam1"}, {"λ", "lam"},
      {"Λ", "Lam"}, {"Δ", "Del"}, {"Θ", "T"}, {"Π", "P"},
      {"†", "'"}, {"′", "'"}, {"−", "-"}, {"·", "*"}, {"×", "*"},
      {"₀", "0"}, {"₁", "1"}, {"₂", "2"}, {"₃", "3"}, {"₄", "4"},
      {"₅", "5"}, {"₆", "6"}, {"₇", "7"}, {"₈", "8"}, {"₉", "9"},
      {"₊", "p"}, {"₋", "m"}, {"²", "^2"}, {"³", "^3"},
  };
  std::string out;
  std::size_t k = 0;
  while (k < text.size()) {
    bool hit = false;
    for (const auto& [from, to] : table) {
      if (text.substr(k, from.size()) == from) {
        out += to;
        k += from.size();
        hit = true;
        break;
      }
    }
    if (!hit) out += text[k++];
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  Formula parse() {
    Formula f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Formula expr() {
    Formula f = term();
    while (true) {
      if (accept('+')) f = f + term();
      else if (accept('-')) f = f - term();
      else return f;
    }
  }

  Formula term() {
    Formula f = unary();
    while (true) {
      if (accept('*')) {
        f = f * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Formula d = unary();
        if (!d.is_scalar()) throw ParseError("division by an operator", at);
        if (d.node().scalar.is_zero()) throw ParseError("division by zero", at);
        f = f / d;
      } else {
        return f;
      }
    }
  }

  Formula unary() {
    if (accept('-')) return -unary();
    return powexpr();
  }

  Formula powexpr() {
    Formula base = postfix();
    if (!accept('^')) return base;
    skip();
    bool paren = accept('(');
    skip();
    bool neg = accept('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int e = std::stoi(s_.substr(start, pos_ - start));
    if (paren) expect(')');
    if (neg) {
      if (!base.is_scalar()) fail("negative power of an operator");
      e = -e;
    }
    return base.pow(e);
  }

  Formula postfix() {
    Formula f = primary();
    while (accept('\'')) f = f.dag();
    return f;
  }

  Formula primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Formula f = expr();
      expect(')');
      return f;
    }
    if (c == '[' || c == '{') {
      ++pos_;
      Formula a = expr();
      expect(',');
      Formula b = expr();
      expect(c == '[' ? ']' : '}');
      return c == '[' ? comm(a, b) : anti(a, b);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      std::string num = s_.substr(start, pos_ - start);
      try {
        return Formula(ScalarExpr(GaussQ(parse_rational(num))));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + num + "'", start);
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "i") return Formula(imag());
      if (auto sy = symbol_from_name(id)) return Formula(sym(*sy));
      return Formula::label(id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(normalize_unicode(text)).parse(); }

std::optional<ScalarExpr> as_scalar(const Formula& f) {
  if (f.is_scalar()) return f.node().scalar;
  return std::nullopt;
}

namespace {

OperatorExpr eval_node(const Node& n, int modes, const LabelResolver& resolve) {
  switch (n.kind) {
    case NodeKind::label: {
      OperatorExpr op = resolve(n.label);
      if (op.modes() != modes) op = op.with_modes(modes);
      return op;
    }
    case NodeKind::scalar: return OperatorExpr::identity(modes, n.scalar);
    case NodeKind::add: return eval_node(*n.lhs, modes, resolve) + eval_node(*n.rhs, modes, resolve);
    case NodeKind::sub: return eval_node(*n.lhs, modes, resolve) - eval_node(*n.rhs, modes, resolve);
    case NodeKind::neg: return -eval_node(*n.lhs, modes, resolve);
    case NodeKind::mul: {
      if (n.lhs->kind == NodeKind::scalar) return n.lhs->scalar * eval_node(*n.rhs, modes, resolve);
      if (n.rhs->kind == NodeKind::scalar) return n.rhs->scalar * eval_node(*n.lhs, modes, resolve);
      return normal_product(eval_node(*n.lhs, modes, resolve), eval_node(*n.rhs, modes, resolve));
    }
    case NodeKind::div: {
      if (n.rhs->kind != NodeKind::scalar) throw Error("division by an operator");
      return (ScalarExpr(1) / n.rhs->scalar) * eval_node(*n.lhs, modes, resolve);
    }
    case NodeKind::pow: return power(eval_node(*n.lhs, modes, resolve), n.exponent);
    case NodeKind::dagger: return dagger(eval_node(*n.lhs, modes, resolve));
    case NodeKind::comm:
      return commutator(eval_node(*n.lhs, modes, resolve), eval_node(*n.rhs, modes, resolve));
    case NodeKind::anti:
      return anticommutator(eval_node(*n.lhs, modes, resolve), eval_node(*n.rhs, modes, resolve));
  }
  throw Error("bad node");
}

}  // namespace

OperatorExpr evaluate(const Formula& f, int modes, const LabelResolver& resolve) {
  return eval_node(f.node(), modes, resolve);
}

std::string ascii_legend() {
  std::string out;
  for (Sym s : all_symbols()) {
    const auto& info = symbol_info(s);
    out += std::string(info.ascii) + " = " + std::string(info.unicode) + "\n";
  }
  out += "i = imaginary unit\n";
  out += "a1 .. a6 = mode annihilators, X' = adjoint of X\n";
  out += "[A, B] = commutator, {A, B} = anticommutator\n";
  out += "Jp/Jm/J0 = J+/J-/J0 (likewise K, Z, R, Q, H, Y); Lam0, Del0 = Λ₀, Δ₀; T1..T3 = Θ₁..Θ₃\n";
  return out;
}

}  // namespace bosonalg
