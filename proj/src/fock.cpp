#include "bosonalg/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace bosonalg {

namespace {

long dot(const std::vector<long>& w, const Occupation& n) {
  long s = 0;
  for (std::size_t i = 0; i < n.size(); ++i) s += w[i] * n[i];
  return s;
}

FockSector enumerate(FockSector s, const std::vector<int>& max_occ,
                     const std::function<bool(const Occupation&)>& keep) {
  Occupation n(s.modes, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == s.modes) {
      if (keep(n)) s.basis.push_back(n);
      return;
    }
    for (int v = max_occ[i]; v >= 0; --v) {
      n[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  for (std::size_t k = 0; k < s.basis.size(); ++k) s.index[s.basis[k]] = k;
  return s;
}

}  // namespace

std::optional<std::size_t> FockSector::find(const Occupation& n) const {
  auto it = index.find(n);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::string FockSector::describe() const {
  std::ostringstream o;
  o << (kind == Kind::charge ? "charge" : "box") << "(";
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (k) o << "; ";
    o << "[";
    for (std::size_t i = 0; i < weights[k].size(); ++i) o << (i ? "," : "") << weights[k][i];
    o << "]" << (kind == Kind::charge ? "=" : "<=") << bounds[k];
  }
  o << ") dim " << dim();
  return o.str();
}

FockSector charge_sector(int modes, const std::vector<std::vector<long>>& charges,
                         const std::vector<long>& values) {
  if (charges.empty() || charges.size() != values.size()) throw Error("charge sector needs matching charges and values");
  for (const auto& c : charges)
    if (static_cast<int>(c.size()) != modes) throw Error("charge vector length differs from mode count");
  // bound each mode through a non-negative combination of the charges
  const std::size_t k = charges.size();
  std::vector<long> bound(modes, std::numeric_limits<long>::max());
  std::vector<int> coef(k, -3);
  while (true) {
    std::vector<long> w(modes, 0);
    long v = 0;
    for (std::size_t j = 0; j < k; ++j) {
      for (int i = 0; i < modes; ++i) w[i] += coef[j] * charges[j][i];
      v += coef[j] * values[j];
    }
    if (std::all_of(w.begin(), w.end(), [](long x) { return x >= 0; })) {
      for (int i = 0; i < modes; ++i)
        if (w[i] > 0) bound[i] = std::min(bound[i], v >= 0 ? v / w[i] : -1);
    }
    std::size_t j = 0;
    for (; j < k; ++j) {
      if (++coef[j] <= 3) break;
      coef[j] = -3;
    }
    if (j == k) break;
  }
  std::vector<int> max_occ(modes);
  for (int i = 0; i < modes; ++i) {
    if (bound[i] == std::numeric_limits<long>::max())
      throw Error("charge sector is infinite in mode " + std::to_string(i + 1) + "; use a box");
    max_occ[i] = static_cast<int>(std::max<long>(bound[i], -1));
  }
  FockSector s;
  s.kind = FockSector::Kind::charge;
  s.modes = modes;
  s.weights = charges;
  s.bounds = values;
  if (std::any_of(max_occ.begin(), max_occ.end(), [](int m) { return m < 0; })) return s;
  return enumerate(std::move(s), max_occ, [&](const Occupation& n) {
    for (std::size_t j = 0; j < k; ++j)
      if (dot(charges[j], n) != values[j]) return false;
    return true;
  });
}

FockSector box_sector(int modes, int max_occupation) {
  std::vector<std::vector<long>> w;
  std::vector<long> b;
  for (int i = 0; i < modes; ++i) {
    std::vector<long> e(modes, 0);
    e[i] = 1;
    w.push_back(e);
    b.push_back(max_occupation);
  }
  return weighted_box(modes, w, b);
}

FockSector weighted_box(int modes, const std::vector<std::vector<long>>& weights,
                        const std::vector<long>& bounds) {
  if (weights.size() != bounds.size()) throw Error("box needs one bound per weight");
  std::vector<int> max_occ(modes, -1);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (static_cast<int>(weights[j].size()) != modes) throw Error("weight length differs from mode count");
    for (int i = 0; i < modes; ++i) {
      if (weights[j][i] < 0) throw Error("box weights must be non-negative");
      if (weights[j][i] > 0) {
        int m = static_cast<int>(bounds[j] / weights[j][i]);
        max_occ[i] = max_occ[i] < 0 ? m : std::min(max_occ[i], m);
      }
    }
  }
  for (int i = 0; i < modes; ++i)
    if (max_occ[i] < 0) throw Error("box leaves mode " + std::to_string(i + 1) + " unbounded");
  FockSector s;
  s.kind = FockSector::Kind::box;
  s.modes = modes;
  s.weights = weights;
  s.bounds = bounds;
  return enumerate(std::move(s), max_occ, [&](const Occupation& n) {
    for (std::size_t j = 0; j < weights.size(); ++j)
      if (dot(weights[j], n) > bounds[j]) return false;
    return true;
  });
}

SparseMatrix represent(const OperatorExpr& op, const FockSector& sector, const Bindings& b, Basis basis) {
  if (op.modes() != sector.modes) throw ModeMismatch(op.modes(), sector.modes);
  std::vector<std::pair<ModeMonomial, Cplx>> terms;
  for (const auto& [m, c] : op.terms()) terms.emplace_back(m, c.eval(b));
  std::vector<Eigen::Triplet<Cplx>> trip;
  const int n = sector.modes;
  for (std::size_t col = 0; col < sector.dim(); ++col) {
    const Occupation& st = sector.basis[col];
    for (const auto& [m, c] : terms) {
      Occupation out = st;
      double amp = 1.0;
      double amp2 = 1.0;
      bool dead = false;
      for (int i = 0; i < n && !dead; ++i) {
        int e = m.ann[i];
        int cr = m.cre[i];
        if (e > out[i]) {
          dead = true;
          break;
        }
        if (basis == Basis::fock) {
          for (int k = 0; k < e; ++k) amp2 *= double(out[i] - k);
          out[i] -= e;
          for (int k = 1; k <= cr; ++k) amp2 *= double(out[i] + k);
        } else {
          for (int k = 0; k < e; ++k) amp *= double(out[i] - k);
          out[i] -= e;
        }
        out[i] += cr;
      }
      if (dead) continue;
      amp *= std::sqrt(amp2);
      auto row = sector.find(out);
      if (!row) {
        if (sector.kind == FockSector::Kind::charge)
          throw SectorNotInvariant("operator maps a state out of the charge sector " + sector.describe());
        continue;
      }
      trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), c * amp);
    }
  }
  SparseMatrix mat(static_cast<int>(sector.dim()), static_cast<int>(sector.dim()));
  mat.setFromTriplets(trip.begin(), trip.end());
  mat.prune(Cplx(0.0, 0.0));
  return mat;
}

GaussQ ExactMatrix::at(std::size_t r, std::size_t c) const {
  auto it = columns[c].find(r);
  return it == columns[c].end() ? GaussQ() : it->second;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols != o.rows) throw Error("exact matrix shape mismatch");
  ExactMatrix r{rows, o.cols, std::vector<std::map<std::size_t, GaussQ>>(o.cols)};
  for (std::size_t c = 0; c < o.cols; ++c) {
    for (const auto& [k, v] : o.columns[c]) {
      for (const auto& [row, u] : columns[k]) {
        GaussQ& slot = r.columns[c][row];
        slot += u * v;
      }
    }
    std::erase_if(r.columns[c], [](const auto& kv) { return kv.second.is_zero(); });
  }
  return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  if (rows != o.rows || cols != o.cols) throw Error("exact matrix shape mismatch");
  ExactMatrix r = *this;
  for (std::size_t c = 0; c < cols; ++c) {
    for (const auto& [row, v] : o.columns[c]) r.columns[c][row] -= v;
    std::erase_if(r.columns[c], [](const auto& kv) { return kv.second.is_zero(); });
  }
  return r;
}

ExactMatrix represent_exact(const OperatorExpr& op, const FockSector& sector) {
  if (op.modes() != sector.modes) throw ModeMismatch(op.modes(), sector.modes);
  std::vector<std::pair<ModeMonomial, GaussQ>> terms;
  for (const auto& [m, c] : op.terms()) {
    auto v = c.constant_value();
    if (!v) throw Error("exact representation needs constant coefficients, got " + c.str());
    terms.emplace_back(m, *v);
  }
  ExactMatrix r{sector.dim(), sector.dim(), std::vector<std::map<std::size_t, GaussQ>>(sector.dim())};
  for (std::size_t col = 0; col < sector.dim(); ++col) {
    const Occupation& st = sector.basis[col];
    for (const auto& [m, c] : terms) {
      Occupation out = st;
      mpz_class amp = 1;
      bool dead = false;
      for (int i = 0; i < sector.modes; ++i) {
        if (m.ann[i] > out[i]) {
          dead = true;
          break;
        }
        for (int k = 0; k < m.ann[i]; ++k) amp *= out[i] - k;
        out[i] += m.cre[i] - m.ann[i];
      }
      if (dead) continue;
      auto row = sector.find(out);
      if (!row) {
        if (sector.kind == FockSector::Kind::charge)
          throw SectorNotInvariant("operator maps a state out of the charge sector " + sector.describe());
        continue;
      }
      r.columns[col][*row] += c * GaussQ(mpq_class(amp));
    }
    std::erase_if(r.columns[col], [](const auto& kv) { return kv.second.is_zero(); });
  }
  return r;
}

OperatorExpr specialize(const OperatorExpr& op, const std::vector<std::pair<Sym, ScalarExpr>>& values) {
  OperatorExpr r = op;
  for (const auto& [s, v] : values) r = r.substitute(s, v);
  return r;
}

MatrixEvaluator::MatrixEvaluator(const FockSector& sector, Bindings b, DefinitionLookup lookup)
    : sector_(sector), bindings_(std::move(b)), lookup_(std::move(lookup)) {}

SparseMatrix MatrixEvaluator::eval(const Formula& f) { return eval_node(f.node()); }

SparseMatrix MatrixEvaluator::label(const std::string& name) {
  auto it = cache_.find(name);
  if (it != cache_.end()) return it->second;
  NumericDefinition def = lookup_(name);
  SparseMatrix m;
  if (def.leaf) m = represent(*def.leaf, sector_, bindings_);
  else if (def.formula) m = eval(*def.formula);
  else throw Error("unknown label " + name);
  cache_.emplace(name, m);
  return m;
}

SparseMatrix MatrixEvaluator::eval_node(const Node& n) {
  const int d = static_cast<int>(sector_.dim());
  auto ident = [&](Cplx c) {
    SparseMatrix m(d, d);
    m.setIdentity();
    return SparseMatrix(m * c);
  };
  switch (n.kind) {
    case NodeKind::label: return label(n.label);
    case NodeKind::scalar: return ident(n.scalar.eval(bindings_));
    case NodeKind::add: return eval_node(*n.lhs) + eval_node(*n.rhs);
    case NodeKind::sub: return eval_node(*n.lhs) - eval_node(*n.rhs);
    case NodeKind::neg: return -eval_node(*n.lhs);
    case NodeKind::mul: {
      if (n.lhs->kind == NodeKind::scalar) return eval_node(*n.rhs) * n.lhs->scalar.eval(bindings_);
      if (n.rhs->kind == NodeKind::scalar) return eval_node(*n.lhs) * n.rhs->scalar.eval(bindings_);
      SparseMatrix r = eval_node(*n.lhs) * eval_node(*n.rhs);
      return r;
    }
    case NodeKind::div: {
      if (n.rhs->kind != NodeKind::scalar) throw Error("division by an operator");
      return eval_node(*n.lhs) * (Cplx(1.0) / n.rhs->scalar.eval(bindings_));
    }
    case NodeKind::pow: {
      SparseMatrix base = eval_node(*n.lhs);
      SparseMatrix r = ident(1.0);
      for (int k = 0; k < n.exponent; ++k) r = SparseMatrix(r * base);
      return r;
    }
    case NodeKind::dagger: return SparseMatrix(eval_node(*n.lhs).adjoint());
    case NodeKind::comm: {
      SparseMatrix a = eval_node(*n.lhs);
      SparseMatrix b = eval_node(*n.rhs);
      return SparseMatrix(a * b) - SparseMatrix(b * a);
    }
    case NodeKind::anti: {
      SparseMatrix a = eval_node(*n.lhs);
      SparseMatrix b = eval_node(*n.rhs);
      return SparseMatrix(a * b) + SparseMatrix(b * a);
    }
  }
  throw Error("bad node");
}

namespace {

// per weight: peak rise and maximal net change, for X and for X'
struct Profile {
  long peak = 0, net = 0, dpeak = 0, dnet = 0;
};

Profile leaf_profile(const OperatorExpr& op, const std::vector<long>& w) {
  Profile p;
  bool first = true;
  for (const auto& [m, c] : op.terms()) {
    long delta = 0;
    for (int i = 0; i < op.modes(); ++i) delta += w[i] * m.delta(i);
    if (first) {
      p.net = delta;
      p.dnet = -delta;
      first = false;
    } else {
      p.net = std::max(p.net, delta);
      p.dnet = std::max(p.dnet, -delta);
    }
    p.peak = std::max(p.peak, delta);
    p.dpeak = std::max(p.dpeak, -delta);
  }
  return p;
}

// x applied after y
Profile product(const Profile& x, const Profile& y) {
  Profile r;
  r.peak = std::max(y.peak, y.net + x.peak);
  r.net = x.net + y.net;
  r.dpeak = std::max(x.dpeak, x.dnet + y.dpeak);
  r.dnet = x.dnet + y.dnet;
  return r;
}

Profile join(const Profile& a, const Profile& b) {
  return {std::max(a.peak, b.peak), std::max(a.net, b.net), std::max(a.dpeak, b.dpeak), std::max(a.dnet, b.dnet)};
}

class ProfileWalker {
 public:
  ProfileWalker(const DefinitionLookup& lookup, const std::vector<long>& w) : lookup_(lookup), w_(w) {}

  Profile walk(const Node& n) {
    switch (n.kind) {
      case NodeKind::label: return label(n.label);
      case NodeKind::scalar: return {};
      case NodeKind::add:
      case NodeKind::sub: return join(walk(*n.lhs), walk(*n.rhs));
      case NodeKind::neg:
      case NodeKind::div: return walk(*n.lhs);
      case NodeKind::mul: return product(walk(*n.lhs), walk(*n.rhs));
      case NodeKind::pow: {
        Profile base = walk(*n.lhs);
        Profile r;
        for (int k = 0; k < n.exponent; ++k) r = product(base, r);
        return r;
      }
      case NodeKind::dagger: {
        Profile p = walk(*n.lhs);
        return {p.dpeak, p.dnet, p.peak, p.net};
      }
      case NodeKind::comm:
      case NodeKind::anti: {
        Profile a = walk(*n.lhs);
        Profile b = walk(*n.rhs);
        return join(product(a, b), product(b, a));
      }
    }
    return {};
  }

 private:
  Profile label(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    NumericDefinition def = lookup_(name);
    Profile p;
    if (def.leaf) p = leaf_profile(*def.leaf, w_);
    else if (def.formula) p = walk(def.formula->node());
    else throw Error("unknown label " + name);
    cache_.emplace(name, p);
    return p;
  }

  const DefinitionLookup& lookup_;
  const std::vector<long>& w_;
  std::map<std::string, Profile> cache_;
};

}  // namespace

std::vector<long> formula_peaks(const Formula& f, const DefinitionLookup& lookup,
                                const std::vector<std::vector<long>>& weights) {
  std::vector<long> out;
  for (const auto& w : weights) out.push_back(ProfileWalker(lookup, w).walk(f.node()).peak);
  return out;
}

std::vector<std::size_t> safe_columns(const FockSector& box, const std::vector<long>& peaks) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < box.dim(); ++c) {
    bool ok = true;
    for (std::size_t j = 0; j < box.weights.size(); ++j)
      if (dot(box.weights[j], box.basis[c]) + peaks[j] > box.bounds[j]) ok = false;
    if (ok) cols.push_back(c);
  }
  return cols;
}

double column_norm(const SparseMatrix& m, const std::vector<std::size_t>& cols) {
  double best = 0.0;
  for (std::size_t c : cols) best = std::max(best, m.col(static_cast<int>(c)).norm());
  return best;
}

double column_diff(const SparseMatrix& a, const SparseMatrix& b, const std::vector<std::size_t>& cols) {
  double best = 0.0;
  for (std::size_t c : cols) {
    Eigen::SparseVector<Cplx> d = a.col(static_cast<int>(c)) - b.col(static_cast<int>(c));
    best = std::max(best, d.norm());
  }
  return best;
}

CompareResult boundary_safe_compare(const SparseMatrix& a, const SparseMatrix& b, const FockSector& box,
                                    const std::vector<long>& peaks, const std::vector<long>& declared_margin) {
  if (peaks.size() != declared_margin.size()) throw Error("margin arity mismatch");
  for (std::size_t j = 0; j < peaks.size(); ++j)
    if (peaks[j] > declared_margin[j])
      throw MarginViolation("operator rises by " + std::to_string(peaks[j]) + " along weight " +
                            std::to_string(j) + " but margin is " + std::to_string(declared_margin[j]));
  auto cols = safe_columns(box, declared_margin);
  CompareResult r;
  r.columns = cols.size();
  r.max_abs_diff = column_diff(a, b, cols);
  r.scale = std::max(column_norm(a, cols), column_norm(b, cols));
  return r;
}

EigenResult oracle_eigensolve(const Eigen::MatrixXcd& a) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, true);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  EigenResult r{solver.eigenvalues(), solver.eigenvectors(), 0.0};
  for (int k = 0; k < a.cols(); ++k) {
    Eigen::VectorXcd v = r.vectors.col(k);
    double res = (a * v - r.values(k) * v).norm() / std::max(1e-300, v.norm());
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

std::string matrix_csv(const SparseMatrix& m) {
  std::ostringstream o;
  o.precision(17);
  o << "row,col,re,im\n";
  std::vector<std::tuple<int, int, Cplx>> entries;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
  });
  for (const auto& [r, c, v] : entries) o << r << "," << c << "," << v.real() << "," << v.imag() << "\n";
  return o.str();
}

std::string matrix_csv(const Eigen::MatrixXcd& m) { return matrix_csv(SparseMatrix(m.sparseView())); }

}  // namespace bosonalg
