// Copyright 2026 The varjet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "varjet/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <unordered_set>

#include "varjet/error.hpp"

namespace varjet {

namespace {

std::uint8_t kind_bit(ChartKind k) {
  return k == ChartKind::parametric ? kParametric : kHomogeneous;
}

Expr make_unary(Op op, const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.ptr();
  n->max_order = a.max_order();
  n->kinds = a.kinds();
  return Expr(NodePtr(std::move(n)));
}

Expr make_binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.ptr();
  n->b = b.ptr();
  n->max_order = std::max(a.max_order(), b.max_order());
  n->kinds = a.kinds() | b.kinds();
  return Expr(NodePtr(std::move(n)));
}

bool pow_defined(double x, Exponent e) {
  if (e.den == 2 && x < 0.0) return false;
  if (e.num < 0 && x == 0.0) return false;
  return true;
}

double pow_value(double x, Exponent e) {
  if (e.den == 2) return std::pow(std::sqrt(x), static_cast<double>(e.num));
  return std::pow(x, static_cast<double>(e.num));
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Expr::Expr(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::literal;
  n->value = v;
  node_ = std::move(n);
}

Expr Expr::constant(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->name = name;
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::coordinate(const Coordinate& c) {
  if (c.order < -1 || c.index < 0) throw ChartError("invalid coordinate");
  auto n = std::make_shared<Node>();
  n->op = Op::coordinate;
  n->coord = c;
  n->max_order = c.order;
  n->kinds = kind_bit(c.kind);
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::independent(ChartKind kind) {
  auto n = std::make_shared<Node>();
  n->op = Op::independent;
  n->independent_kind = kind;
  n->kinds = kind_bit(kind);
  return Expr(NodePtr(std::move(n)));
}

Expr Expr::sqrt(const Expr& a) {
  if (a.is_literal() && a.node().value >= 0.0) return Expr(std::sqrt(a.node().value));
  return make_unary(Op::sqrt, a);
}

Expr Expr::pow(const Expr& a, Exponent e) {
  if (e.den != 1 && e.den != 2)
    throw DomainError("exponent must be an integer or a half-integer");
  if (e.den == 2 && e.num % 2 == 0) e = {e.num / 2, 1};
  if (e.den == 1 && e.num == 0) return Expr(1.0);
  if (e.den == 1 && e.num == 1) return a;
  if (a.is_literal() && pow_defined(a.node().value, e)) {
    double v = pow_value(a.node().value, e);
    if (finite(v)) return Expr(v);
  }
  Expr out = make_unary(Op::pow, a);
  const_cast<Node&>(out.node()).exponent = e;
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) {
    double v = a.node().value + b.node().value;
    if (finite(v)) return Expr(v);
  }
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  return make_binary(Op::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) {
    double v = a.node().value - b.node().value;
    if (finite(v)) return Expr(v);
  }
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return -b;
  return make_binary(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) {
    double v = a.node().value * b.node().value;
    if (finite(v)) return Expr(v);
  }
  if (a.is_literal(0.0) || b.is_literal(0.0)) return Expr(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  return make_binary(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal() && b.node().value != 0.0) {
    double v = a.node().value / b.node().value;
    if (finite(v)) return Expr(v);
  }
  if (b.is_literal(1.0)) return a;
  if (a.is_literal(0.0) && !b.is_literal(0.0)) return Expr(0.0);
  return make_binary(Op::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_literal()) return Expr(-a.node().value);
  if (a.op() == Op::neg) return a.lhs();
  return make_unary(Op::neg, a);
}

namespace {

template <typename Visit>
void for_each_node(const Expr& root, Visit visit) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{root.id()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    visit(*n);
    if (n->a) stack.push_back(n->a.get());
    if (n->b) stack.push_back(n->b.get());
  }
}

}  // namespace

std::size_t Expr::size() const {
  std::size_t count = 0;
  for_each_node(*this, [&](const Node&) { ++count; });
  return count;
}

Expr sum(const std::vector<Expr>& terms) {
  Expr acc(0.0);
  for (const Expr& t : terms) acc = acc + t;
  return acc;
}

std::set<Coordinate> coordinates_of(const Expr& e) {
  std::set<Coordinate> out;
  for_each_node(e, [&](const Node& n) {
    if (n.op == Op::coordinate) out.insert(n.coord);
  });
  return out;
}

std::set<std::string> constants_of(const Expr& e) {
  std::set<std::string> out;
  for_each_node(e, [&](const Node& n) {
    if (n.op == Op::constant) out.insert(n.name);
  });
  return out;
}

bool uses_independent(const Expr& e) {
  bool found = false;
  for_each_node(e, [&](const Node& n) {
    if (n.op == Op::independent) found = true;
  });
  return found;
}

DiffOperator DiffOperator::partial(const Coordinate& c) {
  DiffOperator op;
  op.set(c, Expr(1.0));
  return op;
}

DiffOperator DiffOperator::partial_independent(ChartKind kind) {
  DiffOperator op;
  op.set_independent(kind, Expr(1.0));
  return op;
}

DiffOperator& DiffOperator::set(const Coordinate& c, const Expr& coeff) {
  if (c.order < -1 || c.index < 0) throw ChartError("invalid coordinate");
  if (!coeffs_.empty() && coeffs_.begin()->first.kind != c.kind)
    throw ChartError("operator coefficients mix charts");
  if (independent_ && independent_kind_ != c.kind)
    throw ChartError("operator coefficients mix charts");
  coeffs_[c] = coeff;
  return *this;
}

DiffOperator& DiffOperator::set_independent(ChartKind kind, const Expr& coeff) {
  if (!coeffs_.empty() && coeffs_.begin()->first.kind != kind)
    throw ChartError("operator coefficients mix charts");
  independent_ = coeff;
  independent_kind_ = kind;
  return *this;
}

std::uint8_t DiffOperator::kinds() const {
  std::uint8_t k = kNoChart;
  if (!coeffs_.empty()) k |= kind_bit(coeffs_.begin()->first.kind);
  if (independent_) k |= kind_bit(independent_kind_);
  return k;
}

Derivation::Derivation(DiffOperator op) : op_(std::move(op)) {}

Derivation Derivation::total() {
  Derivation d;
  d.total_ = true;
  return d;
}

Expr Derivation::leaf(const Expr& e) const {
  const Node& n = e.node();
  if (total_) {
    if (n.op == Op::coordinate)
      return Expr::coordinate({n.coord.kind, n.coord.index, n.coord.order + 1});
    return Expr(1.0);
  }
  if (n.op == Op::coordinate) {
    auto it = op_.coefficients().find(n.coord);
    return it == op_.coefficients().end() ? Expr(0.0) : it->second;
  }
  if (op_.independent() && (op_.kinds() & kind_bit(n.independent_kind)))
    return *op_.independent();
  return Expr(0.0);
}

Expr Derivation::operator()(const Expr& e) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::literal:
    case Op::constant:
      return Expr(0.0);
    case Op::coordinate:
    case Op::independent:
      return leaf(e);
    default:
      break;
  }
  auto it = memo_.find(e.id());
  if (it != memo_.end()) return it->second.second;

  Expr out;
  Expr a = e.lhs();
  switch (n.op) {
    case Op::neg:
      out = -(*this)(a);
      break;
    case Op::sqrt:
      out = (*this)(a) / (Expr(2.0) * e);
      break;
    case Op::add:
      out = (*this)(a) + (*this)(e.rhs());
      break;
    case Op::sub:
      out = (*this)(a) - (*this)(e.rhs());
      break;
    case Op::mul: {
      Expr b = e.rhs();
      out = (*this)(a) * b + a * (*this)(b);
      break;
    }
    case Op::div: {
      Expr b = e.rhs();
      out = ((*this)(a) - e * (*this)(b)) / b;
      break;
    }
    case Op::pow: {
      Exponent p = n.exponent;
      Expr da = (*this)(a);
      if (!da.is_literal(0.0))
        out = Expr(p.value()) * Expr::pow(a, Exponent{p.num - p.den, p.den}) * da;
      break;
    }
    default:
      break;
  }
  memo_.emplace(e.id(), std::make_pair(e, out));
  return out;
}

namespace {

void check_chart_compatible(std::uint8_t expr_kinds, std::uint8_t op_kinds) {
  if (expr_kinds != kNoChart && op_kinds != kNoChart && (expr_kinds & ~op_kinds))
    throw ChartError("operator and expression live in different charts");
}

}  // namespace

Expr partial(const Expr& e, const Coordinate& c) {
  DiffOperator op = DiffOperator::partial(c);
  check_chart_compatible(e.kinds(), op.kinds());
  return Derivation(std::move(op))(e);
}

Expr partial(const Expr& e, const Coordinate& c, const JetChart& chart) {
  if (!chart.contains(c))
    throw ChartError("coordinate " + chart.coordinate_name(c) + " is not in the chart");
  return partial(e, c);
}

Expr partial_independent(const Expr& e, ChartKind kind) {
  DiffOperator op = DiffOperator::partial_independent(kind);
  check_chart_compatible(e.kinds(), op.kinds());
  return Derivation(std::move(op))(e);
}

Expr total_derivative(const Expr& e) { return Derivation::total()(e); }

Expr total_derivative(const Expr& e, int times) {
  Derivation d = Derivation::total();
  Expr out = e;
  for (int k = 0; k < times; ++k) out = d(out);
  return out;
}

Expr apply_operator(const DiffOperator& op, const Expr& e) {
  check_chart_compatible(e.kinds(), op.kinds());
  return Derivation(op)(e);
}

namespace {

class Substituter {
 public:
  Substituter(const Bindings& b, SubstitutionMode mode) : b_(b), mode_(mode) {}

  Expr operator()(const Expr& e) {
    const Node& n = e.node();
    switch (n.op) {
      case Op::literal:
      case Op::constant:
        return e;
      case Op::coordinate: {
        auto it = b_.coords.find(n.coord);
        if (it != b_.coords.end()) return it->second;
        if (mode_ == SubstitutionMode::complete)
          throw BindingError("no binding for coordinate " +
                             JetChart().coordinate_name(n.coord));
        return e;
      }
      case Op::independent:
        if (b_.independent) return *b_.independent;
        if (mode_ == SubstitutionMode::complete)
          throw BindingError("no binding for the independent variable");
        return e;
      default:
        break;
    }
    auto it = memo_.find(e.id());
    if (it != memo_.end()) return it->second.second;
    Expr a = (*this)(e.lhs());
    Expr out;
    switch (n.op) {
      case Op::neg: out = a.id() == n.a.get() ? e : -a; break;
      case Op::sqrt: out = a.id() == n.a.get() ? e : Expr::sqrt(a); break;
      case Op::pow: out = a.id() == n.a.get() ? e : Expr::pow(a, n.exponent); break;
      default: {
        Expr b = (*this)(e.rhs());
        if (a.id() == n.a.get() && b.id() == n.b.get()) {
          out = e;
        } else if (n.op == Op::add) {
          out = a + b;
        } else if (n.op == Op::sub) {
          out = a - b;
        } else if (n.op == Op::mul) {
          out = a * b;
        } else {
          out = a / b;
        }
      }
    }
    memo_.emplace(e.id(), std::make_pair(e, out));
    return out;
  }

 private:
  const Bindings& b_;
  SubstitutionMode mode_;
  std::unordered_map<const Node*, std::pair<Expr, Expr>> memo_;
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings, SubstitutionMode mode) {
  std::uint8_t targets = kNoChart;
  for (const auto& [c, t] : bindings.coords) targets |= t.kinds();
  if (bindings.independent) targets |= bindings.independent->kinds();
  if (targets == (kParametric | kHomogeneous))
    throw ChartError("substitution targets mix charts");
  return Substituter(bindings, mode)(e);
}

Tape::Tape(const std::vector<Expr>& roots) : root_exprs_(roots) {
  std::unordered_map<const Node*, int> index;
  std::map<std::string, int> constants;
  bool independent_seen = false;
  for (const Expr& root : roots) {
    kinds_ |= root.kinds();
    jet_order_ = std::max(jet_order_, root.jet_order());
    std::vector<std::pair<const Node*, bool>> stack{{root.id(), false}};
    while (!stack.empty()) {
      auto [n, expanded] = stack.back();
      stack.pop_back();
      if (index.count(n)) continue;
      if (!expanded) {
        stack.push_back({n, true});
        if (n->b && !index.count(n->b.get())) stack.push_back({n->b.get(), false});
        if (n->a && !index.count(n->a.get())) stack.push_back({n->a.get(), false});
        continue;
      }
      Instr in;
      in.op = n->op;
      if (n->a) in.a = index.at(n->a.get());
      if (n->b) in.b = index.at(n->b.get());
      in.value = n->value;
      in.coord = n->coord;
      in.exponent = n->exponent;
      if (n->op == Op::constant) {
        auto [it, fresh] =
            constants.emplace(n->name, static_cast<int>(constant_names_.size()));
        if (fresh) constant_names_.push_back(n->name);
        in.value = it->second;
      }
      if (n->op == Op::independent) {
        if (independent_seen && independent_kind_ != n->independent_kind)
          throw ChartError("expressions mix independent variables of two charts");
        independent_seen = true;
        independent_kind_ = n->independent_kind;
      }
      index.emplace(n, static_cast<int>(code_.size()));
      code_.push_back(in);
      nodes_.push_back(nullptr);
    }
    root_slots_.push_back(index.at(root.id()));
  }
  // Keep every node alive so error reports can locate and render it.
  std::vector<NodePtr> keep;
  for (const Expr& root : roots) {
    std::vector<NodePtr> stack{root.ptr()};
    std::unordered_set<const Node*> seen;
    while (!stack.empty()) {
      NodePtr n = stack.back();
      stack.pop_back();
      if (!seen.insert(n.get()).second) continue;
      nodes_[static_cast<std::size_t>(index.at(n.get()))] = n;
      if (n->a) stack.push_back(n->a);
      if (n->b) stack.push_back(n->b);
    }
  }
}

void Tape::fail(std::size_t instr, const std::string& what) const {
  const Node* target = nodes_[instr].get();
  std::unordered_map<const Node*, bool> reaches;
  std::function<bool(const Node*)> search = [&](const Node* n) -> bool {
    if (n == target) return true;
    auto it = reaches.find(n);
    if (it != reaches.end()) return it->second;
    bool r = (n->a && search(n->a.get())) || (n->b && search(n->b.get()));
    reaches[n] = r;
    return r;
  };
  std::vector<int> path;
  for (std::size_t k = 0; k < root_exprs_.size(); ++k) {
    const Node* n = root_exprs_[k].id();
    if (!search(n)) continue;
    path.push_back(static_cast<int>(k));
    while (n != target) {
      if (n->a && search(n->a.get())) {
        path.push_back(0);
        n = n->a.get();
      } else {
        path.push_back(1);
        n = n->b.get();
      }
    }
    break;
  }
  std::string subtree = to_text(Expr(nodes_[instr]), 400);
  std::string where;
  for (std::size_t k = 0; k < path.size(); ++k)
    where += (k ? "." : "") + std::to_string(path[k]);
  throw EvaluationError(what + " at path " + where + " in " + subtree, path, subtree);
}

void Tape::evaluate(const JetPoint& p, const ConstantMap& consts,
                    std::vector<double>& out) const {
  std::vector<double> cvals(constant_names_.size());
  for (std::size_t k = 0; k < constant_names_.size(); ++k) {
    auto it = consts.find(constant_names_[k]);
    if (it == consts.end())
      throw BindingError("unbound constant '" + constant_names_[k] + "'");
    cvals[k] = it->second;
  }
  std::vector<double> reg(code_.size());
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& in = code_[k];
    double x = in.a >= 0 ? reg[static_cast<std::size_t>(in.a)] : 0.0;
    double y = in.b >= 0 ? reg[static_cast<std::size_t>(in.b)] : 0.0;
    double r = 0.0;
    switch (in.op) {
      case Op::literal: r = in.value; break;
      case Op::constant: r = cvals[static_cast<std::size_t>(in.value)]; break;
      case Op::coordinate:
        if (in.coord.kind != p.chart().kind)
          throw ChartError("expression and jet point belong to different charts");
        r = p[in.coord];
        break;
      case Op::independent:
        if (independent_kind_ != p.chart().kind)
          throw ChartError("expression and jet point belong to different charts");
        r = p.t_value();
        break;
      case Op::neg: r = -x; break;
      case Op::sqrt:
        if (x < 0.0) fail(k, "square root of a negative value");
        r = std::sqrt(x);
        break;
      case Op::add: r = x + y; break;
      case Op::sub: r = x - y; break;
      case Op::mul: r = x * y; break;
      case Op::div:
        if (y == 0.0) fail(k, "division by zero");
        r = x / y;
        break;
      case Op::pow:
        if (!pow_defined(x, in.exponent)) fail(k, "power outside its domain");
        r = pow_value(x, in.exponent);
        break;
    }
    reg[k] = r;
  }
  out.resize(root_slots_.size());
  for (std::size_t k = 0; k < root_slots_.size(); ++k)
    out[k] = reg[static_cast<std::size_t>(root_slots_[k])];
}

std::vector<double> Tape::evaluate(const JetPoint& p, const ConstantMap& consts) const {
  std::vector<double> out;
  evaluate(p, consts, out);
  return out;
}

double evaluate(const Expr& e, const JetPoint& p, const ConstantMap& consts) {
  return Tape({e}).evaluate(p, consts)[0];
}

std::vector<double> evaluate(const std::vector<Expr>& es, const JetPoint& p,
                             const ConstantMap& consts) {
  return Tape(es).evaluate(p, consts);
}

namespace {

std::string literal_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::fabs(v));
  if (std::signbit(v)) return std::string("(-") + buf + ")";
  return buf;
}

void render(const Node& n, std::string& out, std::size_t limit) {
  if (limit && out.size() > limit) return;
  switch (n.op) {
    case Op::literal: out += literal_text(n.value); return;
    case Op::constant: out += n.name; return;
    case Op::coordinate: out += JetChart().coordinate_name(n.coord); return;
    case Op::independent:
      out += n.independent_kind == ChartKind::parametric ? "t" : "zeta";
      return;
    case Op::neg:
      out += "(-";
      render(*n.a, out, limit);
      out += ")";
      return;
    case Op::sqrt:
      out += "sqrt(";
      render(*n.a, out, limit);
      out += ")";
      return;
    case Op::pow:
      out += "(";
      render(*n.a, out, limit);
      out += ")^(" + std::to_string(n.exponent.num);
      if (n.exponent.den != 1) out += "/" + std::to_string(n.exponent.den);
      out += ")";
      return;
    default:
      break;
  }
  const char* sym = n.op == Op::add ? " + " : n.op == Op::sub ? " - "
                  : n.op == Op::mul ? " * " : " / ";
  out += "(";
  render(*n.a, out, limit);
  out += sym;
  render(*n.b, out, limit);
  out += ")";
}

}  // namespace

std::string to_text(const Expr& e, std::size_t limit) {
  std::string out;
  render(e.node(), out, limit);
  if (limit && out.size() > limit) {
    out.resize(limit);
    out += "...";
  }
  return out;
}

}  // namespace varjet
