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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "varjet/jet.hpp"

namespace varjet {

enum class Op : std::uint8_t {
  literal,
  constant,
  coordinate,
  independent,
  neg,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow
};

// Integer or half-integer exponent num/den with den in {1, 2}.
struct Exponent {
  int num = 1;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Exponent&) const = default;
};

class Node;
using NodePtr = std::shared_ptr<const Node>;

enum KindMask : std::uint8_t { kNoChart = 0, kParametric = 1, kHomogeneous = 2 };

class Node {
 public:
  Op op = Op::literal;
  double value = 0.0;
  std::string name;
  Coordinate coord;
  ChartKind independent_kind = ChartKind::parametric;
  Exponent exponent;
  NodePtr a;
  NodePtr b;
  // Highest derivative order r referenced; -2 when no coordinate occurs.
  int max_order = -2;
  std::uint8_t kinds = kNoChart;
};

class Expr {
 public:
  Expr() : Expr(0.0) {}
  Expr(double v);  // NOLINT: literals convert implicitly
  Expr(int v) : Expr(static_cast<double>(v)) {}
  explicit Expr(NodePtr node) : node_(std::move(node)) {}

  static Expr literal(double v) { return Expr(v); }
  static Expr constant(const std::string& name);
  static Expr coordinate(const Coordinate& c);
  static Expr independent(ChartKind kind);
  static Expr sqrt(const Expr& a);
  static Expr pow(const Expr& a, Exponent e);
  static Expr pow(const Expr& a, int e) { return pow(a, Exponent{e, 1}); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  const Node* id() const { return node_.get(); }
  Op op() const { return node_->op; }
  Expr lhs() const { return Expr(node_->a); }
  Expr rhs() const { return Expr(node_->b); }

  bool is_literal() const { return node_->op == Op::literal; }
  bool is_literal(double v) const { return is_literal() && node_->value == v; }
  // Highest derivative order r referenced, -2 if none.
  int max_order() const { return node_->max_order; }
  // Smallest chart order able to evaluate this expression.
  int jet_order() const { return node_->max_order + 1 < 0 ? 0 : node_->max_order + 1; }
  std::uint8_t kinds() const { return node_->kinds; }

  // Number of distinct nodes in the DAG.
  std::size_t size() const;

 private:
  NodePtr node_;
};

using ExprVector = std::vector<Expr>;

// Square n x n matrix of expressions, row major.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  explicit ExprMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n * n)) {}
  int n() const { return n_; }
  Expr& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const Expr& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }
  const std::vector<Expr>& data() const { return data_; }

 private:
  int n_ = 0;
  std::vector<Expr> data_;
};

Expr sum(const std::vector<Expr>& terms);

std::set<Coordinate> coordinates_of(const Expr& e);
std::set<std::string> constants_of(const Expr& e);
bool uses_independent(const Expr& e);

// First-order derivation sum_c coeff_c d/dc + coeff_t d/dt.
class DiffOperator {
 public:
  DiffOperator() = default;

  static DiffOperator partial(const Coordinate& c);
  static DiffOperator partial_independent(ChartKind kind);

  DiffOperator& set(const Coordinate& c, const Expr& coeff);
  DiffOperator& set_independent(ChartKind kind, const Expr& coeff);

  const std::map<Coordinate, Expr>& coefficients() const { return coeffs_; }
  const std::optional<Expr>& independent() const { return independent_; }
  std::uint8_t kinds() const;

 private:
  std::map<Coordinate, Expr> coeffs_;
  std::optional<Expr> independent_;
  ChartKind independent_kind_ = ChartKind::parametric;
};

// Applies a derivation with a memo shared across calls, so repeated use on
// related trees reuses work. D_t is the derivation shifting (i, r) to (i, r+1).
class Derivation {
 public:
  explicit Derivation(DiffOperator op);
  static Derivation total();

  Expr operator()(const Expr& e);

 private:
  Derivation() = default;
  Expr leaf(const Expr& e) const;

  bool total_ = false;
  DiffOperator op_;
  std::unordered_map<const Node*, std::pair<Expr, Expr>> memo_;
};

Expr partial(const Expr& e, const Coordinate& c);
Expr partial(const Expr& e, const Coordinate& c, const JetChart& chart);
Expr partial_independent(const Expr& e, ChartKind kind);
Expr total_derivative(const Expr& e);
Expr total_derivative(const Expr& e, int times);
Expr apply_operator(const DiffOperator& op, const Expr& e);

struct Bindings {
  std::map<Coordinate, Expr> coords;
  std::optional<Expr> independent;
};

enum class SubstitutionMode { complete, partial };

Expr substitute(const Expr& e, const Bindings& bindings,
                SubstitutionMode mode = SubstitutionMode::complete);

using ConstantMap = std::map<std::string, double>;

// Roots compiled into one linear pass over the shared DAG.
class Tape {
 public:
  Tape() = default;
  explicit Tape(const std::vector<Expr>& roots);

  std::vector<double> evaluate(const JetPoint& p, const ConstantMap& consts = {}) const;
  void evaluate(const JetPoint& p, const ConstantMap& consts,
                std::vector<double>& out) const;

  std::size_t size() const { return code_.size(); }
  std::size_t roots() const { return root_slots_.size(); }
  int jet_order() const { return jet_order_; }

 private:
  struct Instr {
    Op op = Op::literal;
    int a = -1;
    int b = -1;
    double value = 0.0;
    Coordinate coord;
    Exponent exponent;
  };

  [[noreturn]] void fail(std::size_t instr, const std::string& what) const;

  std::vector<Instr> code_;
  std::vector<NodePtr> nodes_;
  std::vector<int> root_slots_;
  std::vector<Expr> root_exprs_;
  std::vector<std::string> constant_names_;
  int jet_order_ = 0;
  std::uint8_t kinds_ = kNoChart;
  ChartKind independent_kind_ = ChartKind::parametric;
};

double evaluate(const Expr& e, const JetPoint& p, const ConstantMap& consts = {});
std::vector<double> evaluate(const std::vector<Expr>& es, const JetPoint& p,
                             const ConstantMap& consts = {});

// Fully parenthesized text. Literals carry 17 significant digits. With a
// limit, output is cut after roughly that many characters.
std::string to_text(const Expr& e, std::size_t limit = 0);

}  // namespace varjet
