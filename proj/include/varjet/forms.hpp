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

#include <optional>
#include <string>

#include "varjet/expr.hpp"

namespace varjet {

struct LagrangianDef {
  JetChart chart;
  Expr expr;
  int order = 0;

  LagrangianDef() = default;
  // Order inferred from the highest derivative referenced.
  LagrangianDef(const JetChart& chart, Expr expr);
  LagrangianDef(const JetChart& chart, Expr expr, int order);
};

// Components E_i (parametric, i = 1..n) or E_alpha (homogeneous, alpha = 0..n).
class DynamicalForm {
 public:
  DynamicalForm() = default;
  DynamicalForm(const JetChart& chart, ExprVector components);
  // Throws when declared_order differs from the order actually referenced.
  DynamicalForm(const JetChart& chart, ExprVector components, int declared_order);

  const JetChart& chart() const { return chart_; }
  int size() const { return static_cast<int>(components_.size()); }
  int order() const { return order_; }
  const ExprVector& components() const { return components_; }
  const Expr& operator[](int k) const { return components_.at(static_cast<std::size_t>(k)); }

 private:
  JetChart chart_;
  ExprVector components_;
  int order_ = 0;
};

int jet_order(const ExprVector& es);

}  // namespace varjet
