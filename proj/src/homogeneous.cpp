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

#include "varjet/homogeneous.hpp"

#include <algorithm>
#include <cmath>

#include "varjet/error.hpp"

namespace varjet {

JetPoint project_jet(const JetPoint& p, int order) {
  const JetChart& hc = p.chart();
  if (hc.kind != ChartKind::homogeneous) throw ChartError("project_jet needs a homogeneous point");
  if (order > 3) throw UnsupportedOrderError("projection is available up to order 3");
  if (order < 0) throw ChartError("negative jet order");
  if (hc.order < order)
    throw EvaluationError("homogeneous point of order " + std::to_string(hc.order) +
                          " cannot be projected to order " + std::to_string(order));
  JetPoint out(JetChart(ChartKind::parametric, hc.n, order), p.value(0, -1));
  double t1 = order >= 1 ? p.value(0, 0) : 1.0;
  if (order >= 1 && t1 == 0.0) throw SingularityError("projection singular at u0 = 0");
  double t2 = order >= 2 ? p.value(0, 1) : 0.0;
  double t3 = order >= 3 ? p.value(0, 2) : 0.0;
  for (int i = 1; i <= hc.n; ++i) {
    out.set(i, -1, p.value(i, -1));
    if (order >= 1) out.set(i, 0, p.value(i, 0) / t1);
    if (order >= 2)
      out.set(i, 1, (t1 * p.value(i, 1) - t2 * p.value(i, 0)) / (t1 * t1 * t1));
    if (order >= 3)
      out.set(i, 2,
              (t1 * t1 * p.value(i, 2) - 3.0 * t1 * t2 * p.value(i, 1) +
               (3.0 * t2 * t2 - t1 * t3) * p.value(i, 0)) /
                  std::pow(t1, 5));
  }
  return out;
}

Bindings projection_bindings(int n, int order) {
  if (order > 3) throw UnsupportedOrderError("projection is available up to order 3");
  auto H = [](int i, int r) { return Expr::coordinate({ChartKind::homogeneous, i, r}); };
  Bindings b;
  b.independent = H(0, -1);
  Expr t1 = H(0, 0);
  Expr t2 = H(0, 1);
  Expr t3 = H(0, 2);
  for (int i = 1; i <= n; ++i) {
    b.coords[{ChartKind::parametric, i, -1}] = H(i, -1);
    if (order >= 1) b.coords[{ChartKind::parametric, i, 0}] = H(i, 0) / t1;
    if (order >= 2)
      b.coords[{ChartKind::parametric, i, 1}] =
          (t1 * H(i, 1) - t2 * H(i, 0)) / Expr::pow(t1, 3);
    if (order >= 3)
      b.coords[{ChartKind::parametric, i, 2}] =
          (Expr::pow(t1, 2) * H(i, 2) - Expr(3.0) * t1 * t2 * H(i, 1) +
           (Expr(3.0) * Expr::pow(t2, 2) - t1 * t3) * H(i, 0)) /
          Expr::pow(t1, 5);
  }
  return b;
}

LagrangianDef lift_lagrangian(const LagrangianDef& L) {
  if (L.chart.kind != ChartKind::parametric) throw ChartError("lift needs a parametric lagrangian");
  if (L.order > 2) throw UnsupportedOrderError("lagrangian lift is available up to order 2");
  Bindings b = projection_bindings(L.chart.n, L.order);
  Expr lifted = substitute(L.expr, b) * Expr::coordinate({ChartKind::homogeneous, 0, 0});
  return LagrangianDef(JetChart(ChartKind::homogeneous, L.chart.n, L.order), lifted);
}

DynamicalForm lift_equation_form(const DynamicalForm& E) {
  if (E.chart().kind != ChartKind::parametric) throw ChartError("lift needs a parametric form");
  if (E.order() > 3) throw UnsupportedOrderError("equation lift is available up to order 3");
  int n = E.chart().n;
  Bindings b = projection_bindings(n, E.order());
  Expr u0 = Expr::coordinate({ChartKind::homogeneous, 0, 0});
  ExprVector comps(static_cast<std::size_t>(n + 1));
  Expr e0(0.0);
  for (int i = 1; i <= n; ++i) {
    Expr ei = substitute(E[i - 1], b);
    e0 = e0 - Expr::coordinate({ChartKind::homogeneous, i, 0}) * ei;
    comps[static_cast<std::size_t>(i)] = u0 * ei;
  }
  comps[0] = e0;
  return DynamicalForm(JetChart(ChartKind::homogeneous, n, jet_order(comps)), comps);
}

std::vector<double> lift_equation(const DynamicalForm& E, const JetPoint& p,
                                  const ConstantMap& consts) {
  if (E.chart().kind != ChartKind::parametric) throw ChartError("lift needs a parametric form");
  if (p.chart().kind != ChartKind::homogeneous) throw ChartError("lift needs a homogeneous point");
  if (p.chart().n != E.chart().n) throw ChartError("form and point dimensions differ");
  int order = std::max(E.order(), 1);
  JetPoint q = project_jet(p, order);
  std::vector<double> e = evaluate(E.components(), q, consts);
  std::vector<double> out(e.size() + 1, 0.0);
  double u0 = p.value(0, 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    out[0] -= p.value(static_cast<int>(i) + 1, 0) * e[i];
    out[i + 1] = u0 * e[i];
  }
  return out;
}

}  // namespace varjet
