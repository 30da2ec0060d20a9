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

#include "varjet/variational.hpp"

#include <algorithm>
#include <cmath>

#include "varjet/error.hpp"

namespace varjet {

int jet_order(const ExprVector& es) {
  int k = 0;
  for (const Expr& e : es) k = std::max(k, e.jet_order());
  return k;
}

namespace {

void check_kinds(const JetChart& chart, const Expr& e) {
  std::uint8_t bit = chart.kind == ChartKind::parametric ? kParametric : kHomogeneous;
  if (e.kinds() & ~bit)
    throw ChartError(std::string("expression does not belong to a ") + to_string(chart.kind) +
                     " chart");
  for (const Coordinate& c : coordinates_of(e))
    if (c.index < chart.first_index() || c.index > chart.n)
      throw ChartError("coordinate " + chart.coordinate_name(c) + " outside the chart");
}

}  // namespace

LagrangianDef::LagrangianDef(const JetChart& c, Expr e)
    : LagrangianDef(c, e, e.jet_order()) {}

LagrangianDef::LagrangianDef(const JetChart& c, Expr e, int k)
    : chart(c.with_order(k)), expr(std::move(e)), order(k) {
  check_kinds(chart, expr);
  if (expr.jet_order() > order)
    throw ChartError("lagrangian references order " + std::to_string(expr.jet_order()) +
                     " above its declared order " + std::to_string(order));
}

DynamicalForm::DynamicalForm(const JetChart& chart, ExprVector components)
    : DynamicalForm(chart, components, jet_order(components)) {}

DynamicalForm::DynamicalForm(const JetChart& chart, ExprVector components, int declared)
    : chart_(chart.with_order(declared)), components_(std::move(components)), order_(declared) {
  if (size() != chart_.dim())
    throw ArityError("form has " + std::to_string(size()) + " components, the chart needs " +
                     std::to_string(chart_.dim()));
  for (const Expr& e : components_) check_kinds(chart_, e);
  int actual = jet_order(components_);
  if (actual != declared)
    throw ChartError("form declared of order " + std::to_string(declared) +
                     " references order " + std::to_string(actual));
}

DynamicalForm euler_poisson(const LagrangianDef& L) {
  const JetChart& chart = L.chart;
  Derivation D = Derivation::total();
  ExprVector comps;
  for (int i = chart.first_index(); i <= chart.n; ++i) {
    Expr acc(0.0);
    for (int k = 0; k <= L.order; ++k) {
      Expr term = partial(L.expr, {chart.kind, i, k - 1});
      for (int m = 0; m < k; ++m) term = D(term);
      acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    comps.push_back(acc);
  }
  return DynamicalForm(chart, comps);
}

double HelmholtzTensor::max_abs() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, std::abs(r));
  return m;
}

double HelmholtzTensor::max_relative() const {
  double m = 0.0;
  for (std::size_t k = 0; k < residual.size(); ++k)
    m = std::max(m, std::abs(residual[k]) / scale[k]);
  return m;
}

HelmholtzSystem::HelmholtzSystem(const DynamicalForm& F, HelmholtzVariant variant)
    : chart_(F.chart()), s_(F.order()), dim_(F.chart().dim()) {
  const int lo = chart_.first_index();
  Derivation D = Derivation::total();
  // chain[a][b][k][m] = D^m dE_a/dv^b_(k-1), m = 0..k
  std::vector<Expr> roots;
  std::vector<int> chain(static_cast<std::size_t>(dim_ * dim_ * (s_ + 1) * (s_ + 1)), -1);
  auto cslot = [&](int a, int b, int k, int m) {
    return static_cast<std::size_t>(((a * dim_ + b) * (s_ + 1) + k) * (s_ + 1) + m);
  };
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int k = 0; k <= s_; ++k) {
        Expr e = partial(F[a], {chart_.kind, lo + b, k - 1});
        for (int m = 0; m <= k; ++m) {
          if (m) e = D(e);
          chain[cslot(a, b, k, m)] = static_cast<int>(roots.size());
          roots.push_back(e);
        }
      }
  auto binom = [](int k, int r) {
    double c = 1.0;
    for (int q = 1; q <= r; ++q) c = c * (k - r + q) / q;
    return c;
  };
  entries_.resize(static_cast<std::size_t>((s_ + 1) * dim_ * dim_));
  for (int r = 0; r <= s_; ++r)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        auto& terms = entries_[static_cast<std::size_t>((r * dim_ + i) * dim_ + j)];
        if (r == 0 && variant == HelmholtzVariant::split) {
          terms.push_back({chain[cslot(i, j, 0, 0)], 1.0});
          terms.push_back({chain[cslot(j, i, 0, 0)], -1.0});
          for (int k = 0; k <= s_; ++k) {
            double sg = k % 2 ? -1.0 : 1.0;
            terms.push_back({chain[cslot(i, j, k, k)], sg});
            terms.push_back({chain[cslot(j, i, k, k)], -sg});
          }
          continue;
        }
        terms.push_back({chain[cslot(i, j, r, 0)], 1.0});
        for (int k = r; k <= s_; ++k) {
          double sg = k % 2 ? -1.0 : 1.0;
          terms.push_back({chain[cslot(j, i, k, k - r)], -sg * binom(k, r)});
        }
      }
  tape_ = Tape(roots);
}

HelmholtzTensor HelmholtzSystem::evaluate(const JetPoint& p, const ConstantMap& consts) const {
  if (p.chart().order < point_order())
    throw EvaluationError("helmholtz residuals of an order " + std::to_string(s_) +
                          " form need a jet point of order " + std::to_string(point_order()));
  std::vector<double> v = tape_.evaluate(p, consts);
  HelmholtzTensor t;
  t.s = s_;
  t.dim = dim_;
  t.residual.resize(entries_.size());
  t.scale.resize(entries_.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    double acc = 0.0;
    double scale = 1.0;
    for (const Term& term : entries_[e]) {
      double x = term.coeff * v[static_cast<std::size_t>(term.root)];
      acc += x;
      scale = std::max(scale, std::abs(x));
    }
    t.residual[e] = acc;
    t.scale[e] = scale;
  }
  return t;
}

HelmholtzTensor helmholtz_residuals(const DynamicalForm& F, const JetPoint& p,
                                    const ConstantMap& consts) {
  return HelmholtzSystem(F).evaluate(p, consts);
}

HelmholtzTensor helmholtz_residuals_split(const DynamicalForm& F, const JetPoint& p,
                                          const ConstantMap& consts) {
  return HelmholtzSystem(F, HelmholtzVariant::split).evaluate(p, consts);
}

std::pair<Expr, Expr> zermelo_expressions(const LagrangianDef& L) {
  const JetChart& c = L.chart;
  if (c.kind != ChartKind::homogeneous)
    throw ChartError("zermelo conditions need a homogeneous chart");
  if (L.order > 2) throw UnsupportedOrderError("zermelo conditions need order <= 2");
  Expr z1 = -L.expr;
  Expr z2(0.0);
  for (int b = 0; b <= c.n; ++b) {
    Expr u = Expr::coordinate({c.kind, b, 0});
    Expr ud = Expr::coordinate({c.kind, b, 1});
    Expr dl_du = partial(L.expr, {c.kind, b, 0});
    Expr dl_dud = partial(L.expr, {c.kind, b, 1});
    z1 = z1 + u * dl_du + Expr(2.0) * ud * dl_dud;
    z2 = z2 + u * dl_dud;
  }
  return {z1, z2};
}

std::pair<double, double> zermelo_residuals(const LagrangianDef& L, const JetPoint& p,
                                            const ConstantMap& consts) {
  auto [z1, z2] = zermelo_expressions(L);
  auto v = evaluate({z1, z2}, p, consts);
  return {v[0], v[1]};
}

}  // namespace varjet
