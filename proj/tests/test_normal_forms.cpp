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

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "varjet/corpus.hpp"
#include "varjet/error.hpp"
#include "varjet/model.hpp"
#include "varjet/normal_forms.hpp"
#include "varjet/top_model.hpp"
#include "varjet/variational.hpp"

using namespace varjet;
using varjet::testing::model_path;
using varjet::testing::P;

namespace {

const ChartKind kP = ChartKind::parametric;

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

JetPoint sample(int n, int order, std::uint64_t seed) {
  return sample_jetpoint(JetChart(kP, n, order), SampleRanges::admissible_parametric(order), seed);
}

Shape3 blank3(int n) {
  Shape3 S{JetChart(kP, n, 2), ExprMatrix(n), ExprMatrix(n), ExprVector(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    S.c[static_cast<std::size_t>(i)] = Expr(0.0);
    for (int j = 0; j < n; ++j) S.A(i, j) = S.B(i, j) = Expr(0.0);
  }
  return S;
}

double max_abs_of(const ConditionValues& v, const std::string& name) {
  double m = 0.0;
  for (double x : v.at(name)) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Shape3, ConstantSkewLeadingTerm) {
  JetChart c(kP, 2, 3);
  DynamicalForm F(c, {P("2*v2''", c), P("-2*v1''", c)});
  Shape3 S = extract_shape3(F);
  JetPoint p = sample(2, 2, 1);
  EXPECT_EQ(evaluate(S.A(0, 1), p), 2.0);
  EXPECT_EQ(evaluate(S.A(1, 0), p), -2.0);
  EXPECT_EQ(evaluate(S.A(0, 0), p), 0.0);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(evaluate(S.c[static_cast<std::size_t>(i)], p), 0.0);
    for (int j = 0; j < 2; ++j) EXPECT_EQ(evaluate(S.B(i, j), p), 0.0);
  }
}

TEST(Shape3, TopEquationCoefficients) {
  TopModel top = build_top_model(1.3);
  Shape3 S = extract_shape3(top.model.form("E10"), {20, 1, 1e-9, top.model.fixed_constants()});
  JetPoint p(JetChart(kP, 2, 2));
  EXPECT_DOUBLE_EQ(std::abs(evaluate(S.A(0, 1), p, {{"mu", 1.3}})), 1.0);
  p.set(1, 0, 0.6);
  EXPECT_NEAR(std::abs(evaluate(S.A(0, 1), p, {{"mu", 1.3}})), 1.953125, 1e-15);
}

TEST(Shape3, TopEquationBClosedForm) {
  TopModel top = build_top_model(std::nullopt);
  ConstantMap mu{{"mu", 0.8}};
  Shape3 S = extract_shape3(top.model.form("E10"), {20, 2, 1e-9, mu});
  // B = const (1 - y)^(-3/2) (v_i v_j + (1 - y) delta_ij), const read at v = 0
  double k = evaluate(S.B(0, 0), JetPoint(JetChart(kP, 2, 2)), mu);
  EXPECT_DOUBLE_EQ(k, 0.8);
  for (int n = 0; n < 50; ++n) {
    JetPoint p = sample(2, 2, derive_seed(3, n));
    double v[2] = {p.value(1, 0), p.value(2, 0)};
    double y = v[0] * v[0] + v[1] * v[1];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double closed = k * std::pow(1 - y, -1.5) * (v[i] * v[j] + (i == j ? 1 - y : 0.0));
        EXPECT_LT(rel(evaluate(S.B(i, j), p, mu), closed), 1e-12);
      }
  }
}

TEST(Shape3, TopEquationConditions) {
  TopModel top = build_top_model(std::nullopt);
  Shape3 S = extract_shape3(top.model.form("E10"), {20, 4, 1e-9, {{"mu", 1.0}}});
  ConditionSet cs = shape3_conditions(S);
  for (int k = 0; k < 100; ++k)
    EXPECT_LT(max_abs(cs.evaluate(sample(2, 3, derive_seed(5, k)), {{"mu", 0.5 + 0.015 * k}})), 1e-9);
}

TEST(Shape3, DegenerateAndHandExamples) {
  Shape3 S = blank3(2);
  auto zero = shape3_condition_residuals(S, sample(2, 3, 1));
  EXPECT_EQ(zero.size(), 6u);
  EXPECT_EQ(max_abs(zero), 0.0);
  JetChart c(kP, 2, 1);
  S.A(0, 1) = Expr(1.0);
  S.A(1, 0) = Expr(-1.0);
  S.c[0] = P("x2", c);
  auto r = shape3_condition_residuals(S, sample(2, 3, 2));
  EXPECT_DOUBLE_EQ(r.at("vii")[1], -2.0);
  EXPECT_DOUBLE_EQ(r.at("vii")[2], 2.0);
  for (const auto& [name, values] : r)
    if (name != "vii") EXPECT_EQ(max_abs_of(r, name), 0.0) << name;
}

TEST(Shape3, FirstConditionVanishesInTwoDimensions) {
  Rng rng(8);
  JetChart c(kP, 2, 1);
  varjet::testing::TreeGen gen(c, rng);
  for (int k = 0; k < 10; ++k) {
    Shape3 S = blank3(2);
    Expr a = gen(4);
    S.A(0, 1) = a;
    S.A(1, 0) = -a;
    auto r = shape3_condition_residuals(S, sample_jetpoint(JetChart(kP, 2, 4),
                                                           SampleRanges::uniform(4, {-1, 1}), k));
    EXPECT_LT(max_abs_of(r, "i'"), 1e-14);
  }
}

TEST(Shape3, RejectsNonNormalForms) {
  JetChart c(kP, 2, 3);
  EXPECT_THROW(extract_shape3(DynamicalForm(c, {P("v1''^2", c), P("0", c)})), NormalFormError);
  EXPECT_THROW(extract_shape3(DynamicalForm(c, {P("v1''", c), P("0", c)})), NormalFormError);
  EXPECT_THROW(extract_shape3(DynamicalForm(c, {P("v2''*v1'", c), P("-v1''*v1'", c)})),
               NormalFormError);
  EXPECT_THROW(extract_shape3(DynamicalForm(c, {P("v1'^3", c), P("0", c)})), NormalFormError);
}

TEST(Shape3, SecondOrderReductionMatchesHelmholtz) {
  std::vector<DynamicalForm> forms;
  forms.push_back(load_model(model_path("oscillator.model")).form("OSC"));
  forms.push_back(load_model(model_path("damped.model")).form("DAMPED"));
  for (const CorpusEntry& e : lagrangian_corpus(9, 12))
    if (e.lagrangian.order == 1) {
      DynamicalForm E = euler_poisson(e.lagrangian);
      forms.push_back(E);
      ExprVector bent = E.components();
      bent[0] += P("v1", E.chart());
      forms.push_back(DynamicalForm(E.chart(), bent));
    }
  int variational = 0, not_variational = 0;
  for (const DynamicalForm& F : forms) {
    const int n = F.chart().n;
    ExtractionOptions eo;
    eo.consts = {{"k", 2.5}};
    ConditionSet cs = shape3_conditions(extract_shape3(F, eo));
    HelmholtzSystem sys(F);
    double a = 0, b = 0;
    for (int k = 0; k < 5; ++k) {
      a = std::max(a, max_abs(cs.evaluate(sample(n, 4, derive_seed(13, k)), {{"k", 2.5}})));
      b = std::max(b, sys.evaluate(sample(n, 4, derive_seed(13, k)), {{"k", 2.5}}).max_abs());
    }
    EXPECT_EQ(a < 1e-9, b < 1e-9) << a << " " << b;
    (b < 1e-9 ? variational : not_variational)++;
  }
  EXPECT_GT(variational, 2);
  EXPECT_GT(not_variational, 2);
}

TEST(Shape4, FourthDerivative) {
  JetChart c(kP, 1, 4);
  Shape4 S = extract_shape4(DynamicalForm(c, {P("v1'''", c)}));
  JetPoint p = sample(1, 2, 3);
  EXPECT_EQ(evaluate(S.M(0, 0), p), 1.0);
  EXPECT_EQ(evaluate(S.A(0, 0), p), 0.0);
  EXPECT_EQ(evaluate(S.b[0], p), 0.0);
}

TEST(Shape4, GeneratedLagrangianWithUnitMass) {
  JetChart c(kP, 2, 2);
  LagrangianDef L(c, P("(v1'^2 + v2'^2)/2 + x1*v2", c));
  Shape4 S = extract_shape4(euler_poisson(L));
  JetPoint p = sample(2, 4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(evaluate(S.M(i, j), p), i == j ? 1.0 : 0.0);
  EXPECT_LT(max_abs(shape4_condition_residuals(S, p)), 1e-12);
}

TEST(Shape4, RejectsQuadraticHighestDerivative) {
  JetChart c(kP, 1, 4);
  EXPECT_THROW(extract_shape4(DynamicalForm(c, {P("v1'''^2", c)})), NormalFormError);
  EXPECT_THROW(extract_shape4(DynamicalForm(c, {P("v1'''*v1''", c)})), NormalFormError);
}

TEST(Shape4, CorpusConditionsAndIdentity) {
  Rng rng(21);
  for (int k = 0; k < 8; ++k) {
    LagrangianDef L = random_polynomial_lagrangian(2, 2, false, rng);
    Shape4 S = extract_shape4(euler_poisson(L));
    ConditionSet cs = shape4_conditions(S);
    for (int m = 0; m < 5; ++m) {
      auto r = cs.evaluate(sample(2, 4, derive_seed(22, m)));
      EXPECT_LT(max_abs(r), 1e-8);
      EXPECT_LT(max_abs_of(r, "identity"), 1e-8);
      const auto& jjj = r.at("jjj");
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l)
            EXPECT_NEAR(jjj[static_cast<std::size_t>((i * 2 + j) * 2 + l)],
                        jjj[static_cast<std::size_t>((i * 2 + l) * 2 + j)], 1e-8);
    }
  }
}

TEST(Coefficients, SimpleSecondOrderLagrangian) {
  JetChart c(kP, 1, 2);
  auto S = std::get<Shape4>(coefficients_from_lagrangian(LagrangianDef(c, P("v1'^2/2", c)),
                                                         ShapeTarget::shape4));
  JetPoint p = sample(1, 4, 1);
  EXPECT_EQ(evaluate(S.M(0, 0), p), 1.0);
  EXPECT_EQ(evaluate(S.A(0, 0), p), 0.0);
  EXPECT_EQ(evaluate(S.b[0], p), 0.0);
}

TEST(Coefficients, TopLagrangiansMatchExtraction) {
  TopModel top = build_top_model(std::nullopt);
  ConstantMap mu{{"mu", 1.1}};
  Shape3 E = extract_shape3(top.model.form("E10"), {20, 5, 1e-9, mu});
  for (const char* name : {"L1", "L2"}) {
    auto S = std::get<Shape3>(coefficients_from_lagrangian(top.model.lagrangian(name), ShapeTarget::shape3));
    for (int k = 0; k < 20; ++k) {
      JetPoint p = sample(2, 2, derive_seed(6, k));
      for (int i = 0; i < 2; ++i) {
        EXPECT_LT(rel(evaluate(S.c[static_cast<std::size_t>(i)], p, mu),
                      evaluate(E.c[static_cast<std::size_t>(i)], p, mu)),
                  1e-9)
            << name;
        for (int j = 0; j < 2; ++j) {
          EXPECT_LT(rel(evaluate(S.A(i, j), p, mu), evaluate(E.A(i, j), p, mu)), 1e-9) << name;
          EXPECT_LT(rel(evaluate(S.B(i, j), p, mu), evaluate(E.B(i, j), p, mu)), 1e-9) << name;
        }
      }
    }
  }
}

TEST(Coefficients, CorpusMatchesExtraction) {
  for (const CorpusEntry& e : lagrangian_corpus(12, 31)) {
    DynamicalForm F = euler_poisson(e.lagrangian);
    const int n = e.lagrangian.chart.n;
    Shape4 X = extract_shape4(F);
    Shape4 C = shape4_from_lagrangian(e.lagrangian);
    for (int k = 0; k < 5; ++k) {
      JetPoint p = sample(n, 4, derive_seed(32, k));
      for (std::size_t i = 0; i < X.M.data().size(); ++i) {
        EXPECT_LT(rel(evaluate(X.M.data()[i], p), evaluate(C.M.data()[i], p)), 1e-8) << e.name;
        EXPECT_LT(rel(evaluate(X.A.data()[i], p), evaluate(C.A.data()[i], p)), 1e-8) << e.name;
      }
      for (std::size_t i = 0; i < X.b.size(); ++i)
        EXPECT_LT(rel(evaluate(X.b[i], p), evaluate(C.b[i], p)), 1e-8) << e.name;
    }
  }
}

TEST(SelfAdjoint, Examples) {
  JetChart c(kP, 2, 1);
  JetPoint p = sample(2, 2, 7);
  ExprMatrix Psi(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) Psi(i, j) = Expr(0.0);
  ExprVector psi{Expr(0.0), Expr(0.0)};
  Psi(0, 1) = Expr(1.5);
  Psi(1, 0) = Expr(-1.5);
  auto r = selfadjoint_first_order_residuals(Psi, psi, p);
  for (double x : r.first) EXPECT_EQ(x, 0.0);
  for (double x : r.second) EXPECT_EQ(x, 0.0);

  Psi(0, 1) = Psi(1, 0) = Expr(0.0);
  psi = {P("x2", c), P("-x1", c)};
  r = selfadjoint_first_order_residuals(Psi, psi, p);
  double m = 0;
  for (double x : r.second) m = std::max(m, std::abs(x));
  EXPECT_DOUBLE_EQ(m, 1.0);
  r = selfadjoint_first_order_residuals(Psi, psi, p, {}, false);
  m = 0;
  for (double x : r.second) m = std::max(m, std::abs(x));
  EXPECT_DOUBLE_EQ(m, 2.0);

  psi = {Expr(0.0), Expr(0.0)};
  Psi(0, 1) = P("x1", c);
  Psi(1, 0) = P("-x1", c);
  r = selfadjoint_first_order_residuals(Psi, psi, p);
  m = 0;
  for (double x : r.first) m = std::max(m, std::abs(x));
  EXPECT_GT(m, 0.1);
}
