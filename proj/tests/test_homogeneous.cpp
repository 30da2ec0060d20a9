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
#include "varjet/homogeneous.hpp"
#include "varjet/top_model.hpp"
#include "varjet/variational.hpp"

using namespace varjet;
using varjet::testing::P;

namespace {

const ChartKind kP = ChartKind::parametric;
const ChartKind kH = ChartKind::homogeneous;

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

JetPoint hsample(int n, int order, std::uint64_t seed) {
  JetChart c(kH, n, order);
  SampleRanges r = SampleRanges::admissible_homogeneous(order);
  return sample_jetpoint(c, r, seed);
}

}  // namespace

TEST(ProjectJet, IdentityParametrization) {
  JetPoint p = hsample(2, 3, 1);
  p.set(0, 0, 1.0);
  p.set(0, 1, 0.0);
  p.set(0, 2, 0.0);
  JetPoint q = project_jet(p, 3);
  EXPECT_EQ(q.t_value(), p.value(0, -1));
  for (int i = 1; i <= 2; ++i) {
    EXPECT_EQ(q.value(i, -1), p.value(i, -1));
    for (int r = 0; r < 3; ++r) EXPECT_DOUBLE_EQ(q.value(i, r), p.value(i, r));
  }
}

TEST(ProjectJet, ChainRuleExample) {
  JetPoint p = prolong_curve(kH, {Polynomial({0, 1, 0.5}), Polynomial({0, 1})}, 0.0, 3);
  JetPoint q = project_jet(p, 3);
  EXPECT_DOUBLE_EQ(q.value(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(q.value(1, 1), -1.0);
  EXPECT_DOUBLE_EQ(q.value(1, 2), 3.0);
  // same curve with zeta = 2 tau
  Polynomial tau2({0, 2});
  JetPoint p2 = prolong_curve(
      kH, {Polynomial({0, 1, 0.5}).compose(tau2), Polynomial({0, 1}).compose(tau2)}, 0.0, 3);
  JetPoint q2 = project_jet(p2, 3);
  for (int r = 0; r < 3; ++r) EXPECT_DOUBLE_EQ(q2.value(1, r), q.value(1, r));
}

TEST(ProjectJet, ReparametrizationInvariance) {
  Rng rng(3);
  for (int k = 0; k < 40; ++k) {
    // t(s) with positive derivative near s0, x^i arbitrary cubic polynomials
    std::vector<Polynomial> curve{Polynomial({rng.uniform(-1, 1), rng.uniform(1, 2),
                                              rng.uniform(-0.3, 0.3), rng.uniform(-0.1, 0.1)})};
    for (int i = 0; i < 2; ++i)
      curve.push_back(Polynomial({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-1, 1)}));
    // s = phi(sigma) with phi' > 0
    Polynomial phi({rng.uniform(-0.1, 0.1), rng.uniform(0.5, 2), rng.uniform(-0.3, 0.3),
                    rng.uniform(-0.2, 0.2)});
    std::vector<Polynomial> moved;
    for (const Polynomial& c : curve) moved.push_back(c.compose(phi));
    JetPoint a = project_jet(prolong_curve(kH, moved, 0.0, 3), 3);
    JetPoint b = project_jet(prolong_curve(kH, curve, phi(0.0), 3), 3);
    EXPECT_NEAR(a.t_value(), b.t_value(), 1e-14);
    for (std::size_t i = 0; i < a.raw().size(); ++i) EXPECT_LT(rel(a.raw()[i], b.raw()[i]), 1e-12);
  }
}

TEST(ProjectJet, Errors) {
  JetPoint p = hsample(2, 3, 2);
  p.set(0, 0, 0.0);
  EXPECT_THROW(project_jet(p, 2), SingularityError);
  EXPECT_THROW(project_jet(hsample(2, 4, 2), 4), UnsupportedOrderError);
  EXPECT_THROW(project_jet(JetPoint(JetChart(kP, 2, 2)), 1), ChartError);
}

TEST(LiftLagrangian, Examples) {
  JetChart c(kP, 2, 1);
  JetPoint p = hsample(2, 1, 5);
  EXPECT_DOUBLE_EQ(evaluate(lift_lagrangian(LagrangianDef(c, Expr(1.0))).expr, p), p.value(0, 0));
  EXPECT_NEAR(evaluate(lift_lagrangian(LagrangianDef(c, P("v1", c))).expr, p), p.value(1, 0), 1e-15);
  EXPECT_THROW(lift_lagrangian(LagrangianDef(JetChart(kP, 1, 3), P("v1''", JetChart(kP, 1, 3)))),
               UnsupportedOrderError);
}

TEST(LiftLagrangian, TopLagrangianLiftsToFamilyMember) {
  TopModel top = build_top_model(std::nullopt);
  Tape lifted({lift_lagrangian(top.model.lagrangian("L1")).expr});
  Tape direct({top.model.lagrangian("LH1").expr});
  for (int k = 0; k < 50; ++k) {
    JetPoint p = hsample(2, 2, derive_seed(6, k));
    ConstantMap mu{{"mu", 0.6 + 0.02 * k}};
    EXPECT_LT(rel(lifted.evaluate(p, mu)[0], direct.evaluate(p, mu)[0]), 1e-10);
  }
}

TEST(LiftLagrangian, LiftsSatisfyZermelo) {
  auto corpus = lagrangian_corpus(18, 3);
  for (const CorpusEntry& e : corpus) {
    LagrangianDef H = lift_lagrangian(e.lagrangian);
    for (int k = 0; k < 5; ++k) {
      auto [z1, z2] = zermelo_residuals(H, hsample(e.lagrangian.chart.n, 2, derive_seed(7, k)));
      EXPECT_LT(std::abs(z1), 1e-10) << e.name;
      EXPECT_LT(std::abs(z2), 1e-10) << e.name;
    }
  }
}

TEST(LiftEquation, Examples) {
  JetChart c(kP, 2, 1);
  JetChart hc(kH, 2, 1);
  JetPoint p(hc);
  p.set(0, 0, 2.0);
  p.set(1, 0, 1.0);
  auto zero = lift_equation(DynamicalForm(c, {Expr(0.0), Expr(0.0)}), p);
  EXPECT_EQ(zero, (std::vector<double>{0, 0, 0}));
  auto e = lift_equation(DynamicalForm(c, {Expr(1.0), Expr(0.0)}), p);
  EXPECT_DOUBLE_EQ(e[0], -1.0);
  EXPECT_DOUBLE_EQ(e[1], 2.0);
  EXPECT_DOUBLE_EQ(e[2], 0.0);
}

TEST(LiftEquation, TopEquationLiftsToHomogeneousForm) {
  TopModel top = build_top_model(1.3);
  const ConstantMap consts = top.model.fixed_constants();
  Tape hom(top.model.form("HOM").components());
  Tape form(lift_equation_form(top.model.form("E10")).components());
  for (int k = 0; k < 50; ++k) {
    JetPoint p = hsample(2, 3, derive_seed(8, k));
    auto a = lift_equation(top.model.form("E10"), p, consts);
    auto b = hom.evaluate(p, consts);
    auto f = form.evaluate(p, consts);
    double contraction = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_LT(rel(a[i], b[i]), 1e-9);
      EXPECT_LT(rel(a[i], f[i]), 1e-12);
      contraction += p.value(static_cast<int>(i), 0) * a[i];
    }
    EXPECT_LT(std::abs(contraction), 1e-12);
  }
}

TEST(LiftEquation, CommutesWithEulerPoisson) {
  auto corpus = lagrangian_corpus(18, 5);
  for (const CorpusEntry& e : corpus) {
    if (!e.affine_in_w) continue;
    DynamicalForm E = euler_poisson(e.lagrangian);
    Tape lifted(euler_poisson(lift_lagrangian(e.lagrangian)).components());
    for (int k = 0; k < 5; ++k) {
      JetPoint p = hsample(e.lagrangian.chart.n, 4, derive_seed(9, k));
      auto a = lifted.evaluate(p);
      auto b = lift_equation(E, p);
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(rel(a[i], b[i]), 1e-9) << e.name;
    }
  }
}

TEST(ProjectionBindings, MatchProjectJet) {
  Bindings b = projection_bindings(2, 3);
  TopModel top = build_top_model(0.9);
  for (const Expr& comp : top.model.form("E10").components()) {
    Expr lifted = substitute(comp, b);
    for (int k = 0; k < 10; ++k) {
      JetPoint p = hsample(2, 3, derive_seed(11, k));
      EXPECT_LT(rel(evaluate(lifted, p, {{"mu", 0.9}}),
                    evaluate(comp, project_jet(p, 3), {{"mu", 0.9}})),
                1e-12);
    }
  }
}
