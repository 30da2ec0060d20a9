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
#include <sstream>

#include "test_util.hpp"
#include "varjet/error.hpp"
#include "varjet/homogeneous.hpp"
#include "varjet/model.hpp"
#include "varjet/top_model.hpp"
#include "varjet/variational.hpp"

using namespace varjet;
using varjet::testing::model_path;

namespace {

const ChartKind kP = ChartKind::parametric;
const ChartKind kH = ChartKind::homogeneous;

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

JetPoint psample(int order, std::uint64_t seed) {
  return sample_jetpoint(JetChart(kP, 2, order), SampleRanges::admissible_parametric(order), seed);
}
JetPoint hsample(int order, std::uint64_t seed) {
  return sample_jetpoint(JetChart(kH, 2, order), SampleRanges::admissible_homogeneous(order), seed);
}

std::vector<double> e10_at(const std::array<double, 2>& v, const std::array<double, 2>& vp,
                           const std::array<double, 2>& vpp, double mu) {
  static const TopModel top = build_top_model(std::nullopt);
  JetPoint p(JetChart(kP, 2, 3));
  for (int i = 0; i < 2; ++i) {
    p.set(i + 1, 0, v[static_cast<std::size_t>(i)]);
    p.set(i + 1, 1, vp[static_cast<std::size_t>(i)]);
    p.set(i + 1, 2, vpp[static_cast<std::size_t>(i)]);
  }
  return evaluate(top.model.form("E10").components(), p, {{"mu", mu}});
}

TopConfig drift_config(double h, int steps) {
  TopConfig cfg;
  cfg.mu = 4.0;
  cfg.h = h;
  cfg.steps = steps;
  cfg.record_every = steps;
  cfg.parametric.v = {0.3, 0.1};
  cfg.parametric.vp = {2.0, -1.5};
  return cfg;
}

}  // namespace

TEST(TopModel, ModelFileMatchesBuiltModel) {
  Model file = load_model(model_path("top2d.model"));
  TopModel built = build_top_model(std::nullopt);
  EXPECT_EQ(file.metric, built.model.metric);
  for (const auto& [name, F] : built.model.forms) {
    ASSERT_TRUE(file.has_form(name)) << name;
    Tape a(F.components()), b(file.form(name).components());
    JetChart c = F.chart();
    for (int k = 0; k < 30; ++k) {
      JetPoint p = c.kind == kP ? psample(c.order, derive_seed(1, k)) : hsample(c.order, derive_seed(1, k));
      ConstantMap mu{{"mu", 0.5 + 0.05 * k}};
      auto x = a.evaluate(p, mu), y = b.evaluate(p, mu);
      for (std::size_t i = 0; i < x.size(); ++i) EXPECT_LT(rel(x[i], y[i]), 1e-13) << name;
    }
  }
  for (const auto& [name, L] : built.model.lagrangians) {
    ASSERT_TRUE(file.has_lagrangian(name)) << name;
    JetChart c = L.chart;
    for (int k = 0; k < 30; ++k) {
      JetPoint p = c.kind == kP ? psample(c.order, derive_seed(2, k)) : hsample(c.order, derive_seed(2, k));
      ConstantMap mu{{"mu", 0.5 + 0.05 * k}};
      EXPECT_LT(rel(evaluate(L.expr, p, mu), evaluate(file.lagrangian(name).expr, p, mu)), 1e-13) << name;
    }
  }
}

TEST(TopModel, UniformMotionSolvesTheEquation) {
  auto e = e10_at({0.3, -0.4}, {0, 0}, {0, 0}, 1.7);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[1], 0.0);
}

TEST(TopModel, HomogeneousEquationIsMinusMomentumDerivative) {
  TopModel top = build_top_model(std::nullopt);
  Tape hom(top.model.form("HOM").components());
  ExprVector dp;
  for (const Expr& p : top.momentum) dp.push_back(-total_derivative(p));
  Tape minus_dp(dp);
  for (int k = 0; k < 50; ++k) {
    JetPoint p = hsample(3, derive_seed(3, k));
    ConstantMap mu{{"mu", 0.3 + 0.04 * k}};
    auto a = hom.evaluate(p, mu), b = minus_dp.evaluate(p, mu);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(a[i], b[i]), 1e-10);
  }
}

TEST(TopModel, HomogeneousFamilyReproducesTheEquation) {
  TopModel top = build_top_model(1.3);
  Tape hom(top.model.form("HOM").components());
  const ConstantMap fixed = top.model.fixed_constants();
  for (const char* name : {"LH0", "LH1", "LH2"}) {
    Tape el(euler_poisson(top.model.lagrangian(name)).components());
    for (int k = 0; k < 20; ++k) {
      JetPoint p = hsample(4, derive_seed(4, k));
      auto a = el.evaluate(p, fixed), b = hom.evaluate(p, fixed);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(a[i], b[i]), 1e-9) << name;
    }
  }
}

TEST(TopModel, CyclicFramePermutation) {
  Metric g = top_default_metric();
  Metric shifted({g.eta(1), g.eta(2), g.eta(0)}, g.orientation());
  TopModel a = build_top_model(1.1, g), b = build_top_model(1.1, shifted);
  for (int k = 0; k < 20; ++k) {
    JetPoint p = hsample(2, derive_seed(5, k));
    JetPoint q(p.chart());
    for (int r = -1; r < 2; ++r)
      for (int i = 0; i < 3; ++i) q.set(i, r, p.value((i + 1) % 3, r));
    for (int m = 0; m < 3; ++m) {
      double lhs = evaluate(a.model.lagrangian("LH" + std::to_string((m + 1) % 3)).expr, p, {{"mu", 1.1}});
      double rhs = evaluate(b.model.lagrangian("LH" + std::to_string(m)).expr, q, {{"mu", 1.1}});
      EXPECT_LT(rel(lhs, rhs), 1e-13);
    }
  }
}

TEST(TopModel, OrientationCalibration) {
  EXPECT_EQ(calibrate_orientation(), -1);
  EXPECT_EQ(top_default_metric().orientation(), -1);
  EXPECT_EQ(top_default_metric().signature(), "+--");
}

TEST(TopModel, OppositeOrientationStaysConsistent) {
  Metric g = top_default_metric().with_orientation(1);
  TopModel top = build_top_model(0.9, g);
  Tape e10(top.model.form("E10").components());
  Tape el(euler_poisson(top.model.lagrangian("L1")).components());
  Tape hom(top.model.form("HOM").components());
  Tape elh(euler_poisson(top.model.lagrangian("LH0")).components());
  const ConstantMap fixed = top.model.fixed_constants();
  for (int k = 0; k < 10; ++k) {
    JetPoint p = psample(4, derive_seed(6, k));
    auto a = e10.evaluate(p, fixed), b = el.evaluate(p, fixed);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(rel(a[i], b[i]), 1e-9);
    JetPoint q = hsample(4, derive_seed(7, k));
    auto c = hom.evaluate(q, fixed), d = elh.evaluate(q, fixed);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(c[i], d[i]), 1e-9);
  }
}

TEST(TopModel, RejectsBadInput) {
  EXPECT_THROW(build_top_model(std::nan("")), DomainError);
  EXPECT_THROW(build_top_model(1.0, Metric::minkowski(4)), DomainError);
  EXPECT_THROW(mp_planar_form(Expr(1.0), 0.0, -1.0), DomainError);
}

TEST(MpPlanar, ProportionalToHomogeneousEquation) {
  TopModel top = build_top_model(std::nullopt);
  Tape hom(top.model.form("HOM").components());
  for (double eta3 : {-1.0, 1.0}) {
    const double m0 = 1.7, sigma3 = 0.8;
    Tape mp(mp_planar_form(Expr(m0), sigma3, eta3).components());
    ConstantMap mu{{"mu", m0 / (eta3 * sigma3)}};
    for (int k = 0; k < 50; ++k) {
      JetPoint p = hsample(3, derive_seed(8, k));
      auto a = mp.evaluate(p, mu), b = hom.evaluate(p, mu);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(a[i], -eta3 * sigma3 * b[i]), 1e-9);
    }
  }
}

TEST(MpPlanar, DegenerateMotions) {
  Tape mp(mp_planar_form(Expr(1.2), 0.7, -1.0).components());
  Tape pure(mp_planar_form(Expr(0.0), 0.7, -1.0).components());
  for (int k = 0; k < 10; ++k) {
    JetPoint p = hsample(3, derive_seed(9, k));
    JetPoint q = p;
    for (int i = 0; i < 3; ++i) {
      q.set(i, 1, 0.4 * p.value(i, 0));
      q.set(i, 2, 0.0);
    }
    for (double x : mp.evaluate(q)) EXPECT_NEAR(x, 0.0, 1e-14);
    auto e = pure.evaluate(p);
    double c = 0;
    for (int i = 0; i < 3; ++i) c += p.value(i, 0) * e[static_cast<std::size_t>(i)];
    EXPECT_NEAR(c, 0.0, 1e-12);
  }
}

TEST(Momentum, RestFrame) {
  auto p = conserved_momentum({1, 0, 0}, {0, 0, 0}, 1.7);
  EXPECT_DOUBLE_EQ(p[0], 1.7);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
  EXPECT_DOUBLE_EQ(p[2], 0.0);
  EXPECT_THROW(conserved_momentum({0.1, 1, 0}, {0, 0, 0}, 1.0), DomainError);
}

TEST(Momentum, ScaleInvariant) {
  Rng rng(10);
  for (int k = 0; k < 20; ++k) {
    JetPoint p = hsample(2, derive_seed(11, k));
    double lambda = rng.uniform(0.2, 5);
    std::vector<double> u = p.block(0), ud = p.block(1), su = u, sud = ud;
    for (std::size_t i = 0; i < 3; ++i) {
      su[i] *= lambda;
      sud[i] *= lambda * lambda;
    }
    auto a = conserved_momentum(u, ud, 1.3), b = conserved_momentum(su, sud, 1.3);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(a[i], b[i]), 1e-13);
  }
}

TEST(Momentum, MatchesExpressions) {
  TopModel top = build_top_model(std::nullopt);
  Tape t(top.momentum);
  for (int k = 0; k < 10; ++k) {
    JetPoint p = hsample(2, derive_seed(12, k));
    auto a = t.evaluate(p, {{"mu", 0.6}});
    auto b = conserved_momentum(p.block(0), p.block(1), 0.6);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(a[i], b[i]), 1e-14);
  }
}

TEST(Acceleration, RestIsRest) {
  auto a = solve_acceleration_parametric({0.2, 0.5}, {0, 0}, 1.4);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
}

TEST(Acceleration, SolvesTheEquation) {
  for (int k = 0; k < 100; ++k) {
    JetPoint p = psample(2, derive_seed(13, k));
    std::array<double, 2> v{p.value(1, 0), p.value(2, 0)}, vp{p.value(1, 1), p.value(2, 1)};
    double mu = 0.5 + 0.02 * k;
    auto vpp = solve_acceleration_parametric(v, vp, mu);
    for (double e : e10_at(v, vp, vpp, mu)) EXPECT_LT(std::abs(e), 1e-12);
  }
  EXPECT_THROW(solve_acceleration_parametric({0.8, 0.8}, {0, 0}, 1.0), DomainError);
}

TEST(Acceleration, RegressionPin) {
  auto a = solve_acceleration_parametric({0.3, 0.1}, {0.2, -0.4}, 1.0);
  EXPECT_NEAR(a[0], -0.37133333333333333, 1e-14);
  EXPECT_NEAR(a[1], -0.15933333333333333, 1e-14);
  // the equation is affine in v'': E(a) = E(0) + M a
  auto e0 = e10_at({0.3, 0.1}, {0.2, -0.4}, {0, 0}, 1.0);
  auto e1 = e10_at({0.3, 0.1}, {0.2, -0.4}, {1, 0}, 1.0);
  auto e2 = e10_at({0.3, 0.1}, {0.2, -0.4}, {0, 1}, 1.0);
  double m00 = e1[0] - e0[0], m10 = e1[1] - e0[1], m01 = e2[0] - e0[0], m11 = e2[1] - e0[1];
  double det = m00 * m11 - m01 * m10;
  double x = (-e0[0] * m11 + e0[1] * m01) / det, y = (-e0[1] * m00 + e0[0] * m10) / det;
  EXPECT_NEAR(a[0], x, 1e-13);
  EXPECT_NEAR(a[1], y, 1e-13);
}

TEST(Integration, StraightLine) {
  TopConfig cfg;
  cfg.mu = 2.0;
  cfg.parametric.v = {0.4, -0.2};
  cfg.steps = 2000;
  Trajectory tr = integrate_parametric(cfg);
  ASSERT_FALSE(tr.halted);
  const auto& last = tr.samples.back().state;
  EXPECT_LT(std::abs(last[3] - 0.4), 1e-12);
  EXPECT_LT(std::abs(last[4] + 0.2), 1e-12);
  EXPECT_NEAR(last[1], 0.4 * 2.0, 1e-12);
  EXPECT_EQ(tr.samples.size(), 2001u);
}

TEST(Integration, MomentumDriftAndFourthOrder) {
  Trajectory coarse = integrate_parametric(drift_config(1e-3, 10000));
  Trajectory fine = integrate_parametric(drift_config(5e-4, 20000));
  ASSERT_FALSE(coarse.halted);
  EXPECT_LT(coarse.max_p_drift, 1e-6);
  EXPECT_NEAR(coarse.max_p_drift / fine.max_p_drift, 16.0, 4.0);
  EXPECT_EQ(coarse.samples.size(), 2u);
}

TEST(Integration, HaltsOutsideTheAdmissibleRegion) {
  TopConfig cfg;
  cfg.mu = 0.1;
  cfg.h = 1e-2;
  cfg.steps = 5000;
  cfg.parametric.v = {0.9, 0.0};
  cfg.parametric.vp = {3.0, 0.0};
  Trajectory tr = integrate_parametric(cfg);
  EXPECT_TRUE(tr.halted);
  EXPECT_FALSE(tr.halt_reason.empty());
  EXPECT_LT(tr.samples.size(), 5001u);
  for (std::size_t i = 1; i < tr.samples.size(); ++i)
    EXPECT_GT(tr.samples[i].param, tr.samples[i - 1].param);
}

TEST(Integration, HomogeneousGeodesic) {
  TopConfig cfg;
  cfg.mu = 1.0;
  cfg.steps = 500;
  cfg.homogeneous.u = {1.0, 0.2, 0.1};
  Trajectory tr = integrate_homogeneous(cfg);
  ASSERT_FALSE(tr.halted);
  const auto& s = tr.samples.back().state;
  EXPECT_LT(std::abs(s[4] - 1.0) + std::abs(s[5] - 0.2) + std::abs(s[6] - 0.1), 1e-12);
}

TEST(Integration, HomogeneousMatchesParametric) {
  TopConfig cfg = drift_config(1e-3, 3000);
  cfg.record_every = 1;
  Trajectory par = integrate_parametric(cfg);
  cfg.homogeneous = homogeneous_from_parametric(cfg.parametric);
  cfg.steps = 2000;
  Trajectory hom = integrate_homogeneous(cfg);
  ASSERT_FALSE(par.halted);
  ASSERT_FALSE(hom.halted);
  EXPECT_LT(hom.max_uu_drift, 1e-8);
  EXPECT_LT(hom.max_p_drift, 1e-6);
  const double h = cfg.h;
  double worst = 0.0;
  for (const TrajectorySample& s : hom.samples) {
    JetPoint p(JetChart(kH, 2, 2));
    for (int a = 0; a < 3; ++a) {
      p.set(a, -1, s.state[static_cast<std::size_t>(1 + a)]);
      p.set(a, 0, s.state[static_cast<std::size_t>(4 + a)]);
      p.set(a, 1, s.state[static_cast<std::size_t>(7 + a)]);
    }
    JetPoint q = project_jet(p, 2);
    double t = q.t_value();
    auto idx = static_cast<std::size_t>(std::floor(t / h));
    if (idx + 1 >= par.samples.size()) break;
    const auto& a = par.samples[idx].state;
    const auto& b = par.samples[idx + 1].state;
    // cubic Hermite on [t_a, t_b] for x (derivative v) and v (derivative v')
    double tau = (t - a[0]) / h;
    double h00 = 2 * tau * tau * tau - 3 * tau * tau + 1, h10 = tau * tau * tau - 2 * tau * tau + tau;
    double h01 = -2 * tau * tau * tau + 3 * tau * tau, h11 = tau * tau * tau - tau * tau;
    for (int i = 0; i < 2; ++i) {
      std::size_t xi = static_cast<std::size_t>(1 + i), vi = xi + 2, wi = xi + 4;
      double x = h00 * a[xi] + h10 * h * a[vi] + h01 * b[xi] + h11 * h * b[vi];
      double v = h00 * a[vi] + h10 * h * a[wi] + h01 * b[vi] + h11 * h * b[wi];
      worst = std::max({worst, std::abs(x - q.value(i + 1, -1)), std::abs(v - q.value(i + 1, 0))});
    }
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Integration, HomogeneousStateIsNormalized) {
  ParametricState s;
  s.t = 0.5;
  s.x = {0.1, -0.2};
  s.v = {0.3, 0.4};
  s.vp = {-1.0, 0.7};
  HomogeneousState h = homogeneous_from_parametric(s);
  Metric g = top_default_metric();
  std::vector<double> u(h.u.begin(), h.u.end()), ud(h.ud.begin(), h.ud.end());
  EXPECT_NEAR(g.dot(u, u), 1.0, 1e-15);
  EXPECT_NEAR(g.dot(u, ud), 0.0, 1e-15);
  EXPECT_EQ(h.X[0], 0.5);
  EXPECT_NEAR(u[1] / u[0], 0.3, 1e-15);
}

TEST(Trajectory, CsvLayout) {
  TopConfig cfg;
  cfg.steps = 10;
  cfg.record_every = 5;
  cfg.parametric.v = {0.1, 0.1};
  cfg.parametric.vp = {0.5, 0.0};
  std::ostringstream out;
  write_trajectory_csv(integrate_parametric(cfg), out);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x1,x2,v1,v2,vprime1,vprime2,p0,p1,p2,uu_drift,p_drift");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
  }
  EXPECT_EQ(rows, 3);
  cfg.homogeneous = homogeneous_from_parametric(cfg.parametric);
  std::ostringstream hout;
  write_trajectory_csv(integrate_homogeneous(cfg), hout);
  EXPECT_EQ(hout.str().substr(0, 6), "param,");
}
