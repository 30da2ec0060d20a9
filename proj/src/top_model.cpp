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

#include "varjet/top_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "varjet/error.hpp"
#include "varjet/variational.hpp"

namespace varjet {

namespace {

constexpr ChartKind P = ChartKind::parametric;
constexpr ChartKind H = ChartKind::homogeneous;

Expr pc(int i, int r) { return Expr::coordinate({P, i, r}); }
Expr hc(int a, int r) { return Expr::coordinate({H, a, r}); }

Expr three_halves(const Expr& e) { return Expr::pow(e, Exponent{3, 2}); }
Expr five_halves(const Expr& e) { return Expr::pow(e, Exponent{5, 2}); }

// Spatial inner product of parametric blocks of orders r and q.
Expr pdot(const Metric& g, int r, int q) {
  return Expr(g.eta(1)) * pc(1, r) * pc(1, q) + Expr(g.eta(2)) * pc(2, r) * pc(2, q);
}

Expr hdot(const Metric& g, int r, int q) {
  Expr acc(0.0);
  for (int a = 0; a < 3; ++a) acc = acc + Expr(g.eta(a)) * hc(a, r) * hc(a, q);
  return acc;
}

// (*a)_i = eps_{0ij} a^j for the parametric block of order r.
Expr pstar(const Metric& g, int i, int r) {
  int j = i == 1 ? 2 : 1;
  return Expr(g.epsilon_lower({0, i, j})) * pc(j, r);
}

// (a x b)_alpha for homogeneous blocks of orders r and q.
Expr hcross(const Metric& g, int al, int r, int q) {
  Expr acc(0.0);
  for (int be = 0; be < 3; ++be)
    for (int ga = 0; ga < 3; ++ga) {
      double e = g.epsilon_lower({al, be, ga});
      if (e != 0.0) acc = acc + Expr(e) * hc(be, r) * hc(ga, q);
    }
  return acc;
}

DynamicalForm e10_form(const Metric& g, const Expr& mu) {
  Expr s2 = Expr(static_cast<double>(g.eta(0))) + pdot(g, 0, 0);
  Expr vw = pdot(g, 0, 1);
  Expr s3 = three_halves(s2), s5 = five_halves(s2);
  ExprVector E;
  for (int i = 1; i <= 2; ++i) {
    Expr bracket = s2 * Expr(g.eta(i)) * pc(i, 1) - vw * Expr(g.eta(i)) * pc(i, 0);
    E.push_back(-pstar(g, i, 2) / s3 + Expr(3.0) * pstar(g, i, 1) * vw / s5 -
                mu / s3 * bracket);
  }
  return DynamicalForm(JetChart(P, 2, 3), E);
}

DynamicalForm hom_form(const Metric& g, const Expr& mu) {
  Expr uu = hdot(g, 0, 0), udu = hdot(g, 1, 0);
  Expr nu = Expr::sqrt(uu);
  Expr n3 = three_halves(uu), n5 = five_halves(uu);
  ExprVector E;
  for (int a = 0; a < 3; ++a) {
    Expr bracket = uu * Expr(g.eta(a)) * hc(a, 1) - udu * Expr(g.eta(a)) * hc(a, 0);
    E.push_back(-hcross(g, a, 2, 0) / n3 + Expr(3.0) * hcross(g, a, 1, 0) * udu / n5 -
                mu / n3 * bracket);
  }
  return DynamicalForm(JetChart(H, 2, 3), E);
}

ExprVector momentum_exprs(const Metric& g, const Expr& mu) {
  Expr uu = hdot(g, 0, 0);
  Expr nu = Expr::sqrt(uu);
  ExprVector p;
  for (int a = 0; a < 3; ++a)
    p.push_back(hcross(g, a, 1, 0) / three_halves(uu) + mu * Expr(g.eta(a)) * hc(a, 0) / nu);
  return p;
}

// Spin term of LH_k: u_k (ud_{k+2} u_{k+1} - ud_{k+1} u_{k+2}) / (||u|| q_k),
// q_k = eta_{k+1} u_{k+1}^2 + eta_{k+2} u_{k+2}^2, indices mod 3.
Expr homogeneous_lagrangian(const Metric& g, const Expr& mu, int k, double sign) {
  int a = (k + 1) % 3, b = (k + 2) % 3;
  Expr nu = Expr::sqrt(hdot(g, 0, 0));
  Expr q = Expr(g.eta(a)) * hc(a, 0) * hc(a, 0) + Expr(g.eta(b)) * hc(b, 0) * hc(b, 0);
  Expr spin = hc(k, 0) * (hc(b, 1) * hc(a, 0) - hc(a, 1) * hc(b, 0)) / (nu * q);
  return Expr(sign) * spin + mu * nu;
}

Expr parametric_lagrangian(const Metric& g, const Expr& mu, int which, double sign) {
  Expr s = Expr::sqrt(Expr(static_cast<double>(g.eta(0))) + pdot(g, 0, 0));
  Expr g00(static_cast<double>(g.eta(0)));
  Expr spin = which == 1
                  ? -pc(2, 1) * pc(1, 0) / (s * (g00 + Expr(g.eta(2)) * pc(2, 0) * pc(2, 0)))
                  : pc(1, 1) * pc(2, 0) / (s * (g00 + Expr(g.eta(1)) * pc(1, 0) * pc(1, 0)));
  return Expr(sign) * spin + mu * s;
}

void check_metric(const Metric& g) {
  if (g.dim() != 3) throw DomainError("the planar top needs a 3-dimensional metric");
}

}  // namespace

Metric top_default_metric() { return Metric({1, -1, -1}, -1); }

TopModel build_top_model(std::optional<double> mu, const Metric& metric) {
  check_metric(metric);
  if (mu && !std::isfinite(*mu)) throw DomainError("mu must be finite");
  Expr m = Expr::constant("mu");
  // The Lagrangians below carry eps_012 = -1; the spin terms follow the
  // orientation so that every identity holds for either choice.
  double sign = -metric.orientation();
  TopModel top;
  Model& M = top.model;
  M.chart = JetChart(P, 2, 3);
  M.metric = metric;
  M.constants["mu"] = mu;
  M.forms["E10"] = e10_form(metric, m);
  M.forms["HOM"] = hom_form(metric, m);
  M.forms["MPPLANAR"] = mp_planar_form(m, -1.0, -1.0, metric);
  JetChart pch(P, 2, 3), hch(H, 2, 3);
  M.lagrangians["L1"] = LagrangianDef(pch, parametric_lagrangian(metric, m, 1, sign));
  M.lagrangians["L2"] = LagrangianDef(pch, parametric_lagrangian(metric, m, 2, sign));
  for (int k = 0; k < 3; ++k)
    M.lagrangians["LH" + std::to_string(k)] =
        LagrangianDef(hch, homogeneous_lagrangian(metric, m, k, sign));
  top.momentum = momentum_exprs(metric, m);
  return top;
}

int calibrate_orientation(const Metric& metric, int samples, std::uint64_t seed) {
  check_metric(metric);
  Expr m = Expr::constant("mu");
  ConstantMap consts{{"mu", 1.3}};
  JetChart hch(H, 2, 4);
  SampleRanges ranges = SampleRanges::admissible_homogeneous(4);
  DynamicalForm el = euler_poisson(LagrangianDef(hch, homogeneous_lagrangian(metric, m, 0, 1.0)));
  int found = 0;
  for (int s : {1, -1}) {
    Tape hom(hom_form(metric.with_orientation(s), m).components());
    Tape lag(el.components());
    bool ok = true;
    for (int k = 0; k < samples && ok; ++k) {
      JetPoint p = sample_jetpoint(hch, ranges, derive_seed(seed, static_cast<std::uint64_t>(k)));
      auto a = hom.evaluate(p, consts), b = lag.evaluate(p, consts);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::abs(a[i]))) ok = false;
    }
    if (ok) {
      if (found != 0) throw Error("orientation is not determined by the Lagrangian");
      found = s;
    }
  }
  if (found == 0) throw Error("no orientation reproduces the homogeneous equation");
  return found;
}

DynamicalForm mp_planar_form(const Expr& m0, double sigma3, double eta3, const Metric& g) {
  check_metric(g);
  if (sigma3 == 0.0) throw DomainError("sigma3 must be nonzero");
  Expr uu = hdot(g, 0, 0), udu = hdot(g, 1, 0);
  Expr n3 = three_halves(uu), n5 = five_halves(uu);
  Expr es(eta3 * sigma3);
  ExprVector E;
  for (int a = 0; a < 3; ++a) {
    Expr bracket = uu * Expr(g.eta(a)) * hc(a, 1) - udu * Expr(g.eta(a)) * hc(a, 0);
    E.push_back(es * (hcross(g, a, 2, 0) / n3 - Expr(3.0) * udu * hcross(g, a, 1, 0) / n5) +
                m0 / n3 * bracket);
  }
  return DynamicalForm(JetChart(H, 2, 3), E);
}

std::vector<double> conserved_momentum(const std::vector<double>& u,
                                       const std::vector<double>& udot, double mu,
                                       const Metric& metric) {
  check_metric(metric);
  double uu = metric.dot(u, u);
  if (!(uu > 0.0)) throw DomainError("u is not timelike");
  double nu = std::sqrt(uu);
  std::vector<double> c = metric.cross(udot, u), low = metric.lower(u);
  std::vector<double> p(3);
  for (std::size_t a = 0; a < 3; ++a) p[a] = c[a] / (uu * nu) + mu * low[a] / nu;
  return p;
}

std::array<double, 2> solve_acceleration_parametric(const std::array<double, 2>& v,
                                                    const std::array<double, 2>& vp, double mu,
                                                    const Metric& g) {
  check_metric(g);
  const double e1 = g.eta(1), e2 = g.eta(2);
  double s2 = g.eta(0) + e1 * v[0] * v[0] + e2 * v[1] * v[1];
  if (!(s2 > 0.0)) throw DomainError("state is not timelike: g00 + v.v <= 0");
  double vw = e1 * v[0] * vp[0] + e2 * v[1] * vp[1];
  double eps = g.epsilon_lower({0, 1, 2});
  // *a = eps (a^2, -a^1); E = 0 gives *v'' = R below.
  std::array<double, 2> star_w{eps * vp[1], -eps * vp[0]};
  std::array<double, 2> eta{e1, e2};
  std::array<double, 2> R{};
  for (std::size_t i = 0; i < 2; ++i)
    R[i] = 3.0 * star_w[i] * vw / s2 - mu * (s2 * eta[i] * vp[i] - vw * eta[i] * v[i]);
  return {-eps * R[1], eps * R[0]};
}

HomogeneousState homogeneous_from_parametric(const ParametricState& s, const Metric& g) {
  check_metric(g);
  double s2 = g.eta(0) + g.eta(1) * s.v[0] * s.v[0] + g.eta(2) * s.v[1] * s.v[1];
  if (!(s2 > 0.0)) throw DomainError("state is not timelike: g00 + v.v <= 0");
  double sq = std::sqrt(s2);
  double vw = g.eta(1) * s.v[0] * s.vp[0] + g.eta(2) * s.v[1] * s.vp[1];
  HomogeneousState h;
  h.zeta = 0.0;
  h.X = {s.t, s.x[0], s.x[1]};
  std::array<double, 3> dir{1.0, s.v[0], s.v[1]};
  std::array<double, 3> ddir{0.0, s.vp[0], s.vp[1]};
  for (std::size_t a = 0; a < 3; ++a) {
    h.u[a] = dir[a] / sq;
    // d/dzeta = (1/sq) d/dt along the curve.
    h.ud[a] = (ddir[a] / sq - dir[a] * vw / (s2 * sq)) / sq;
  }
  return h;
}

namespace {

using Vec = Eigen::VectorXd;

template <typename F>
Vec rk4_step(const Vec& y, double h, F f) {
  Vec k1 = f(y);
  Vec k2 = f(y + 0.5 * h * k1);
  Vec k3 = f(y + 0.5 * h * k2);
  Vec k4 = f(y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void check_config(const TopConfig& cfg) {
  check_metric(cfg.metric);
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw DomainError("step h must be positive");
  if (cfg.steps < 0) throw DomainError("steps must be nonnegative");
  if (cfg.record_every < 1) throw DomainError("record_every must be >= 1");
}

constexpr double kGuard = 0.05;

}  // namespace

Trajectory integrate_parametric(const TopConfig& cfg) {
  check_config(cfg);
  const Metric& g = cfg.metric;
  auto s2_of = [&](double v1, double v2) {
    return g.eta(0) + g.eta(1) * v1 * v1 + g.eta(2) * v2 * v2;
  };
  const ParametricState& s0 = cfg.parametric;
  if (!(s2_of(s0.v[0], s0.v[1]) >= kGuard))
    throw DomainError("initial state outside the admissible region g00 + v.v >= 0.05");
  Vec y(6);
  y << s0.x[0], s0.x[1], s0.v[0], s0.v[1], s0.vp[0], s0.vp[1];
  auto rhs = [&](const Vec& s) {
    auto a = solve_acceleration_parametric({s(2), s(3)}, {s(4), s(5)}, cfg.mu, g);
    Vec d(6);
    d << s(2), s(3), s(4), s(5), a[0], a[1];
    return d;
  };
  auto momentum = [&](const Vec& s) {
    return conserved_momentum({1.0, s(2), s(3)}, {0.0, s(4), s(5)}, cfg.mu, g);
  };
  Trajectory tr;
  tr.kind = P;
  std::vector<double> p0 = momentum(y);
  auto record = [&](double t, const Vec& s) {
    TrajectorySample smp;
    smp.param = t;
    smp.state = {t, s(0), s(1), s(2), s(3), s(4), s(5)};
    smp.momentum = momentum(s);
    smp.p_drift = max_diff(smp.momentum, p0);
    tr.max_p_drift = std::max(tr.max_p_drift, smp.p_drift);
    tr.samples.push_back(std::move(smp));
  };
  record(s0.t, y);
  int last = 0;
  for (int k = 1; k <= cfg.steps; ++k) {
    Vec next;
    try {
      next = rk4_step(y, cfg.h, rhs);
    } catch (const DomainError& e) {
      tr.halted = true;
      tr.halt_reason = e.what();
      break;
    }
    if (!next.allFinite() || !(s2_of(next(2), next(3)) >= kGuard)) {
      tr.halted = true;
      tr.halt_reason = "left the admissible region g00 + v.v >= 0.05 at step " + std::to_string(k);
      break;
    }
    y = next;
    last = k;
    if (k % cfg.record_every == 0 || k == cfg.steps) record(s0.t + k * cfg.h, y);
  }
  if (tr.halted && last % cfg.record_every != 0) record(s0.t + last * cfg.h, y);
  return tr;
}

Trajectory integrate_homogeneous(const TopConfig& cfg) {
  check_config(cfg);
  const Metric& g = cfg.metric;
  auto dot = [&](const Vec& a, const Vec& b) {
    return g.eta(0) * a(0) * b(0) + g.eta(1) * a(1) * b(1) + g.eta(2) * a(2) * b(2);
  };
  auto vec = [](const Vec& s, int off) {
    return std::vector<double>{s(off), s(off + 1), s(off + 2)};
  };
  const HomogeneousState& s0 = cfg.homogeneous;
  Vec y(9);
  y << s0.X[0], s0.X[1], s0.X[2], s0.u[0], s0.u[1], s0.u[2], s0.ud[0], s0.ud[1], s0.ud[2];
  if (!(dot(y.segment(3, 3), y.segment(3, 3)) >= kGuard))
    throw DomainError("initial state outside the admissible region u.u >= 0.05");
  auto rhs = [&](const Vec& s) {
    Vec u = s.segment(3, 3), ud = s.segment(6, 3);
    double uu = dot(u, u), udu = dot(ud, u);
    if (!(uu > 0.0)) throw DomainError("u is not timelike");
    std::vector<double> c = g.cross(vec(s, 6), vec(s, 3));
    // (udd x u) = r, with C udd = udd x u.
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, 3);
    Eigen::VectorXd r(4);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b)
        for (int cc = 0; cc < 3; ++cc) {
          double e = g.epsilon_lower({a, b, cc});
          if (e != 0.0) C(a, b) += e * u(cc);
        }
      double bracket = uu * g.eta(a) * ud(a) - udu * g.eta(a) * u(a);
      r(a) = 3.0 * c[static_cast<std::size_t>(a)] * udu / uu - cfg.mu * bracket;
    }
    for (int b = 0; b < 3; ++b) C(3, b) = g.eta(b) * u(b);
    r(3) = -dot(ud, ud);
    Vec udd = C.colPivHouseholderQr().solve(r);
    Vec d(9);
    d << u, ud, udd;
    return d;
  };
  auto momentum = [&](const Vec& s) { return conserved_momentum(vec(s, 3), vec(s, 6), cfg.mu, g); };
  Trajectory tr;
  tr.kind = H;
  std::vector<double> p0 = momentum(y);
  const double uu0 = dot(y.segment(3, 3), y.segment(3, 3));
  auto record = [&](double z, const Vec& s) {
    TrajectorySample smp;
    smp.param = z;
    smp.state.push_back(z);
    for (int i = 0; i < 9; ++i) smp.state.push_back(s(i));
    smp.momentum = momentum(s);
    smp.p_drift = max_diff(smp.momentum, p0);
    smp.uu_drift = std::abs(dot(s.segment(3, 3), s.segment(3, 3)) - uu0);
    tr.max_p_drift = std::max(tr.max_p_drift, smp.p_drift);
    tr.max_uu_drift = std::max(tr.max_uu_drift, smp.uu_drift);
    tr.samples.push_back(std::move(smp));
  };
  record(s0.zeta, y);
  int last = 0;
  for (int k = 1; k <= cfg.steps; ++k) {
    Vec next;
    try {
      next = rk4_step(y, cfg.h, rhs);
    } catch (const DomainError& e) {
      tr.halted = true;
      tr.halt_reason = e.what();
      break;
    }
    if (!next.allFinite() || !(dot(next.segment(3, 3), next.segment(3, 3)) >= kGuard)) {
      tr.halted = true;
      tr.halt_reason = "left the admissible region u.u >= 0.05 at step " + std::to_string(k);
      break;
    }
    y = next;
    last = k;
    if (k % cfg.record_every == 0 || k == cfg.steps) record(s0.zeta + k * cfg.h, y);
  }
  if (tr.halted && last % cfg.record_every != 0) record(s0.zeta + last * cfg.h, y);
  return tr;
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& out) {
  if (tr.kind == P)
    out << "t,x1,x2,v1,v2,vprime1,vprime2";
  else
    out << "param,x0,x1,x2,u0,u1,u2,udot0,udot1,udot2";
  out << ",p0,p1,p2,uu_drift,p_drift\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const TrajectorySample& s : tr.samples) {
    put(s.param);
    for (std::size_t i = 1; i < s.state.size(); ++i) {
      out << ',';
      put(s.state[i]);
    }
    for (double p : s.momentum) {
      out << ',';
      put(p);
    }
    out << ',';
    put(s.uu_drift);
    out << ',';
    put(s.p_drift);
    out << '\n';
  }
}

}  // namespace varjet
