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

#include "varjet/symmetry.hpp"

#include <cmath>
#include <limits>

#include "varjet/error.hpp"

namespace varjet {

namespace {

constexpr ChartKind P = ChartKind::parametric;

Expr coord(int i, int r) { return Expr::coordinate({P, i + 1, r}); }

DiffOperator generator_operator(const Eigen::MatrixXd& omega, const Eigen::VectorXd& pi,
                                const Metric& g) {
  const int n = static_cast<int>(pi.size());
  auto dot = [&](int r) {
    Expr acc(0.0);
    for (int i = 0; i < n; ++i)
      if (pi(i) != 0.0) acc = acc + Expr(g.eta(i + 1) * pi(i)) * coord(i, r);
    return acc;
  };
  Expr px = dot(-1), pv = dot(0), pw = dot(1);
  const double g00 = g.eta(0);
  DiffOperator op;
  op.set_independent(P, -px);
  for (int j = 0; j < n; ++j) {
    Expr cx = Expr(g00 * pi(j)) * Expr::independent(P);
    Expr cv = Expr(g00 * pi(j)) + pv * coord(j, 0);
    Expr cw = Expr(2.0) * pv * coord(j, 1) + pw * coord(j, 0);
    for (int i = 0; i < n; ++i) {
      if (omega(i, j) == 0.0) continue;
      cx = cx + Expr(omega(i, j)) * coord(i, -1);
      cv = cv + Expr(omega(i, j)) * coord(i, 0);
      cw = cw + Expr(omega(i, j)) * coord(i, 1);
    }
    op.set({P, j + 1, -1}, cx);
    op.set({P, j + 1, 0}, cv);
    op.set({P, j + 1, 1}, cw);
  }
  return op;
}

std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> basis(int n) {
  std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd om = Eigen::MatrixXd::Zero(n, n);
      om(i, j) = 1.0;
      om(j, i) = -1.0;
      out.push_back({om, Eigen::VectorXd::Zero(n)});
    }
  for (int i = 0; i < n; ++i)
    out.push_back({Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Unit(n, i)});
  return out;
}

// Coordinates of a generator in the basis above.
std::vector<double> basis_weights(const Generator& G) {
  const int n = G.n();
  std::vector<double> w;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w.push_back(G.omega(i, j));
  for (int i = 0; i < n; ++i) w.push_back(G.pi(i));
  return w;
}

}  // namespace

Generator lorentz_generator(const Eigen::MatrixXd& omega, const Eigen::VectorXd& pi,
                            const Metric& metric) {
  const int n = static_cast<int>(pi.size());
  if (omega.rows() != n || omega.cols() != n)
    throw DomainError("omega must be " + std::to_string(n) + "x" + std::to_string(n));
  if (metric.dim() != n + 1)
    throw DomainError("metric dimension must be " + std::to_string(n + 1));
  double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("omega must be skew-symmetric");
  return Generator{omega, pi, metric, generator_operator(omega, pi, metric)};
}

Generator random_generator(int n, const Metric& metric, Rng& rng, double scale) {
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      om(i, j) = rng.uniform(-scale, scale);
      om(j, i) = -om(i, j);
    }
  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = rng.uniform(-scale, scale);
  return lorentz_generator(om, pi, metric);
}

SymmetryProbe::SymmetryProbe(const Shape3& S, const Metric& metric)
    : n_(S.A.n()), metric_(metric) {
  if (metric.dim() != n_ + 1)
    throw DomainError("metric dimension must be " + std::to_string(n_ + 1));
  ExprVector k = shape3_k(S);
  std::vector<Expr> roots(S.A.data());
  roots.insert(roots.end(), k.begin(), k.end());
  auto gens = basis(n_);
  basis_size_ = static_cast<int>(gens.size());
  for (const auto& [om, pi] : gens) {
    Derivation X(generator_operator(om, pi, metric));
    for (const Expr& e : S.A.data()) roots.push_back(X(e));
    for (const Expr& e : k) roots.push_back(X(e));
  }
  tape_ = Tape(roots);
}

SymmetryProbe::PointData SymmetryProbe::at(const JetPoint& p, const ConstantMap& consts) const {
  if (p.chart().kind != P || p.chart().n != n_ || p.chart().order < 2)
    throw ChartError("symmetry residuals need a parametric point of order >= 2 and dimension " +
                     std::to_string(n_));
  std::vector<double> vals = tape_.evaluate(p, consts);
  PointData d;
  d.point = p;
  std::size_t at = 0;
  auto matrix = [&]() {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = vals[at++];
    return m;
  };
  auto vector = [&]() {
    Eigen::VectorXd v(n_);
    for (int i = 0; i < n_; ++i) v(i) = vals[at++];
    return v;
  };
  d.A = matrix();
  d.k = vector();
  for (int b = 0; b < basis_size_; ++b) {
    d.XA.push_back(matrix());
    d.Xk.push_back(vector());
  }
  return d;
}

void SymmetryProbe::images(const PointData& d, const Generator& G, Eigen::MatrixXd& XA,
                           Eigen::VectorXd& Xk) const {
  if (G.n() != n_) throw DomainError("generator dimension differs from the shape");
  std::vector<double> w = basis_weights(G);
  XA = Eigen::MatrixXd::Zero(n_, n_);
  Xk = Eigen::VectorXd::Zero(n_);
  for (std::size_t b = 0; b < w.size(); ++b) {
    XA += w[b] * d.XA[b];
    Xk += w[b] * d.Xk[b];
  }
}

namespace {

struct Blocks {
  Eigen::MatrixXd rhs81, Pi, Xi;
  Eigen::VectorXd v, w;
};

Blocks blocks(const SymmetryProbe::PointData& d, const Generator& G, const Eigen::MatrixXd& XA,
              const Metric& g) {
  const int n = G.n();
  Blocks b;
  b.v = Eigen::Map<const Eigen::VectorXd>(d.point.block(0).data(), n);
  b.w = Eigen::Map<const Eigen::VectorXd>(d.point.block(1).data(), n);
  Eigen::VectorXd pil(n);
  for (int i = 0; i < n; ++i) pil(i) = g.eta(i + 1) * G.pi(i);
  double pv = pil.dot(b.v), pw = pil.dot(b.w);
  b.rhs81 = XA + 2.0 * pv * d.A + (d.A * b.v) * pil.transpose() - d.A * G.omega;
  b.Pi = 2.0 * (d.A * b.w) * pil.transpose() + pw * d.A;
  b.Xi = -d.k * pil.transpose();
  return b;
}

}  // namespace

SymmetryResidual SymmetryProbe::exact2d(const PointData& d, const Generator& G) const {
  if (n_ != 2) throw DomainError("the exact solve needs n = 2");
  if (d.A(0, 1) == 0.0 || !std::isfinite(d.A(0, 1)))
    throw SingularityError("A vanishes at the point");
  Eigen::MatrixXd XA;
  Eigen::VectorXd Xk;
  images(d, G, XA, Xk);
  Blocks b = blocks(d, G, XA, metric_);
  SymmetryResidual r;
  r.point = d.point;
  r.Phi = b.rhs81 * d.A.inverse();
  r.Pi = b.Pi;
  r.Xi = b.Xi;
  r.residual = r.Phi * d.k - r.Xi * b.v - r.Pi * b.w - Xk;
  return r;
}

LsqDefect SymmetryProbe::lsq(const PointData& d, const Generator& G) const {
  const int n = n_;
  Eigen::MatrixXd XA;
  Eigen::VectorXd Xk;
  images(d, G, XA, Xk);
  Blocks b = blocks(d, G, XA, metric_);
  // Unknowns: Phi, Xi, Pi, row major.
  const int nn = n * n;
  auto phi = [&](int i, int m) { return i * n + m; };
  auto xi = [&](int i, int m) { return nn + i * n + m; };
  auto pi = [&](int i, int m) { return 2 * nn + i * n + m; };
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3 * nn + n, 3 * nn);
  Eigen::VectorXd rhs(3 * nn + n);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++row) {
      for (int m = 0; m < n; ++m) M(row, phi(i, m)) = d.A(m, j);
      rhs(row) = b.rhs81(i, j);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++row) {
      M(row, pi(i, j)) = 1.0;
      rhs(row) = b.Pi(i, j);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++row) {
      M(row, xi(i, j)) = 1.0;
      rhs(row) = b.Xi(i, j);
    }
  for (int i = 0; i < n; ++i, ++row) {
    for (int m = 0; m < n; ++m) {
      M(row, phi(i, m)) = d.k(m);
      M(row, xi(i, m)) = -b.v(m);
      M(row, pi(i, m)) = -b.w(m);
    }
    rhs(row) = Xk(i);
  }
  Eigen::VectorXd z = M.completeOrthogonalDecomposition().solve(rhs);
  LsqDefect out;
  out.residual = M * z - rhs;
  out.defect = out.residual.norm();
  return out;
}

SymmetryResidual symmetry_residual_exact2d(const Shape3& S, const Generator& G,
                                           const JetPoint& p, const ConstantMap& consts) {
  SymmetryProbe probe(S, G.metric);
  return probe.exact2d(probe.at(p, consts), G);
}

LsqDefect symmetry_residual_lsq(const Shape3& S, const Generator& G, const JetPoint& p,
                                const ConstantMap& consts) {
  SymmetryProbe probe(S, G.metric);
  return probe.lsq(probe.at(p, consts), G);
}

std::map<std::string, double> appendix_pde_residuals(const Expr& a, const JetPoint& p,
                                                     const ConstantMap& consts) {
  if (p.chart().kind != P || p.chart().n != 2 || p.chart().order < 1)
    throw ChartError("appendix residuals need a parametric 2-dimensional point of order >= 1");
  Expr v1 = coord(0, 0), v2 = coord(1, 0);
  auto d1 = [](const Expr& e) { return partial(e, {P, 1, 0}); };
  auto d2 = [](const Expr& e) { return partial(e, {P, 2, 0}); };
  auto R = [&](const Expr& e) { return v1 * d2(e) - v2 * d1(e); };
  auto V = [&](const Expr& e) { return v1 * d1(e) + v2 * d2(e); };
  auto P1 = [&](const Expr& e) { return d1(e) - v1 * V(e); };
  auto P2 = [&](const Expr& e) { return d2(e) - v2 * V(e); };
  if (evaluate(a, p, consts) == 0.0) throw DomainError("a vanishes at the point");
  Expr a1 = d1(a), a2 = d2(a);
  Expr three_a = Expr(3.0) * a;
  Expr f = V(a) / a;
  std::vector<std::string> names{"rotation_1", "rotation_2", "boost_11",
                                 "boost_22",   "boost_21",   "boost_12"};
  std::vector<Expr> roots{
      R(a1) + a2 - a1 / a * R(a),
      R(a2) - a1 - a2 / a * R(a),
      P1(a1) - v1 * a1 - V(a) - a1 / a * P1(a) - three_a,
      P2(a2) - v2 * a2 - V(a) - a2 / a * P2(a) - three_a,
      P2(a1) - v2 * a1 - a1 / a * P2(a),
      P1(a2) - v1 * a2 - a2 / a * P1(a)};
  double y = p.value(1, 0) * p.value(1, 0) + p.value(2, 0) * p.value(2, 0);
  if (y > 0.0) {
    // f depends on y alone for radial a; along the ray V f = 2 y f'_y.
    names.push_back("f_equation");
    roots.push_back((Expr(1.0) - v1 * v1 - v2 * v2) * V(f) / (Expr(2.0) * (v1 * v1 + v2 * v2)) -
                    f - Expr(3.0));
  }
  std::vector<double> vals = evaluate(roots, p, consts);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = vals[i];
  return out;
}

double f_equation_residual(const Expr& f, double y, const ConstantMap& consts) {
  JetPoint p(JetChart(P, 1, 0), y);
  double fy = evaluate(partial_independent(f, P), p, consts);
  return (1.0 - y) * fy - evaluate(f, p, consts) - 3.0;
}

NogoResult nogo_certificate(const std::vector<double>& a, const std::vector<double>& v,
                            const Metric& metric, int trials, std::uint64_t seed) {
  if (metric.dim() != 3 || a.size() != 3 || v.size() != 3)
    throw DomainError("the certificate lives in a 3-dimensional block");
  Rng rng(seed);
  NogoResult out;
  out.trials = trials;
  out.certificate = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::vector<double> w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double aw = metric.dot(a, w);
    double sq = metric.dot(a, a) * metric.dot(w, w) - aw * aw;
    std::vector<double> vw = metric.cross(v, w);
    double triple = 0.0;
    for (int i = 0; i < 3; ++i) triple += a[static_cast<std::size_t>(i)] * vw[static_cast<std::size_t>(i)];
    double value = sq + triple * triple;
    if (value > out.certificate) {
      out.certificate = value;
      out.omega = w;
    }
  }
  if (trials <= 0) out.certificate = 0.0;
  return out;
}

}  // namespace varjet
