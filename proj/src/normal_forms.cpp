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

#include "varjet/normal_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "varjet/error.hpp"

namespace varjet {

namespace {

constexpr ChartKind P = ChartKind::parametric;

// Coordinates and truncated total derivatives on a parametric chart, with
// 0-based component indices.
class Calc {
 public:
  explicit Calc(int n)
      : n(n), Dx_(make_op(1)), Dv_(make_op(2)) {}

  int n;

  static Expr coord(int i, int r) { return Expr::coordinate({P, i + 1, r}); }
  static Expr x(int i) { return coord(i, -1); }
  static Expr v(int i) { return coord(i, 0); }
  static Expr w(int i) { return coord(i, 1); }

  static Expr d(const Expr& e, int i, int r) { return partial(e, {P, i + 1, r}); }
  static Expr dx(const Expr& e, int i) { return d(e, i, -1); }
  static Expr dv(const Expr& e, int i) { return d(e, i, 0); }
  static Expr dw(const Expr& e, int i) { return d(e, i, 1); }
  static Expr dt(const Expr& e) { return partial_independent(e, P); }

  Expr Dx(const Expr& e) { return Dx_(e); }
  Expr Dv(const Expr& e) { return Dv_(e); }
  Expr Dv(const Expr& e, int times) {
    Expr out = e;
    for (int k = 0; k < times; ++k) out = Dv_(out);
    return out;
  }

  std::size_t s2(int i, int j) const { return static_cast<std::size_t>(i * n + j); }
  std::size_t s3(int i, int j, int k) const {
    return static_cast<std::size_t>((i * n + j) * n + k);
  }

 private:
  DiffOperator make_op(int depth) const {
    DiffOperator op;
    op.set_independent(P, Expr(1.0));
    for (int i = 0; i < n; ++i) {
      op.set({P, i + 1, -1}, v(i));
      if (depth >= 2) op.set({P, i + 1, 0}, w(i));
    }
    return op;
  }

  Derivation Dx_;
  Derivation Dv_;
};

// Average of sign(p) f(p0, p1, p2) over the permutations of (i, j, k).
template <typename F>
Expr antisym3(int i, int j, int k, F f) {
  static const std::array<std::array<int, 4>, 6> perms{{{0, 1, 2, 1},
                                                        {1, 2, 0, 1},
                                                        {2, 0, 1, 1},
                                                        {1, 0, 2, -1},
                                                        {0, 2, 1, -1},
                                                        {2, 1, 0, -1}}};
  std::array<int, 3> idx{i, j, k};
  Expr acc(0.0);
  for (const auto& p : perms) {
    Expr term = f(idx[static_cast<std::size_t>(p[0])], idx[static_cast<std::size_t>(p[1])],
                  idx[static_cast<std::size_t>(p[2])]);
    acc = p[3] > 0 ? acc + term : acc - term;
  }
  return acc / Expr(6.0);
}

struct Check {
  std::string what;
  ExprVector exprs;
};

void run_checks(const DynamicalForm& F, const std::vector<Check>& checks, int order,
                const ExtractionOptions& opt) {
  std::vector<Expr> roots = F.components();
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (const Check& c : checks) {
    spans.push_back({roots.size(), roots.size() + c.exprs.size()});
    roots.insert(roots.end(), c.exprs.begin(), c.exprs.end());
  }
  Tape tape(roots);
  JetChart chart(P, F.chart().n, order);
  SampleRanges ranges = SampleRanges::admissible_parametric(order);
  for (int s = 0; s < opt.samples; ++s) {
    JetPoint p = sample_jetpoint(chart, ranges, derive_seed(opt.seed, static_cast<std::uint64_t>(s)));
    std::vector<double> vals = tape.evaluate(p, opt.consts);
    double scale = 1.0;
    for (int i = 0; i < F.size(); ++i) scale = std::max(scale, std::abs(vals[static_cast<std::size_t>(i)]));
    for (std::size_t c = 0; c < checks.size(); ++c)
      for (std::size_t k = spans[c].first; k < spans[c].second; ++k)
        if (!(std::abs(vals[k]) <= opt.tolerance * scale))
          throw NormalFormError("not in normal form: " + checks[c].what + " (sample " +
                                std::to_string(s) + ", residual " +
                                std::to_string(vals[k]) + ")");
  }
}

Bindings zero_bindings(int n, int from_order, int to_order) {
  Bindings b;
  for (int r = from_order; r <= to_order; ++r)
    for (int i = 0; i < n; ++i) b.coords[{P, i + 1, r}] = Expr(0.0);
  return b;
}

void require_parametric(const DynamicalForm& F) {
  if (F.chart().kind != P) throw ChartError("normal forms need a parametric chart");
}

}  // namespace

Shape3 extract_shape3(const DynamicalForm& F, const ExtractionOptions& opt) {
  require_parametric(F);
  if (F.order() > 3)
    throw NormalFormError("not in normal form: order " + std::to_string(F.order()) +
                          " exceeds 3");
  const int n = F.chart().n;
  Calc C(n);
  ExprMatrix A(n), Braw(n);
  ExprVector res(static_cast<std::size_t>(n));
  std::vector<Check> checks{{"nonlinear in v''", {}},
                            {"v''-coefficient depends on v'", {}},
                            {"v''-coefficient is not skew", {}},
                            {"remainder is not affine in v'", {}}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = C.d(F[i], j, 2);
  for (int i = 0; i < n; ++i) {
    Expr r = F[i];
    for (int j = 0; j < n; ++j) {
      r = r - A(i, j) * C.coord(j, 2);
      for (int k = 0; k < n; ++k) r = r - C.w(k) * C.dv(A(i, j), k) * C.w(j);
    }
    res[static_cast<std::size_t>(i)] = r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Braw(i, j) = C.dw(res[static_cast<std::size_t>(i)], j);
      checks[2].exprs.push_back(A(i, j) + A(j, i));
      for (int k = 0; k < n; ++k) {
        checks[0].exprs.push_back(C.d(A(i, j), k, 2));
        checks[1].exprs.push_back(C.dw(A(i, j), k));
        checks[3].exprs.push_back(C.dw(Braw(i, j), k));
        checks[3].exprs.push_back(C.d(Braw(i, j), k, 2));
      }
    }
  run_checks(F, checks, 3, opt);

  Bindings zero = zero_bindings(n, 1, 2);
  Shape3 S{JetChart(P, n, 1), ExprMatrix(n), ExprMatrix(n), ExprVector(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S.A(i, j) = substitute(A(i, j), zero, SubstitutionMode::partial);
      S.B(i, j) = substitute(Braw(i, j), zero, SubstitutionMode::partial);
    }
    S.c[static_cast<std::size_t>(i)] =
        substitute(res[static_cast<std::size_t>(i)], zero, SubstitutionMode::partial);
  }
  return S;
}

Shape4 extract_shape4(const DynamicalForm& F, const ExtractionOptions& opt) {
  require_parametric(F);
  if (F.order() > 4)
    throw NormalFormError("not in normal form: order " + std::to_string(F.order()) +
                          " exceeds 4");
  const int n = F.chart().n;
  Calc C(n);
  ExprMatrix M(n), Araw(n);
  ExprVector res(static_cast<std::size_t>(n));
  std::vector<Check> checks{{"nonlinear in w''", {}},
                            {"w''-coefficient depends on w'", {}},
                            {"w''-coefficient is not symmetric", {}},
                            {"remainder is not affine in w'", {}},
                            {"w'-coefficient is not skew", {}}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = C.d(F[i], j, 3);
  for (int i = 0; i < n; ++i) {
    Expr r = F[i];
    for (int j = 0; j < n; ++j) {
      r = r - M(i, j) * C.coord(j, 3);
      for (int k = 0; k < n; ++k) r = r - C.coord(k, 2) * C.dw(M(i, j), k) * C.coord(j, 2);
      r = r - Expr(2.0) * C.Dv(M(i, j)) * C.coord(j, 2);
    }
    res[static_cast<std::size_t>(i)] = r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Araw(i, j) = C.d(res[static_cast<std::size_t>(i)], j, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      checks[2].exprs.push_back(M(i, j) - M(j, i));
      checks[4].exprs.push_back(Araw(i, j) + Araw(j, i));
      for (int k = 0; k < n; ++k) {
        checks[0].exprs.push_back(C.d(M(i, j), k, 3));
        checks[1].exprs.push_back(C.d(M(i, j), k, 2));
        checks[3].exprs.push_back(C.d(Araw(i, j), k, 2));
        checks[3].exprs.push_back(C.d(Araw(i, j), k, 3));
      }
    }
  run_checks(F, checks, 4, opt);

  Bindings zero = zero_bindings(n, 2, 3);
  Shape4 S{JetChart(P, n, 2), ExprMatrix(n), ExprMatrix(n), ExprVector(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      S.M(i, j) = substitute(M(i, j), zero, SubstitutionMode::partial);
      S.A(i, j) = substitute(Araw(i, j), zero, SubstitutionMode::partial);
    }
    S.b[static_cast<std::size_t>(i)] =
        substitute(res[static_cast<std::size_t>(i)], zero, SubstitutionMode::partial);
  }
  return S;
}

ExprVector shape3_k(const Shape3& S) {
  const int n = S.A.n();
  ExprVector k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Expr acc = S.c[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      acc = acc + S.B(i, j) * Calc::w(j);
      for (int l = 0; l < n; ++l) acc = acc + Calc::w(l) * Calc::dv(S.A(i, j), l) * Calc::w(j);
    }
    k[static_cast<std::size_t>(i)] = acc;
  }
  return k;
}

ConditionSet::ConditionSet(std::vector<std::pair<std::string, ExprVector>> conditions)
    : conditions_(std::move(conditions)) {
  std::vector<Expr> roots;
  for (const auto& [name, es] : conditions_) roots.insert(roots.end(), es.begin(), es.end());
  tape_ = Tape(roots);
}

ConditionValues ConditionSet::evaluate(const JetPoint& p, const ConstantMap& consts) const {
  std::vector<double> vals = tape_.evaluate(p, consts);
  ConditionValues out;
  std::size_t at = 0;
  for (const auto& [name, es] : conditions_) {
    out[name] = std::vector<double>(vals.begin() + static_cast<std::ptrdiff_t>(at),
                                    vals.begin() + static_cast<std::ptrdiff_t>(at + es.size()));
    at += es.size();
  }
  return out;
}

const ExprVector& ConditionSet::operator[](const std::string& name) const {
  for (const auto& [n, es] : conditions_)
    if (n == name) return es;
  throw Error("no condition named '" + name + "'");
}

double max_abs(const ConditionValues& values) {
  double m = 0.0;
  for (const auto& [name, vs] : values)
    for (double v : vs) m = std::max(m, std::abs(v));
  return m;
}

ConditionSet shape3_conditions(const Shape3& S) {
  const int n = S.A.n();
  Calc C(n);
  const ExprMatrix& A = S.A;
  const ExprMatrix& B = S.B;
  const ExprVector& c = S.c;
  auto ci = [&](int i) { return c[static_cast<std::size_t>(i)]; };
  ExprVector i1(static_cast<std::size_t>(n * n * n)), ii(static_cast<std::size_t>(n * n)),
      iv(i1.size()), v(ii.size()), vi(i1.size()), vii(ii.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ii[C.s2(i, j)] = (B(i, j) - B(j, i)) - Expr(3.0) * C.Dx(A(i, j));
      v[C.s2(i, j)] = (C.dv(ci(j), i) + C.dv(ci(i), j)) / Expr(2.0) -
                      C.Dx(B(i, j) + B(j, i)) / Expr(2.0);
      Expr curl_v = C.dv(ci(j), i) - C.dv(ci(i), j);
      vii[C.s2(i, j)] = Expr(2.0) * (C.dx(ci(j), i) - C.dx(ci(i), j)) - C.Dx(curl_v) -
                        C.Dx(C.Dx(C.Dx(A(i, j))));
      for (int l = 0; l < n; ++l) {
        i1[C.s3(i, j, l)] = antisym3(i, j, l, [&](int a, int b, int d) { return C.dv(A(b, d), a); });
        iv[C.s3(i, j, l)] = (C.dv(B(j, l), i) - C.dv(B(i, l), j)) -
                            Expr(2.0) * (C.dx(A(j, l), i) - C.dx(A(i, l), j)) +
                            C.dx(A(i, j), l) + Expr(2.0) * C.Dx(C.dv(A(i, j), l));
        Expr dxA3 = antisym3(i, j, l, [&](int a, int b, int d) { return C.dx(A(b, d), a); });
        vi[C.s3(i, j, l)] = C.dv(curl_v, l) - Expr(2.0) * (C.dx(B(j, l), i) - C.dx(B(i, l), j)) +
                            C.Dx(C.Dx(C.dv(A(i, j), l))) + Expr(6.0) * C.Dx(dxA3);
      }
    }
  return ConditionSet({{"i'", i1}, {"ii'", ii}, {"iv'", iv}, {"v'", v}, {"vi'", vi}, {"vii", vii}});
}

namespace {

struct Shape4Trees {
  ExprVector wM, j, i, ii, jjj, iv, v, vi;
};

Shape4Trees shape4_trees(const Shape4& S, Calc& C) {
  const int n = S.M.n();
  const ExprMatrix& M = S.M;
  const ExprMatrix& A = S.A;
  auto b = [&](int i) { return S.b[static_cast<std::size_t>(i)]; };
  std::size_t n2 = static_cast<std::size_t>(n * n), n3 = n2 * static_cast<std::size_t>(n);
  Shape4Trees T{ExprVector(n3), ExprVector(n3), ExprVector(n3), ExprVector(n2),
                ExprVector(n3), ExprVector(n3), ExprVector(n2), ExprVector(n2)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T.ii[C.s2(i, j)] = (C.dw(b(j), i) - C.dw(b(i), j)) + Expr(3.0) * C.Dv(A(i, j));
      T.v[C.s2(i, j)] = (C.dv(b(j), i) + C.dv(b(i), j)) / Expr(2.0) -
                        C.Dv((C.dw(b(j), i) + C.dw(b(i), j)) / Expr(2.0)) + C.Dv(M(i, j), 3);
      T.vi[C.s2(i, j)] = Expr(2.0) * (C.dx(b(j), i) - C.dx(b(i), j)) -
                         C.Dv(C.dv(b(j), i) - C.dv(b(i), j)) - C.Dv(A(i, j), 3);
      for (int k = 0; k < n; ++k) {
        std::size_t s = C.s3(i, j, k);
        T.wM[s] = (C.dw(M(j, k), i) - C.dw(M(i, k), j)) / Expr(2.0);
        T.j[s] = C.dw(A(j, k), i) + (C.dv(M(k, i), j) - C.dv(M(j, i), k));
        T.i[s] = antisym3(i, j, k, [&](int a, int bb, int d) { return C.dv(A(bb, d), a); });
        T.jjj[s] = C.dw(C.dw(b(k), j), i) + (C.dv(A(j, k), i) + C.dv(A(i, k), j)) -
                   (C.dx(M(i, j), k) + C.dx(M(j, k), i) + C.dx(M(i, k), j)) +
                   C.Dv(C.dv(M(i, j), k)) - Expr(2.0) * C.Dv(C.dv(M(j, k), i) + C.dv(M(i, k), j)) -
                   C.Dv(C.dw(M(j, k), i), 2);
        T.iv[s] = C.dw(C.dv(b(j), i) - C.dv(b(i), j), k) -
                  Expr(2.0) * (C.dx(A(j, k), i) - C.dx(A(i, k), j)) + C.dx(A(i, j), k) +
                  Expr(2.0) * C.Dv(C.dv(A(i, j), k)) -
                  Expr(2.0) * C.Dv(C.dx(M(j, k), i) - C.dx(M(i, k), j)) -
                  C.Dv(C.dv(M(j, k), i) - C.dv(M(i, k), j), 2);
      }
    }
  return T;
}

}  // namespace

ConditionSet shape4_conditions(const Shape4& S) {
  const int n = S.M.n();
  Calc C(n);
  Shape4Trees T = shape4_trees(S, C);
  ExprVector identity(T.iv.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        identity[C.s3(i, j, k)] = C.dw(T.v[C.s2(i, j)], k) - T.iv[C.s3(k, i, j)] +
                                  Expr(2.0) * T.iv[C.s3(i, k, j)] - C.dw(T.ii[C.s2(i, j)], k) +
                                  Expr(2.0) * C.dv(T.ii[C.s2(i, k)], j);
  return ConditionSet({{"wM", T.wM},
                       {"j", T.j},
                       {"i", T.i},
                       {"ii", T.ii},
                       {"jjj", T.jjj},
                       {"iv", T.iv},
                       {"v", T.v},
                       {"vi", T.vi},
                       {"identity", identity}});
}

ConditionValues shape3_condition_residuals(const Shape3& S, const JetPoint& p,
                                           const ConstantMap& consts) {
  return shape3_conditions(S).evaluate(p, consts);
}

ConditionValues shape4_condition_residuals(const Shape4& S, const JetPoint& p,
                                           const ConstantMap& consts) {
  return shape4_conditions(S).evaluate(p, consts);
}

namespace {

void require_order2(const LagrangianDef& L) {
  if (L.chart.kind != P) throw ChartError("normal forms need a parametric lagrangian");
  if (L.order > 2) throw UnsupportedOrderError("coefficients need a lagrangian of order <= 2");
}

}  // namespace

Shape4 shape4_from_lagrangian(const LagrangianDef& L) {
  require_order2(L);
  const int n = L.chart.n;
  Calc C(n);
  Shape4 S{JetChart(P, n, 2), ExprMatrix(n), ExprMatrix(n), ExprVector(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    Expr Lw = C.dw(L.expr, i);
    for (int j = 0; j < n; ++j) {
      S.M(i, j) = C.dw(Lw, j);
      S.A(i, j) = C.dv(Lw, j) - C.dv(C.dw(L.expr, j), i);
    }
    S.b[static_cast<std::size_t>(i)] =
        C.dx(L.expr, i) - C.Dv(C.dv(L.expr, i)) + C.Dv(Lw, 2);
  }
  return S;
}

Shape3 shape3_from_lagrangian(const LagrangianDef& L) {
  require_order2(L);
  const int n = L.chart.n;
  Calc C(n);
  Bindings zero = zero_bindings(n, 1, 1);
  ExprVector alpha(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    alpha[static_cast<std::size_t>(i)] =
        substitute(C.dw(L.expr, i), zero, SubstitutionMode::partial);
  Expr beta = substitute(L.expr, zero, SubstitutionMode::partial);
  auto al = [&](int i) { return alpha[static_cast<std::size_t>(i)]; };
  Shape3 S{JetChart(P, n, 1), ExprMatrix(n), ExprMatrix(n), ExprVector(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      S.A(i, k) = C.dv(al(i), k) - C.dv(al(k), i);
      Expr B = C.dx(al(i), k) + C.dx(al(k), i) + Expr(2.0) * C.dt(C.dv(al(i), k)) -
               C.dt(C.dv(al(k), i)) - C.dv(C.dv(beta, i), k);
      for (int l = 0; l < n; ++l)
        B = B + C.v(l) * (Expr(2.0) * C.dx(C.dv(al(i), k), l) - C.dx(C.dv(al(k), i), l));
      S.B(i, k) = B;
    }
    Expr c = C.dx(beta, i) - C.dt(C.dv(beta, i)) + C.dt(C.dt(al(i)));
    for (int l = 0; l < n; ++l) {
      c = c - C.v(l) * C.dx(C.dv(beta, i), l) + Expr(2.0) * C.v(l) * C.dt(C.dx(al(i), l));
      for (int k = 0; k < n; ++k) c = c + C.v(k) * C.v(l) * C.dx(C.dx(al(i), k), l);
    }
    S.c[static_cast<std::size_t>(i)] = c;
  }
  return S;
}

std::variant<Shape3, Shape4> coefficients_from_lagrangian(const LagrangianDef& L,
                                                          ShapeTarget target) {
  if (target == ShapeTarget::shape3) return shape3_from_lagrangian(L);
  return shape4_from_lagrangian(L);
}

SelfAdjointResiduals selfadjoint_first_order_residuals(const ExprMatrix& Psi,
                                                       const ExprVector& psi,
                                                       const JetPoint& p,
                                                       const ConstantMap& consts,
                                                       bool normalized) {
  const int n = Psi.n();
  if (static_cast<int>(psi.size()) != n) throw ArityError("psi and Psi sizes differ");
  Calc C(n);
  Expr half(normalized ? 0.5 : 1.0);
  ExprVector first(static_cast<std::size_t>(n * n * n)), second(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      second[C.s2(i, j)] =
          half * (C.dx(psi[static_cast<std::size_t>(j)], i) - C.dx(psi[static_cast<std::size_t>(i)], j)) +
          C.dt(Psi(i, j));
      for (int k = 0; k < n; ++k)
        first[C.s3(i, j, k)] =
            half * (C.dx(Psi(j, k), i) - C.dx(Psi(i, k), j)) + C.dx(Psi(i, j), k);
    }
  std::vector<Expr> roots = first;
  roots.insert(roots.end(), second.begin(), second.end());
  std::vector<double> vals = evaluate(roots, p, consts);
  SelfAdjointResiduals out;
  out.first.assign(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(first.size()));
  out.second.assign(vals.begin() + static_cast<std::ptrdiff_t>(first.size()), vals.end());
  return out;
}

}  // namespace varjet
