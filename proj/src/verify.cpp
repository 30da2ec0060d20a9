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

#include "varjet/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <cmath>
#include <functional>
#include <string>

#include "varjet/corpus.hpp"
#include "varjet/error.hpp"
#include "varjet/homogeneous.hpp"
#include "varjet/normal_forms.hpp"
#include "varjet/symmetry.hpp"
#include "varjet/top_model.hpp"
#include "varjet/variational.hpp"

namespace varjet {

namespace {

constexpr ChartKind P = ChartKind::parametric;
constexpr ChartKind H = ChartKind::homogeneous;
constexpr double kMu = 1.3;

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, rel(a[i], b[i]));
  return m;
}

double max_abs_vec(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

ReportPart upper(const std::string& name, double value, double bound) {
  return {name, value, bound, false};
}

ReportPart lower(const std::string& name, double value, double bound) {
  return {name, value, bound, true};
}

struct Sampler {
  std::uint64_t base;
  JetPoint operator()(const JetChart& chart, const SampleRanges& ranges, int k) const {
    return sample_jetpoint(chart, ranges, derive_seed(base, static_cast<std::uint64_t>(k)));
  }
};

Sampler sampler(std::uint64_t seed, int criterion, int stream = 0) {
  return {derive_seed(derive_seed(seed, static_cast<std::uint64_t>(criterion)),
                      static_cast<std::uint64_t>(stream))};
}

Report with_mu(Report r) {
  r.notes.push_back({"mu", "1.3"});
  return r;
}

Report criterion1(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  HelmholtzSystem sys(top.model.form("E10"));
  JetChart chart(P, 2, 6);
  SampleRanges ranges = SampleRanges::admissible_parametric(6);
  Sampler s = sampler(o.seed, 1);
  const ConstantMap consts = top.model.fixed_constants();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) worst = std::max(worst, sys.evaluate(s(chart, ranges, k), consts).max_relative());
  return with_mu(combine_parts("criterion_01_helmholtz_E10", o.seed, 100,
                               {upper("max_relative_residual", worst, 1e-9)}));
}

Report criterion2(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  const Model& m = top.model;
  const ConstantMap consts = m.fixed_constants();
  const LagrangianDef& L1 = m.lagrangian("L1");
  const LagrangianDef& L2 = m.lagrangian("L2");
  Tape e10(m.form("E10").components());
  Tape el1(euler_poisson(L1).components());
  Tape el2(euler_poisson(L2).components());
  LagrangianDef mean(L1.chart, (L1.expr + L2.expr) / Expr(2.0));
  Tape elm(euler_poisson(mean).components());
  JetChart chart(P, 2, 4);
  SampleRanges ranges = SampleRanges::admissible_parametric(4);
  Sampler s = sampler(o.seed, 2);
  double d1 = 0, d2 = 0, dm = 0;
  for (int k = 0; k < 50; ++k) {
    JetPoint p = s(chart, ranges, k);
    auto e = e10.evaluate(p, consts);
    d1 = std::max(d1, max_rel(el1.evaluate(p, consts), e));
    d2 = std::max(d2, max_rel(el2.evaluate(p, consts), e));
    dm = std::max(dm, max_rel(elm.evaluate(p, consts), e));
  }
  return with_mu(combine_parts("criterion_02_two_lagrangians", o.seed, 50,
                               {upper("L1_vs_E10_rel", d1, 1e-9), upper("L2_vs_E10_rel", d2, 1e-9),
                                upper("mean_vs_E10_rel", dm, 1e-9)}));
}

Report criterion3(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  const ConstantMap consts = top.model.fixed_constants();
  JetChart chart(H, 2, 3);
  SampleRanges ranges = SampleRanges::admissible_homogeneous(3);
  Sampler s = sampler(o.seed, 3);
  std::vector<ReportPart> parts;
  for (const char* name : {"LH0", "LH1", "LH2"}) {
    auto [z1, z2] = zermelo_expressions(top.model.lagrangian(name));
    Tape tape({z1, z2});
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) worst = std::max(worst, max_abs_vec(tape.evaluate(s(chart, ranges, k), consts)));
    parts.push_back(upper(std::string(name) + "_zermelo_abs", worst, 1e-10));
  }
  Expr u0 = Expr::coordinate({H, 0, 0});
  LagrangianDef sq(JetChart(H, 2, 1), u0 * u0);
  auto [z1, z2] = zermelo_expressions(sq);
  double gap = 0.0;
  for (int k = 0; k < 50; ++k) {
    JetPoint p = s(chart, ranges, k);
    gap = std::max(gap, std::abs(evaluate(z1, p) - evaluate(sq.expr, p)));
  }
  parts.push_back(upper("degree2_Z1_minus_L", gap, 0.0));
  return with_mu(combine_parts("criterion_03_zermelo", o.seed, 50, std::move(parts)));
}

Report criterion4(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  const Model& m = top.model;
  const ConstantMap consts = m.fixed_constants();
  const DynamicalForm& e10 = m.form("E10");
  Tape hom(m.form("HOM").components());
  Tape lifted_l(std::vector<Expr>{lift_lagrangian(m.lagrangian("L1")).expr});
  Tape lh1(std::vector<Expr>{m.lagrangian("LH1").expr});
  JetChart chart(H, 2, 3);
  SampleRanges ranges = SampleRanges::admissible_homogeneous(3);
  Sampler s = sampler(o.seed, 4);
  double de = 0, dl = 0, contraction = 0;
  for (int k = 0; k < 50; ++k) {
    JetPoint p = s(chart, ranges, k);
    auto lifted = lift_equation(e10, p, consts);
    auto h = hom.evaluate(p, consts);
    de = std::max(de, max_rel(lifted, h));
    dl = std::max(dl, max_rel(lifted_l.evaluate(p, consts), lh1.evaluate(p, consts)));
    double c1 = 0, c2 = 0;
    for (int a = 0; a < 3; ++a) {
      c1 += p.value(a, 0) * lifted[static_cast<std::size_t>(a)];
      c2 += p.value(a, 0) * h[static_cast<std::size_t>(a)];
    }
    contraction = std::max({contraction, std::abs(c1), std::abs(c2)});
  }
  return with_mu(combine_parts("criterion_04_homogeneous_coherence", o.seed, 50,
                               {upper("lift_E10_vs_HOM_rel", de, 1e-9),
                                upper("lift_L1_vs_LH1_rel", dl, 1e-9),
                                upper("contraction_abs", contraction, 1e-12)}));
}

Report criterion5(const AcceptanceOptions& o) {
  auto start = std::chrono::steady_clock::now();
  TopModel top = build_top_model(kMu);
  const ConstantMap consts = top.model.fixed_constants();
  Tape hom(top.model.form("HOM").components());
  ExprVector dp;
  for (const Expr& p : top.momentum) dp.push_back(-total_derivative(p));
  Tape minus_dp(dp);
  JetChart chart(H, 2, 3);
  SampleRanges ranges = SampleRanges::admissible_homogeneous(3);
  Sampler s = sampler(o.seed, 5);
  double law = 0.0;
  for (int k = 0; k < 50; ++k) {
    JetPoint p = s(chart, ranges, k);
    law = std::max(law, max_rel(hom.evaluate(p, consts), minus_dp.evaluate(p, consts)));
  }
  TopConfig cfg;
  cfg.mu = 4.0;
  cfg.h = 1e-3;
  cfg.steps = 10000;
  cfg.record_every = 10000;
  cfg.parametric.v = {0.3, 0.1};
  cfg.parametric.vp = {2.0, -1.5};
  Trajectory coarse = integrate_parametric(cfg);
  cfg.h = 5e-4;
  cfg.steps = 20000;
  cfg.record_every = 20000;
  Trajectory fine = integrate_parametric(cfg);
  double ratio = coarse.max_p_drift / fine.max_p_drift;
  std::vector<ReportPart> parts{upper("momentum_law_rel", law, 1e-10),
                                upper("drift_h1e-3", coarse.max_p_drift, 1e-6),
                                upper("richardson_ratio_minus_16", std::abs(ratio - 16.0), 4.0),
                                upper("halted", coarse.halted || fine.halted ? 1.0 : 0.0, 0.0)};
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.timing) parts.push_back(upper("runtime_s", elapsed, 5.0));
  Report r = combine_parts("criterion_05_momentum_law", o.seed, 50, std::move(parts));
  r.notes.push_back({"mu_law", "1.3"});
  r.notes.push_back({"integration", "mu=4 v0=(0.3,0.1) vp0=(2,-1.5) T=10"});
  return r;
}

Report criterion6(const AcceptanceOptions& o) {
  TopModel top = build_top_model(std::nullopt);
  Tape hom(top.model.form("HOM").components());
  JetChart chart(H, 2, 3);
  SampleRanges ranges = SampleRanges::admissible_homogeneous(3);
  Sampler s = sampler(o.seed, 6);
  struct Case {
    double m0, sigma3, eta3;
  };
  const Case cases[] = {{1.7, 0.8, -1.0}, {0.9, -1.3, -1.0}, {2.1, 0.6, 1.0}};
  double worst = 0.0;
  int count = 0;
  for (const Case& c : cases) {
    Tape mp(mp_planar_form(Expr(c.m0), c.sigma3, c.eta3).components());
    ConstantMap consts{{"mu", c.m0 / (c.eta3 * c.sigma3)}};
    double factor = -c.eta3 * c.sigma3;
    for (int k = 0; k < 50; ++k, ++count) {
      JetPoint p = s(chart, ranges, count);
      auto a = mp.evaluate(p, consts), h = hom.evaluate(p, consts);
      for (double& x : h) x *= factor;
      worst = std::max(worst, max_rel(a, h));
    }
  }
  return combine_parts("criterion_06_mp_equivalence", o.seed, 50,
                       {upper("mp_vs_scaled_HOM_rel", worst, 1e-9)});
}

Report criterion7(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  const ConstantMap consts = top.model.fixed_constants();
  ExtractionOptions eo;
  eo.seed = derive_seed(o.seed, 7);
  eo.consts = consts;
  Shape3 S = extract_shape3(top.model.form("E10"), eo);
  Tape coeffs([&] {
    std::vector<Expr> r(S.A.data());
    r.insert(r.end(), S.B.data().begin(), S.B.data().end());
    return r;
  }());
  JetChart chart(P, 2, 2);
  SampleRanges ranges = SampleRanges::admissible_parametric(2);
  Sampler s = sampler(o.seed, 7);
  JetPoint origin(chart);
  auto at0 = coeffs.evaluate(origin, consts);
  const double a0 = at0[1];
  const Metric g = top_default_metric();
  // B(0) = -const g, so const = -B_11(0) / g_11.
  const double fitted = -at0[4] / g.eta(1);
  double skew = 0, prop = 0, bform = 0;
  for (int k = 0; k < 50; ++k) {
    JetPoint p = s(chart, ranges, k);
    auto c = coeffs.evaluate(p, consts);
    double v1 = p.value(1, 0), v2 = p.value(2, 0);
    double y = v1 * v1 + v2 * v2;
    skew = std::max({skew, std::abs(c[0]), std::abs(c[3]), std::abs(c[1] + c[2])});
    if (k < 30) prop = std::max(prop, rel(c[1], a0 * std::pow(1.0 - y, -1.5)));
    double vl[2] = {g.eta(1) * v1, g.eta(2) * v2};
    double vv = g.eta(1) * v1 * v1 + g.eta(2) * v2 * v2;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double gij = i == j ? g.eta(i + 1) : 0.0;
        double closed = fitted * std::pow(1.0 + vv, -1.5) * (vl[i] * vl[j] - (1.0 + vv) * gij);
        bform = std::max(bform, rel(c[static_cast<std::size_t>(4 + 2 * i + j)], closed));
      }
  }
  ConditionSet conds = shape3_conditions(S);
  double cond = 0.0;
  for (int k = 0; k < 100; ++k) cond = std::max(cond, varjet::max_abs(conds.evaluate(s(chart, ranges, 1000 + k), consts)));
  Report r = combine_parts("criterion_07_normal_form", o.seed, 100,
                           {upper("A_skew_abs", skew, 1e-12),
                            upper("abs_A12_at_0_minus_1", std::abs(std::abs(a0) - 1.0), 1e-12),
                            upper("A12_proportionality_rel", prop, 1e-10),
                            upper("B_closed_form_rel", bform, 1e-9),
                            upper("conditions_abs", cond, 1e-9)});
  r.notes.push_back({"mu", "1.3"});
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", fitted);
  r.notes.push_back({"B_constant", buf});
  return r;
}

Report criterion8(const AcceptanceOptions& o) {
  auto corpus = lagrangian_corpus(20, derive_seed(o.seed, 8));
  Sampler s = sampler(o.seed, 8);
  double helm = 0, helm_split = 0, cond3 = 0, cond4 = 0, agree = 0;
  int stream = 0;
  const int points = 5;
  for (const CorpusEntry& e : corpus) {
    DynamicalForm F = euler_poisson(e.lagrangian);
    const int n = e.lagrangian.chart.n;
    for (HelmholtzVariant v : {HelmholtzVariant::criterion, HelmholtzVariant::split}) {
      HelmholtzSystem sys(F, v);
      JetChart chart(P, n, std::max({sys.point_order(), F.order(), 1}));
      SampleRanges ranges = SampleRanges::admissible_parametric(chart.order);
      double& slot = v == HelmholtzVariant::criterion ? helm : helm_split;
      for (int k = 0; k < points; ++k)
        slot = std::max(slot, sys.evaluate(s(chart, ranges, stream++)).max_relative());
    }
    ExtractionOptions eo;
    eo.seed = derive_seed(o.seed, 80);
    JetChart chart(P, n, 4);
    SampleRanges ranges = SampleRanges::admissible_parametric(4);
    Shape4 S4 = extract_shape4(F, eo);
    Shape4 C4 = shape4_from_lagrangian(e.lagrangian);
    ConditionSet c4 = shape4_conditions(S4);
    std::vector<Expr> diff4;
    for (std::size_t i = 0; i < S4.M.data().size(); ++i) {
      diff4.push_back(S4.M.data()[i] - C4.M.data()[i]);
      diff4.push_back(S4.A.data()[i] - C4.A.data()[i]);
    }
    for (std::size_t i = 0; i < S4.b.size(); ++i) diff4.push_back(S4.b[i] - C4.b[i]);
    Tape d4(diff4);
    std::vector<Expr> scale4(S4.M.data());
    scale4.insert(scale4.end(), S4.A.data().begin(), S4.A.data().end());
    scale4.insert(scale4.end(), S4.b.begin(), S4.b.end());
    Tape sc4(scale4);
    std::optional<Shape3> S3, C3;
    std::optional<ConditionSet> c3;
    std::optional<Tape> d3, sc3;
    if (e.affine_in_w) {
      S3 = extract_shape3(F, eo);
      C3 = shape3_from_lagrangian(e.lagrangian);
      c3 = shape3_conditions(*S3);
      std::vector<Expr> diff3, scale3;
      for (std::size_t i = 0; i < S3->A.data().size(); ++i) {
        diff3.push_back(S3->A.data()[i] - C3->A.data()[i]);
        diff3.push_back(S3->B.data()[i] - C3->B.data()[i]);
        scale3.push_back(S3->A.data()[i]);
        scale3.push_back(S3->B.data()[i]);
      }
      for (std::size_t i = 0; i < S3->c.size(); ++i) {
        diff3.push_back(S3->c[i] - C3->c[i]);
        scale3.push_back(S3->c[i]);
      }
      d3 = Tape(diff3);
      sc3 = Tape(scale3);
    }
    for (int k = 0; k < points; ++k) {
      JetPoint p = s(chart, ranges, stream++);
      cond4 = std::max(cond4, varjet::max_abs(c4.evaluate(p)));
      agree = std::max(agree, max_abs_vec(d4.evaluate(p)) / std::max(1.0, max_abs_vec(sc4.evaluate(p))));
      if (c3) {
        cond3 = std::max(cond3, varjet::max_abs(c3->evaluate(p)));
        agree = std::max(agree, max_abs_vec(d3->evaluate(p)) / std::max(1.0, max_abs_vec(sc3->evaluate(p))));
      }
    }
  }
  return combine_parts("criterion_08_generated_lagrangians", o.seed, 20,
                       {upper("helmholtz_rel", helm, 1e-8), upper("helmholtz_split_rel", helm_split, 1e-8),
                        upper("shape3_conditions_abs", cond3, 1e-8),
                        upper("shape4_conditions_abs", cond4, 1e-8),
                        upper("coefficients_vs_extraction_rel", agree, 1e-8)});
}

Report criterion9(const AcceptanceOptions& o) {
  TopModel top = build_top_model(kMu);
  const ConstantMap consts = top.model.fixed_constants();
  ExtractionOptions eo;
  eo.seed = derive_seed(o.seed, 9);
  eo.consts = consts;
  Shape3 S = extract_shape3(top.model.form("E10"), eo);
  Shape3 bent = S;
  bent.c[1] = bent.c[1] + Expr(0.1);
  const Metric g = top_default_metric();
  SymmetryProbe probe(S, g), probe_bent(bent, g);
  Rng rng(derive_seed(o.seed, 90));
  std::vector<Generator> gens;
  for (int k = 0; k < 100; ++k) gens.push_back(random_generator(2, g, rng));
  JetChart chart(P, 2, 2);
  SampleRanges ranges = SampleRanges::admissible_parametric(2);
  Sampler s = sampler(o.seed, 9);
  double worst = 0.0, bent_best = 0.0;
  for (int k = 0; k < 100; ++k) {
    JetPoint p = s(chart, ranges, k);
    auto d = probe.at(p, consts);
    auto db = probe_bent.at(p, consts);
    for (const Generator& G : gens) {
      worst = std::max(worst, probe.exact2d(d, G).max_abs());
      bent_best = std::max(bent_best, probe_bent.exact2d(db, G).max_abs());
    }
  }
  return with_mu(combine_parts("criterion_09_symmetry", o.seed, 100,
                               {upper("E10_residual_abs", worst, 1e-9),
                                lower("perturbed_c_max_residual", bent_best, 1e-3)}));
}

Report criterion10(const AcceptanceOptions& o) {
  Expr v1 = Expr::coordinate({P, 1, 0}), v2 = Expr::coordinate({P, 2, 0});
  Expr a = Expr::pow(Expr(1.0) - v1 * v1 - v2 * v2, Exponent{-3, 2});
  JetChart chart(P, 2, 1);
  JetPoint p(chart);
  p.set(1, 0, 0.3);
  p.set(2, 0, -0.2);
  auto res = appendix_pde_residuals(a, p);
  double pdes = 0.0;
  for (const auto& [name, r] : res)
    if (name != "f_equation") pdes = std::max(pdes, std::abs(r));
  Expr y = Expr::independent(P);
  Expr f = Expr(3.0) * y / (Expr(1.0) - y);
  double feq = 0.0;
  for (double yy : {0.5, 0.09, 0.13, 0.25}) feq = std::max(feq, std::abs(f_equation_residual(f, yy)));
  auto flat = appendix_pde_residuals(Expr(1.0), p);
  return combine_parts("criterion_10_appendix", o.seed, 1,
                       {upper("a_final_pde_abs", pdes, 1e-10),
                        upper("a_final_f_equation_abs", std::abs(res.at("f_equation")), 1e-10),
                        upper("f_equation_abs", feq, 1e-12),
                        upper("a_one_boost_11_plus_3", std::abs(flat.at("boost_11") + 3.0), 0.0)});
}

Report criterion11(const AcceptanceOptions& o) {
  Metric block({-1, -1, -1});
  Rng rng(derive_seed(o.seed, 11));
  double weakest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 50; ++k) {
    std::vector<double> a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<double> v{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    auto res = nogo_certificate(a, v, block, 1000, derive_seed(o.seed, 1100 + static_cast<std::uint64_t>(k)));
    weakest = std::min(weakest, res.certificate);
  }
  auto zero = nogo_certificate({0, 0, 0}, {0.1, 0.2, 0.3}, block, 1000, derive_seed(o.seed, 1199));
  return combine_parts("criterion_11_nogo", o.seed, 50,
                       {lower("min_certificate", weakest, 1e-6),
                        upper("zero_a_certificate_abs", std::abs(zero.certificate), 0.0)});
}

Report timed(int number, const AcceptanceOptions& o) {
  auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    switch (number) {
      case 1: r = criterion1(o); break;
      case 2: r = criterion2(o); break;
      case 3: r = criterion3(o); break;
      case 4: r = criterion4(o); break;
      case 5: r = criterion5(o); break;
      case 6: r = criterion6(o); break;
      case 7: r = criterion7(o); break;
      case 8: r = criterion8(o); break;
      case 9: r = criterion9(o); break;
      case 10: r = criterion10(o); break;
      case 11: r = criterion11(o); break;
      default: throw Error("no criterion " + std::to_string(number));
    }
  } catch (const Error& e) {
    char name[32];
    std::snprintf(name, sizeof name, "criterion_%02d", number);
    r = make_report(name, o.seed, 0, std::numeric_limits<double>::infinity(), 1.0);
    r.notes.push_back({"error", e.what()});
  }
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report criterion12(const AcceptanceOptions& o) {
  AcceptanceOptions plain = o;
  plain.timing = false;
  plain.determinism = false;
  std::string first, second;
  for (int k = 1; k <= 11; ++k) first += to_json(timed(k, plain)) + "\n";
  for (int k = 1; k <= 11; ++k) second += to_json(timed(k, plain)) + "\n";
  std::size_t differ = 0;
  for (std::size_t i = 0; i < std::max(first.size(), second.size()); ++i)
    if (i >= first.size() || i >= second.size() || first[i] != second[i]) ++differ;
  return combine_parts("criterion_12_determinism", o.seed, 2,
                       {upper("differing_bytes", static_cast<double>(differ), 0.0)});
}

}  // namespace

Report run_criterion(int number, const AcceptanceOptions& options) {
  if (number == 12) {
    auto start = std::chrono::steady_clock::now();
    Report r = criterion12(options);
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  return timed(number, options);
}

std::vector<Report> run_acceptance(const AcceptanceOptions& options) {
  std::vector<Report> out;
  for (int k = 1; k <= 11; ++k) out.push_back(run_criterion(k, options));
  if (options.determinism) out.push_back(run_criterion(12, options));
  return out;
}

}  // namespace varjet
