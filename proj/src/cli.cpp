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

#include "varjet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "varjet/error.hpp"
#include "varjet/homogeneous.hpp"
#include "varjet/model.hpp"
#include "varjet/normal_forms.hpp"
#include "varjet/parser.hpp"
#include "varjet/report.hpp"
#include "varjet/symmetry.hpp"
#include "varjet/top_model.hpp"
#include "varjet/variational.hpp"
#include "varjet/verify.hpp"

namespace varjet {

namespace {

using json = nlohmann::ordered_json;

// Usage errors found after CLI11 has accepted the command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string model;
  std::string name;
  int samples = 20;
  std::string seed;
  std::optional<double> tol;
  std::vector<std::string> sets;
};

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    throw UsageError("invalid seed '" + s + "'");
  }
  if (used != s.size()) throw UsageError("invalid seed '" + s + "'");
  return v;
}

std::uint64_t resolve_seed(const std::string& flag) {
  if (!flag.empty()) return parse_seed(flag);
  if (const char* env = std::getenv("VARJET_SEED"); env && *env) return parse_seed(env);
  return 0xC0FFEE;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": not a number list '" + s + "'");
    }
  }
  return out;
}

template <std::size_t N>
std::array<double, N> parse_array(const std::string& s, const std::string& what) {
  auto v = parse_list(s, what);
  if (v.size() != N) throw UsageError(what + " needs " + std::to_string(N) + " values");
  std::array<double, N> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

SampleRanges ranges_for(ChartKind kind, int order) {
  return kind == ChartKind::parametric ? SampleRanges::admissible_parametric(order)
                                       : SampleRanges::admissible_homogeneous(order);
}

// Fixed constants, then --set values, then uniform draws in [0.5, 2] for the
// remaining free constants, fresh at every point.
class Constants {
 public:
  Constants(const Model& m, const std::vector<std::string>& sets, std::uint64_t seed)
      : fixed_(m.fixed_constants()), seed_(derive_seed(seed, 0xC0457A)) {
    for (const std::string& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects name=value, got '" + s + "'");
      std::string name = s.substr(0, eq);
      if (!m.constants.count(name)) throw UsageError("model has no constant '" + name + "'");
      fixed_[name] = parse_list(s.substr(eq + 1), "--set " + name).at(0);
    }
    for (const auto& [name, value] : m.constants)
      if (!fixed_.count(name)) free_.push_back(name);
  }

  ConstantMap at(int k) const {
    ConstantMap c = fixed_;
    Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(k)));
    for (const std::string& name : free_) c[name] = rng.uniform(0.5, 2.0);
    return c;
  }

  void annotate(Report& r) const {
    if (free_.empty()) return;
    std::string names;
    for (const std::string& n : free_) names += (names.empty() ? "" : ",") + n;
    r.notes.push_back({"sampled_constants", names});
  }

 private:
  ConstantMap fixed_;
  std::vector<std::string> free_;
  std::uint64_t seed_;
};

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double r = rel(a[i], b[i]);
    if (std::isnan(r)) return r;
    m = std::max(m, r);
  }
  return m;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

int emit(const Context& ctx, const Report& r) {
  ctx.out << to_json(r) << "\n";
  return r.pass() ? 0 : 1;
}

int emit_json(const Context& ctx, const json& j) {
  ctx.out << j.dump() << "\n";
  return 0;
}

struct Session {
  Model model;
  std::uint64_t seed;
  Constants consts;

  explicit Session(const Common& c)
      : model(load(c)), seed(resolve_seed(c.seed)), consts(model, c.sets, seed) {
    if (c.samples < 1) throw UsageError("--samples must be positive");
  }

  static Model load(const Common& c) {
    if (c.model.empty()) throw UsageError("--model is required");
    return load_model(c.model);
  }

  JetPoint point(const JetChart& chart, int k) const {
    return sample_jetpoint(chart, ranges_for(chart.kind, chart.order),
                           derive_seed(seed, static_cast<std::uint64_t>(k)));
  }
};

int cmd_check_model(const Context& ctx, const Common& c) {
  Session s(c);
  const Model& m = s.model;
  double bad = 0.0;
  for (const auto& [name, L] : m.lagrangians) {
    Tape t({L.expr});
    JetChart chart = L.chart.with_order(std::max(L.chart.order, 1));
    for (int k = 0; k < c.samples; ++k)
      for (double v : t.evaluate(s.point(chart, k), s.consts.at(k))) bad += std::isfinite(v) ? 0 : 1;
  }
  for (const auto& [name, F] : m.forms) {
    Tape t(F.components());
    JetChart chart = F.chart().with_order(std::max(F.chart().order, 1));
    for (int k = 0; k < c.samples; ++k)
      for (double v : t.evaluate(s.point(chart, k), s.consts.at(k))) bad += std::isfinite(v) ? 0 : 1;
  }
  Report r = make_report("check-model", s.seed, c.samples, bad, c.tol.value_or(0.0));
  std::string forms, lags;
  for (const auto& [name, F] : m.forms) forms += (forms.empty() ? "" : ",") + name;
  for (const auto& [name, L] : m.lagrangians) lags += (lags.empty() ? "" : ",") + name;
  r.notes.push_back({"chart", std::string(to_string(m.chart.kind)) + " n=" +
                                  std::to_string(m.chart.n) + " order=" +
                                  std::to_string(m.chart.order)});
  r.notes.push_back({"forms", forms});
  r.notes.push_back({"lagrangians", lags});
  s.consts.annotate(r);
  return emit(ctx, r);
}

int compare_forms(const Context& ctx, const Session& s, const Common& c, const std::string& check,
                  const ExprVector& a, const ExprVector& b, const JetChart& chart) {
  if (a.size() != b.size())
    throw ArityError("cannot compare " + std::to_string(a.size()) + " components with " +
                     std::to_string(b.size()));
  Tape ta(a), tb(b);
  JetChart pc = chart.with_order(std::max({ta.jet_order(), tb.jet_order(), 1}));
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    JetPoint p = s.point(pc, k);
    ConstantMap consts = s.consts.at(k);
    double d = max_rel(ta.evaluate(p, consts), tb.evaluate(p, consts));
    worst = std::isnan(d) ? d : std::max(worst, d);
  }
  Report r = make_report(check, s.seed, c.samples, worst, c.tol.value_or(1e-9));
  s.consts.annotate(r);
  return emit(ctx, r);
}

json rendered(const std::string& name, const ExprVector& es) {
  json comps = json::array();
  for (const Expr& e : es) comps.push_back(render_expression(e));
  return json{{"name", name}, {"components", comps}};
}

int cmd_el(const Context& ctx, const Common& c, const std::string& compare) {
  Session s(c);
  const LagrangianDef& L = s.model.lagrangian(c.name);
  DynamicalForm F = euler_poisson(L);
  if (compare.empty()) {
    json j = rendered(c.name, F.components());
    j["order"] = F.order();
    return emit_json(ctx, j);
  }
  const DynamicalForm& G = s.model.form(compare);
  if (G.chart().kind != F.chart().kind) throw ChartError("form " + compare + " lives on another chart");
  return compare_forms(ctx, s, c, "el", F.components(), G.components(), F.chart());
}

int cmd_helmholtz(const Context& ctx, const Common& c, const std::string& variant) {
  Session s(c);
  HelmholtzVariant v;
  if (variant == "criterion") v = HelmholtzVariant::criterion;
  else if (variant == "split") v = HelmholtzVariant::split;
  else throw UsageError("--variant must be criterion or split");
  const DynamicalForm& F = s.model.form(c.name);
  HelmholtzSystem sys(F, v);
  JetChart chart = F.chart().with_order(std::max({sys.point_order(), F.order(), 1}));
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    double d = sys.evaluate(s.point(chart, k), s.consts.at(k)).max_relative();
    worst = std::isnan(d) ? d : std::max(worst, d);
  }
  Report r = make_report("helmholtz", s.seed, c.samples, worst, c.tol.value_or(1e-9));
  r.notes.push_back({"variant", variant});
  s.consts.annotate(r);
  return emit(ctx, r);
}

int cmd_zermelo(const Context& ctx, const Common& c) {
  Session s(c);
  const LagrangianDef& L = s.model.lagrangian(c.name);
  if (L.chart.kind != ChartKind::homogeneous)
    throw ChartError("lagrangian " + c.name + " is not homogeneous");
  auto [z1, z2] = zermelo_expressions(L);
  Tape t({z1, z2});
  JetChart chart = L.chart.with_order(std::max(t.jet_order(), 1));
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k)
    for (double v : t.evaluate(s.point(chart, k), s.consts.at(k)))
      worst = std::isnan(v) ? v : std::max(worst, std::abs(v));
  Report r = make_report("zermelo", s.seed, c.samples, worst, c.tol.value_or(1e-10));
  s.consts.annotate(r);
  return emit(ctx, r);
}

int cmd_lift(const Context& ctx, const Common& c, const std::string& compare) {
  Session s(c);
  const Model& m = s.model;
  if (m.has_form(c.name)) {
    DynamicalForm H = lift_equation_form(m.form(c.name));
    if (compare.empty()) return emit_json(ctx, rendered(c.name, H.components()));
    return compare_forms(ctx, s, c, "lift", H.components(), m.form(compare).components(),
                         H.chart());
  }
  LagrangianDef H = lift_lagrangian(m.lagrangian(c.name));
  if (compare.empty()) return emit_json(ctx, rendered(c.name, {H.expr}));
  return compare_forms(ctx, s, c, "lift", {H.expr}, {m.lagrangian(compare).expr}, H.chart);
}

int cmd_project(const Context& ctx, const std::string& point, int dim, int order) {
  if (dim < 1) throw UsageError("--dim must be positive");
  if (order < 1 || order > 3) throw UsageError("--order must be 1, 2 or 3");
  JetChart chart(ChartKind::homogeneous, dim, order + 1);
  auto coords = chart.coordinates();
  auto values = parse_list(point, "--point");
  if (values.size() != coords.size()) {
    std::string names;
    for (const Coordinate& co : coords) names += (names.empty() ? "" : ",") + chart.coordinate_name(co);
    throw UsageError("--point needs " + std::to_string(coords.size()) + " values: " + names);
  }
  JetPoint p(chart);
  for (std::size_t i = 0; i < coords.size(); ++i) p.at(coords[i]) = values[i];
  JetPoint q = project_jet(p, order);
  json j;
  j["t"] = q.t_value();
  for (const Coordinate& co : q.chart().coordinates()) j[q.chart().coordinate_name(co)] = q[co];
  return emit_json(ctx, j);
}

int cmd_shape(const Context& ctx, const Common& c, int order) {
  Session s(c);
  if (order != 3 && order != 4) throw UsageError("--order must be 3 or 4");
  const DynamicalForm& F = s.model.form(c.name);
  if (F.chart().kind != ChartKind::parametric) throw ChartError("shape needs a parametric form");
  ExtractionOptions eo;
  eo.seed = derive_seed(s.seed, 0x5A);
  eo.consts = s.consts.at(-1);
  const std::string check = "shape" + std::to_string(order);
  ConditionSet conds;
  try {
    conds = order == 3 ? shape3_conditions(extract_shape3(F, eo))
                       : shape4_conditions(extract_shape4(F, eo));
  } catch (const NormalFormError& e) {
    Report r = make_report(check, s.seed, 0, std::numeric_limits<double>::infinity(),
                           c.tol.value_or(1e-9));
    r.notes.push_back({"error", e.what()});
    return emit(ctx, r);
  }
  JetChart chart = F.chart().with_order(4);
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    double d = max_abs(conds.evaluate(s.point(chart, k), s.consts.at(k)));
    worst = std::isnan(d) ? d : std::max(worst, d);
  }
  Report r = make_report(check, s.seed, c.samples, worst, c.tol.value_or(1e-9));
  s.consts.annotate(r);
  return emit(ctx, r);
}

int cmd_symmetry(const Context& ctx, const Common& c, int generators) {
  Session s(c);
  if (generators < 1) throw UsageError("--generators must be positive");
  const DynamicalForm& F = s.model.form(c.name);
  ExtractionOptions eo;
  eo.seed = derive_seed(s.seed, 0x5A);
  eo.consts = s.consts.at(-1);
  Shape3 S = extract_shape3(F, eo);
  const int n = S.chart.n;
  if (s.model.metric.dim() != n + 1) throw UsageError("model metric does not match the chart");
  SymmetryProbe probe(S, s.model.metric);
  Rng rng(derive_seed(s.seed, 0x6E));
  std::vector<Generator> gens;
  for (int g = 0; g < generators; ++g) gens.push_back(random_generator(n, s.model.metric, rng));
  JetChart chart = S.chart.with_order(2);
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    auto d = probe.at(s.point(chart, k), s.consts.at(k));
    for (const Generator& G : gens) {
      double r = n == 2 ? probe.exact2d(d, G).max_abs() : probe.lsq(d, G).defect;
      worst = std::isnan(r) ? r : std::max(worst, r);
    }
  }
  Report r = make_report("symmetry", s.seed, c.samples, worst, c.tol.value_or(1e-9));
  r.notes.push_back({"method", n == 2 ? "exact2d" : "lsq"});
  r.notes.push_back({"generators", std::to_string(generators)});
  s.consts.annotate(r);
  return emit(ctx, r);
}

int cmd_nogo(const Context& ctx, const Common& c, const std::string& a, const std::string& v,
             const std::string& signature, int trials) {
  std::uint64_t seed = resolve_seed(c.seed);
  if (trials < 1) throw UsageError("--trials must be positive");
  auto av = parse_list(a, "--a"), vv = parse_list(v, "--v");
  if (av.size() != 3 || vv.size() != 3) throw UsageError("--a and --v need 3 values");
  Metric metric = Metric::parse_signature(signature);
  if (metric.dim() != 3) throw UsageError("--signature needs 3 signs");
  NogoResult res = nogo_certificate(av, vv, metric, trials, seed);
  Report r = combine_parts("nogo", seed, trials,
                           {ReportPart{"certificate", res.certificate, c.tol.value_or(1e-6), true}});
  return emit(ctx, r);
}

struct SimulateFlags {
  double mu = 1.0;
  double h = 1e-3;
  int steps = 1000;
  int record_every = 1;
  std::string x0 = "0,0";
  std::string v0 = "0,0";
  std::string vp0 = "0,0";
  bool homogeneous = false;
  std::string out;
  std::string signature = "+--";
  int orientation = -1;
};

int cmd_top_simulate(const Context& ctx, const Common& c, const SimulateFlags& f) {
  std::uint64_t seed = resolve_seed(c.seed);
  if (!(f.h > 0) || f.steps < 1 || f.record_every < 1)
    throw UsageError("--h, --steps and --record-every must be positive");
  TopConfig cfg;
  cfg.mu = f.mu;
  cfg.metric = Metric::parse_signature(f.signature, f.orientation);
  if (cfg.metric.dim() != 3) throw UsageError("--signature needs 3 signs");
  cfg.h = f.h;
  cfg.steps = f.steps;
  cfg.record_every = f.record_every;
  cfg.parametric.x = parse_array<2>(f.x0, "--x0");
  cfg.parametric.v = parse_array<2>(f.v0, "--v0");
  cfg.parametric.vp = parse_array<2>(f.vp0, "--vp0");
  double s2 = cfg.metric.eta(0) + cfg.metric.eta(1) * cfg.parametric.v[0] * cfg.parametric.v[0] +
              cfg.metric.eta(2) * cfg.parametric.v[1] * cfg.parametric.v[1];
  if (!(cfg.metric.eta(0) * s2 > 0)) throw DomainError("initial velocity is not timelike");
  Trajectory tr;
  if (f.homogeneous) {
    cfg.homogeneous = homogeneous_from_parametric(cfg.parametric, cfg.metric);
    tr = integrate_homogeneous(cfg);
  } else {
    tr = integrate_parametric(cfg);
  }
  if (f.out.empty()) {
    write_trajectory_csv(tr, ctx.out);
  } else {
    std::ofstream file(f.out);
    if (!file) throw UsageError("cannot write '" + f.out + "'");
    write_trajectory_csv(tr, file);
  }
  std::vector<ReportPart> parts{{"max_p_drift", tr.max_p_drift, c.tol.value_or(1e-6), false},
                                {"halted", tr.halted ? 1.0 : 0.0, 0.0, false}};
  if (f.homogeneous) parts.push_back({"max_uu_drift", tr.max_uu_drift, 1e-8, false});
  Report r = combine_parts("top-simulate", seed, f.steps, std::move(parts));
  if (tr.halted) r.notes.push_back({"halt", tr.halt_reason});
  if (f.out.empty()) return r.pass() ? 0 : 1;
  return emit(ctx, r);
}

int cmd_top_verify(const Context& ctx, const Common& c, bool timing, int criterion) {
  AcceptanceOptions o;
  o.seed = resolve_seed(c.seed);
  o.timing = timing;
  std::vector<Report> reports;
  if (criterion == 0) {
    reports = run_acceptance(o);
  } else {
    if (criterion < 1 || criterion > 12) throw UsageError("--criterion must be 1..12");
    reports.push_back(run_criterion(criterion, o));
  }
  bool ok = true;
  for (const Report& r : reports) {
    ctx.out << to_json(r, timing) << "\n";
    ok = ok && r.pass();
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Inverse variational problem toolkit", "varjet"};
  app.require_subcommand(1);

  Common c;
  auto common = [&](CLI::App* sub, bool needs_model) {
    if (needs_model) {
      sub->add_option("--model", c.model, "model file")->required();
      sub->add_option("--name", c.name, "form or lagrangian")->required();
      sub->add_option("--samples", c.samples, "sample points");
      sub->add_option("--set", c.sets, "bind a free constant, name=value");
    }
    sub->add_option("--seed", c.seed, "base seed (default 0xC0FFEE or $VARJET_SEED)");
    sub->add_option("--tol", c.tol, "tolerance");
  };

  auto* check = app.add_subcommand("check-model", "load a model and evaluate every entry");
  check->add_option("--model", c.model, "model file")->required();
  check->add_option("--samples", c.samples, "sample points");
  check->add_option("--set", c.sets, "bind a free constant, name=value");
  check->add_option("--seed", c.seed, "base seed");
  check->add_option("--tol", c.tol, "tolerance on the count of non-finite values");

  std::string compare;
  auto* el = app.add_subcommand("el", "Euler-Poisson form of a lagrangian");
  common(el, true);
  el->add_option("--compare", compare, "form to compare against");

  std::string variant = "criterion";
  auto* helm = app.add_subcommand("helmholtz", "Helmholtz residuals of a form");
  common(helm, true);
  helm->add_option("--variant", variant, "criterion or split");

  auto* zer = app.add_subcommand("zermelo", "Zermelo residuals of a homogeneous lagrangian");
  common(zer, true);

  auto* lift = app.add_subcommand("lift", "homogeneous lift of a form or lagrangian");
  common(lift, true);
  lift->add_option("--compare", compare, "homogeneous entry to compare against");

  std::string point;
  int dim = 2, proj_order = 3;
  auto* proj = app.add_subcommand("project", "parametric jet of a homogeneous jet");
  proj->add_option("--point", point, "X0..Xn, u0..un, u0'..un', ... comma separated")->required();
  proj->add_option("--dim", dim, "n");
  proj->add_option("--order", proj_order, "parametric order 1..3");

  int shape_order = 3;
  auto* shape = app.add_subcommand("shape", "normal form extraction and conditions");
  common(shape, true);
  shape->add_option("--order", shape_order, "3 or 4");

  int generators = 10;
  auto* sym = app.add_subcommand("symmetry", "Lorentz symmetry residuals of a third-order form");
  common(sym, true);
  sym->add_option("--generators", generators, "random generators per point");

  std::string nogo_a, nogo_v, nogo_sig = "---";
  int trials = 1000;
  auto* nogo = app.add_subcommand("nogo", "certificate against a Lorentz-invariant third-order form");
  common(nogo, false);
  nogo->add_option("--a", nogo_a, "a1,a2,a3")->required();
  nogo->add_option("--v", nogo_v, "v1,v2,v3")->required();
  nogo->add_option("--signature", nogo_sig, "spatial signature");
  nogo->add_option("--trials", trials, "sampled omega");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("top-simulate", "integrate the planar top");
  common(simulate, false);
  simulate->add_option("--mu", sim.mu, "mu");
  simulate->set_help_flag("--help", "Print this help message and exit");
  simulate->add_option("--h", sim.h, "step");
  simulate->add_option("--steps", sim.steps, "steps");
  simulate->add_option("--record-every", sim.record_every, "keep every k-th step");
  simulate->add_option("--x0", sim.x0, "x1,x2");
  simulate->add_option("--v0", sim.v0, "v1,v2");
  simulate->add_option("--vp0", sim.vp0, "v1',v2'");
  simulate->add_flag("--homogeneous", sim.homogeneous, "integrate the homogeneous equation");
  simulate->add_option("--signature", sim.signature, "metric signature");
  simulate->add_option("--orientation", sim.orientation, "sign of eps_012");
  simulate->add_option("--out", sim.out, "CSV path; stdout when absent");

  bool timing = false;
  int criterion = 0;
  auto* verify = app.add_subcommand("top-verify", "acceptance battery, one report per line");
  common(verify, false);
  verify->add_flag("--timing", timing, "include runtimes");
  verify->add_option("--criterion", criterion, "run a single criterion");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check_model(ctx, c);
    if (el->parsed()) return cmd_el(ctx, c, compare);
    if (helm->parsed()) return cmd_helmholtz(ctx, c, variant);
    if (zer->parsed()) return cmd_zermelo(ctx, c);
    if (lift->parsed()) return cmd_lift(ctx, c, compare);
    if (proj->parsed()) return cmd_project(ctx, point, dim, proj_order);
    if (shape->parsed()) return cmd_shape(ctx, c, shape_order);
    if (sym->parsed()) return cmd_symmetry(ctx, c, generators);
    if (nogo->parsed()) return cmd_nogo(ctx, c, nogo_a, nogo_v, nogo_sig, trials);
    if (simulate->parsed()) return cmd_top_simulate(ctx, c, sim);
    if (verify->parsed()) return cmd_top_verify(ctx, c, timing, criterion);
  } catch (const NormalFormError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace varjet
