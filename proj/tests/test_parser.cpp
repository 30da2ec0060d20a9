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
#include <cstdio>
#include <fstream>

#include "test_util.hpp"
#include "varjet/error.hpp"
#include "varjet/model.hpp"
#include "varjet/parser.hpp"
#include "varjet/top_model.hpp"

using namespace varjet;
using varjet::testing::model_path;
using varjet::testing::TreeGen;

namespace {

const ChartKind kP = ChartKind::parametric;
const ChartKind kH = ChartKind::homogeneous;

Model parse(const std::string& text) { return parse_model(text, "test.model"); }

const char* kSmall = R"(
[model]
chart = parametric
dim = 2
order = 2

[constants]
k = 2
mu = free

[lagrangian L]
L = v1^2/2 + mu*x1*v2

[form F]
E1 = v1' + k*x1
E2 = v2'
)";

}  // namespace

TEST(ParseExpression, Examples) {
  JetChart c(kP, 2, 2);
  JetPoint p(c);
  p.set(1, 1, 3.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("v1' * v1' / 2", c), p), 4.5);
  Expr e = parse_expression("mu * sqrt(1 - v1^2 - v2^2)", c);
  EXPECT_EQ(constants_of(e), (std::set<std::string>{"mu"}));
  EXPECT_THROW(parse_expression("v3", c), ParseError);
}

TEST(ParseExpression, Precedence) {
  JetChart c(kP, 1, 1);
  JetPoint p(c);
  p.set(1, 0, 3.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("-v1^2", c), p), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("v1^2/2", c), p), 4.5);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("2 - 3 - 4", c), p), -5.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("12 / 3 / 2", c), p), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("2*-v1", c), p), -6.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("(1 + v1)^(3/2)", c), p), 8.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("v1^-1", c), p), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("1.5e1 + .5", c), p), 15.5);
}

TEST(ParseExpression, HomogeneousSpelling) {
  JetChart c(kH, 2, 3);
  Expr e = parse_expression("X0 + u2'' - u0'", c);
  auto coords = coordinates_of(e);
  EXPECT_TRUE(coords.count({kH, 0, -1}));
  EXPECT_TRUE(coords.count({kH, 2, 2}));
  EXPECT_TRUE(coords.count({kH, 0, 1}));
  EXPECT_THROW(parse_expression("x1", c, [] {
                 static const std::set<std::string> none;
                 ParseOptions o;
                 o.constants = &none;
                 return o;
               }()),
               ParseError);
  EXPECT_THROW(parse_expression("t", JetChart(kH, 1, 1), [] {
                 static const std::set<std::string> none;
                 ParseOptions o;
                 o.constants = &none;
                 return o;
               }()),
               ParseError);
}

TEST(ParseExpression, ErrorsCarryLineAndColumn) {
  JetChart c(kP, 2, 2);
  try {
    parse_expression("v1 + * v2", c);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 6);
  }
  EXPECT_THROW(parse_expression("v1''", c), ParseError);  // beyond order 2
  EXPECT_THROW(parse_expression("(v1", c), ParseError);
  EXPECT_THROW(parse_expression("v1^(1/3)", c), ParseError);
  EXPECT_THROW(parse_expression("v1^0.25", c), ParseError);
  EXPECT_THROW(parse_expression("x1'", c), ParseError);
  EXPECT_THROW(parse_expression("v01", c), ParseError);
  EXPECT_THROW(parse_expression("", c), ParseError);
  EXPECT_THROW(parse_expression("v1 v2", c), ParseError);
}

TEST(Render, RoundTripsByValue) {
  JetChart c(kP, 2, 2);
  Expr e = parse_expression("x1 + v2''", JetChart(kP, 2, 3));
  Expr back = parse_expression(render_expression(e), JetChart(kP, 2, 3));
  JetPoint p = sample_jetpoint(JetChart(kP, 2, 3), SampleRanges::uniform(3, {-1, 1}), 3);
  EXPECT_EQ(evaluate(e, p), evaluate(back, p));
  Expr lit(0.1 + 0.2);
  EXPECT_EQ(evaluate(parse_expression(render_expression(lit), c), JetPoint(c)), 0.1 + 0.2);
  Expr tiny(-1.2345678901234567e-300);
  EXPECT_EQ(evaluate(parse_expression(render_expression(tiny), c), JetPoint(c)),
            -1.2345678901234567e-300);
}

TEST(Render, TopEquationTreesRoundTrip) {
  TopModel top = build_top_model(std::nullopt);
  const DynamicalForm& E = top.model.form("E10");
  JetChart c = E.chart();
  for (int k = 0; k < 20; ++k) {
    JetPoint p = sample_jetpoint(c, SampleRanges::admissible_parametric(c.order), derive_seed(1, k));
    for (const Expr& comp : E.components()) {
      Expr back = parse_expression(render_expression(comp), c);
      EXPECT_EQ(evaluate(comp, p, {{"mu", 1.3}}), evaluate(back, p, {{"mu", 1.3}}));
    }
  }
}

TEST(Render, FuzzTenThousandTrees) {
  Rng rng(2024);
  JetChart charts[] = {JetChart(kP, 2, 3), JetChart(kH, 2, 2), JetChart(kP, 1, 1)};
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const JetChart& c = charts[k % 3];
    TreeGen gen(c, rng);
    Expr e = gen(rng.integer(0, 6));
    if (k % 5 == 0) e = e * Expr::constant("mu") - Expr(rng.uniform(-1e3, 1e3));
    if (k % 7 == 0) e = e / (Expr(2.0) + e * e);
    Expr back = parse_expression(render_expression(e), c);
    JetPoint p = sample_jetpoint(c, SampleRanges::uniform(c.order, {-1, 1}), derive_seed(77, k));
    double a = evaluate(e, p, {{"mu", 0.7}}), b = evaluate(back, p, {{"mu", 0.7}});
    ASSERT_TRUE(a == b || (std::isnan(a) && std::isnan(b))) << render_expression(e);
    ++checked;
  }
  EXPECT_EQ(checked, 10000);
}

TEST(Model, LoadsBundledTopModel) {
  Model m = load_model(model_path("top2d.model"));
  EXPECT_TRUE(m.has_form("E10"));
  EXPECT_TRUE(m.has_form("HOM"));
  for (const char* n : {"L1", "L2", "LH0", "LH1", "LH2"}) EXPECT_TRUE(m.has_lagrangian(n)) << n;
  EXPECT_EQ(m.lagrangians.size(), 5u);
  EXPECT_EQ(m.form("E10").size(), 2);
  EXPECT_EQ(m.form("HOM").size(), 3);
  EXPECT_EQ(m.form("HOM").chart().kind, kH);
  EXPECT_EQ(m.metric.signature(), "+--");
  EXPECT_EQ(m.free_constants(), std::vector<std::string>{"mu"});
}

TEST(Model, ParsesConstantsAndCharts) {
  Model m = parse(kSmall);
  EXPECT_EQ(m.chart, JetChart(kP, 2, 2));
  EXPECT_EQ(m.fixed_constants(), (ConstantMap{{"k", 2.0}}));
  EXPECT_EQ(m.free_constants(), std::vector<std::string>{"mu"});
  EXPECT_EQ(m.form("F").size(), 2);
  EXPECT_THROW(m.form("G"), FormatError);
  EXPECT_THROW(m.lagrangian("G"), FormatError);
}

TEST(Model, ArityErrors) {
  std::string text = R"(
[model]
chart = parametric
dim = 2
order = 2
[form F]
E1 = v1'
)";
  EXPECT_THROW(parse(text), ArityError);
  std::string extra = text + "E2 = v2'\nE3 = v1\n";
  EXPECT_THROW(parse(extra), ArityError);
}

TEST(Model, FormatErrorsReportLines) {
  std::string text = "[model]\nchart = parametric\ndim = 2\norder = 2\ncolour = blue\n";
  try {
    parse(text);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("test.model:5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(std::string(kSmall) + "\n[form F]\nE1 = v1\nE2 = v2\n"), FormatError);
  EXPECT_THROW(parse("[constants]\nk = 1\n"), FormatError);
  EXPECT_THROW(parse("[model]\nchart = sideways\ndim = 2\norder = 2\n"), FormatError);
  EXPECT_THROW(parse("[model]\nchart = parametric\ndim = 2\norder = 2\nsignature = +-\n"),
               FormatError);
  EXPECT_THROW(parse("[model]\nchart = parametric\ndim = 2\norder = 2\n[form F]\nE1 = v3\nE2 = 0\n"),
               ParseError);
  EXPECT_THROW(parse("[model]\nchart = parametric\ndim = 2\norder = 2\n[form F]\nE1 = q\nE2 = 0\n"),
               ParseError);
  EXPECT_THROW(load_model("/nonexistent/file.model"), FormatError);
}

TEST(Model, ParseErrorsPointIntoTheFile) {
  std::string text = "[model]\nchart = parametric\ndim = 1\norder = 1\n[form F]\nE1 = v1 +\n";
  try {
    parse(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6);
  }
}

TEST(Model, SaveLoadIsIdempotentByValue) {
  for (const std::string& file : {std::string("top2d.model"), std::string("oscillator.model"),
                                  std::string("damped.model")}) {
    Model a = load_model(model_path(file));
    Model b = parse_model(save_model(a), "saved");
    Model c = parse_model(save_model(b), "saved twice");
    EXPECT_EQ(save_model(b), save_model(c));
    EXPECT_EQ(a.chart, b.chart);
    EXPECT_EQ(a.metric, b.metric);
    EXPECT_EQ(a.constants, b.constants);
    ASSERT_EQ(a.forms.size(), b.forms.size());
    for (const auto& [name, F] : a.forms) {
      const DynamicalForm& G = b.form(name);
      ASSERT_EQ(F.size(), G.size());
      JetChart ch = F.chart();
      for (int k = 0; k < 5; ++k) {
        JetPoint p = sample_jetpoint(ch, ch.kind == kP ? SampleRanges::admissible_parametric(ch.order)
                                                       : SampleRanges::admissible_homogeneous(ch.order),
                                     derive_seed(4, k));
        ConstantMap consts{{"mu", 1.1}, {"k", 2.5}};
        EXPECT_EQ(evaluate(F.components(), p, consts), evaluate(G.components(), p, consts));
      }
    }
    for (const auto& [name, L] : a.lagrangians) {
      JetPoint p = sample_jetpoint(L.chart, L.chart.kind == kP
                                                ? SampleRanges::admissible_parametric(L.chart.order)
                                                : SampleRanges::admissible_homogeneous(L.chart.order),
                                   9);
      EXPECT_EQ(evaluate(L.expr, p, {{"mu", 1.1}, {"k", 2.5}}),
                evaluate(b.lagrangian(name).expr, p, {{"mu", 1.1}, {"k", 2.5}}));
    }
  }
}

TEST(Model, SaveToFile) {
  Model a = parse(kSmall);
  std::string path = ::testing::TempDir() + "varjet_small.model";
  save_model(a, path);
  Model b = load_model(path);
  EXPECT_EQ(save_model(a), save_model(b));
  std::remove(path.c_str());
}
