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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varjet/forms.hpp"
#include "varjet/jet.hpp"

namespace varjet {

// A model file bundles a chart, a metric, named constants, Lagrangians and
// dynamical forms:
//
//   [model]
//   chart = parametric        # or homogeneous
//   dim = 2
//   order = 3
//   signature = +--           # optional, n + 1 signs
//   orientation = -1          # optional sign of eps_{01..n}
//
//   [constants]
//   mu = free                 # or a number
//
//   [lagrangian L1]           # optional chart tag: [lagrangian LH0 homogeneous]
//   L = ...
//
//   [form E10]
//   E1 = ...                  # E0 .. En in a homogeneous chart
//   E2 = ...
//
// The chart tag selects between the declared chart and its companion of the
// other kind, with the same dimension and order.
struct Model {
  JetChart chart;
  Metric metric;
  std::map<std::string, std::optional<double>> constants;
  std::map<std::string, LagrangianDef> lagrangians;
  std::map<std::string, DynamicalForm> forms;

  const DynamicalForm& form(const std::string& name) const;
  const LagrangianDef& lagrangian(const std::string& name) const;
  bool has_form(const std::string& name) const { return forms.count(name) > 0; }
  bool has_lagrangian(const std::string& name) const { return lagrangians.count(name) > 0; }

  ConstantMap fixed_constants() const;
  std::vector<std::string> free_constants() const;
  JetChart chart_of(ChartKind kind) const;
};

Model parse_model(const std::string& text, const std::string& source = "<model>");
Model load_model(const std::string& path);
std::string save_model(const Model& model);
void save_model(const Model& model, const std::string& path);

}  // namespace varjet
