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

#include <vector>

#include "varjet/forms.hpp"

namespace varjet {

// Parametric jet of order <= 3 seen from a homogeneous jet, with t = X0 and
// tdot = u0:
//   v = u / tdot,  v' = (tdot udot - tddot u) / tdot^3,
//   v'' = (tdot^2 uddot - 3 tdot tddot udot + (3 tddot^2 - tdot tdddot) u) / tdot^5.
JetPoint project_jet(const JetPoint& p, int order);

// The same formulas as substitution targets, for parametric coordinates of
// order <= `order` - 1 and the independent variable.
Bindings projection_bindings(int n, int order);

// L0 = (L o p) * u0 for L of order <= 2.
LagrangianDef lift_lagrangian(const LagrangianDef& L);

// Homogeneous expressions E0 = -u^i (E_i o p), E_i = u0 (E_i o p).
DynamicalForm lift_equation_form(const DynamicalForm& E);
std::vector<double> lift_equation(const DynamicalForm& E, const JetPoint& p,
                                  const ConstantMap& consts = {});

}  // namespace varjet
