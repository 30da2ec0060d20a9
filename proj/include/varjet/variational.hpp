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

#include <cmath>
#include <utility>
#include <vector>

#include "varjet/forms.hpp"

namespace varjet {

// E_i = sum_{k=0}^{K} (-1)^k D^k dL/dv^i_(k-1), K the Lagrangian order.
DynamicalForm euler_poisson(const LagrangianDef& L);

// Residual tensor R[r][i][j], r = 0..s, with per-entry scales
// max(1, |terms|) for relative comparison.
struct HelmholtzTensor {
  int s = 0;
  int dim = 0;
  std::vector<double> residual;
  std::vector<double> scale;

  double at(int r, int i, int j) const { return residual[slot(r, i, j)]; }
  double relative(int r, int i, int j) const {
    return std::abs(residual[slot(r, i, j)]) / scale[slot(r, i, j)];
  }
  double max_abs() const;
  double max_relative() const;
  std::size_t slot(int r, int i, int j) const {
    return static_cast<std::size_t>((r * dim + i) * dim + j);
  }
};

enum class HelmholtzVariant {
  // dE_i/dv^j_(r-1) - sum_{k=r}^{s} (-1)^k C(k,r) D^{k-r} dE_j/dv^i_(k-1), r = 0..s
  criterion,
  // Same rows for r >= 1; row 0 replaced by the antisymmetric block
  // dE_i/dx^j - dE_j/dx^i + sum_{k=0}^{s} (-1)^k D^k (dE_i/dv^j_(k-1) - dE_j/dv^i_(k-1)).
  split
};

// Residual trees built once, evaluated at many points.
class HelmholtzSystem {
 public:
  explicit HelmholtzSystem(const DynamicalForm& F,
                           HelmholtzVariant variant = HelmholtzVariant::criterion);

  HelmholtzTensor evaluate(const JetPoint& p, const ConstantMap& consts = {}) const;
  int s() const { return s_; }
  int point_order() const { return 2 * s_; }
  const JetChart& chart() const { return chart_; }

 private:
  struct Term {
    int root;
    double coeff;
  };

  JetChart chart_;
  int s_ = 0;
  int dim_ = 0;
  Tape tape_;
  std::vector<std::vector<Term>> entries_;
};

HelmholtzTensor helmholtz_residuals(const DynamicalForm& F, const JetPoint& p,
                                    const ConstantMap& consts = {});
HelmholtzTensor helmholtz_residuals_split(const DynamicalForm& F, const JetPoint& p,
                                          const ConstantMap& consts = {});

// Z1 = u^b dL/du^b + 2 udot^b dL/dudot^b - L,  Z2 = u^b dL/dudot^b.
std::pair<Expr, Expr> zermelo_expressions(const LagrangianDef& L);
std::pair<double, double> zermelo_residuals(const LagrangianDef& L, const JetPoint& p,
                                            const ConstantMap& consts = {});

}  // namespace varjet
