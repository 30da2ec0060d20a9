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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "varjet/forms.hpp"

namespace varjet {

// Brackets follow the normalized convention: a_[ij] = (a_ij - a_ji)/2,
// a_(ij) = (a_ij + a_ji)/2, and the three-index versions average over the
// six permutations. Below, w = v', D_x = d_t + v.d_x and D_v = D_x + w.d_v.

// E = A.v'' + (v'.d_v)A.v' + B.v' + c with A skew and A, B, c in (t, x, v).
struct Shape3 {
  JetChart chart;
  ExprMatrix A;
  ExprMatrix B;
  ExprVector c;
};

// E = M.w'' + (w'.d_w)M.w' + A.w' + 2 (D_v M).w' + b with M symmetric, A skew
// and M, A, b in (t, x, v, w).
struct Shape4 {
  JetChart chart;
  ExprMatrix M;
  ExprMatrix A;
  ExprVector b;
};

struct ExtractionOptions {
  int samples = 20;
  std::uint64_t seed = 0xC0FFEE;
  double tolerance = 1e-9;
  ConstantMap consts;
};

// Structure is checked at sampled points; violations throw NormalFormError.
Shape3 extract_shape3(const DynamicalForm& F, const ExtractionOptions& options = {});
Shape4 extract_shape4(const DynamicalForm& F, const ExtractionOptions& options = {});

// k = (v'.d_v)A.v' + B.v' + c, everything of E except A.v''.
ExprVector shape3_k(const Shape3& S);

using ConditionValues = std::map<std::string, std::vector<double>>;

// Named residual tensors compiled for repeated evaluation. Two-index tensors
// are flattened as i*n + j, three-index ones as (i*n + j)*n + k.
class ConditionSet {
 public:
  ConditionSet() = default;
  explicit ConditionSet(std::vector<std::pair<std::string, ExprVector>> conditions);

  ConditionValues evaluate(const JetPoint& p, const ConstantMap& consts = {}) const;
  const std::vector<std::pair<std::string, ExprVector>>& conditions() const {
    return conditions_;
  }
  const ExprVector& operator[](const std::string& name) const;

 private:
  std::vector<std::pair<std::string, ExprVector>> conditions_;
  Tape tape_;
};

double max_abs(const ConditionValues& values);

// Names: i', ii', iv', v', vi', vii.
ConditionSet shape3_conditions(const Shape3& S);
// Names: wM, j, i, ii, jjj, iv, v, vi and the relation "identity".
ConditionSet shape4_conditions(const Shape4& S);

ConditionValues shape3_condition_residuals(const Shape3& S, const JetPoint& p,
                                           const ConstantMap& consts = {});
ConditionValues shape4_condition_residuals(const Shape4& S, const JetPoint& p,
                                           const ConstantMap& consts = {});

// From an order-2 Lagrangian:
//   M_ij = L_{w_i w_j},  A_ij = L_{w_i v_j} - L_{w_j v_i},
//   b_i = L_{x_i} - D_v L_{v_i} + D_v^2 L_{w_i}.
// The third-order target assumes L affine in w: with alpha_i = L_{w_i} and
// beta = L at w = 0,
//   B_ik = alpha_{i,x_k} + alpha_{k,x_i} + 2 alpha_{i,v_k t} - alpha_{k,v_i t}
//          + v^l (2 alpha_{i,v_k x_l} - alpha_{k,v_i x_l}) - beta_{v_i v_k},
//   c_i  = beta_{x_i} - beta_{v_i t} - v^l beta_{v_i x_l} + alpha_{i,tt}
//          + 2 v^l alpha_{i,x_l t} + v^k v^l alpha_{i,x_k x_l}.
Shape3 shape3_from_lagrangian(const LagrangianDef& L);
Shape4 shape4_from_lagrangian(const LagrangianDef& L);

enum class ShapeTarget { shape3, shape4 };
std::variant<Shape3, Shape4> coefficients_from_lagrangian(const LagrangianDef& L,
                                                          ShapeTarget target);

struct SelfAdjointResiduals {
  std::vector<double> first;   // (i, j, k)
  std::vector<double> second;  // (i, j)
};

// d_{x[i} Psi_{j]k} + d_{x_k} Psi_ij and d_x ^ psi + d_t Psi for E = Psi.v + psi.
// With normalized = false the brackets drop the 1/2, which is the reading
// equivalent to the Helmholtz conditions on first-order forms.
SelfAdjointResiduals selfadjoint_first_order_residuals(const ExprMatrix& Psi,
                                                       const ExprVector& psi,
                                                       const JetPoint& p,
                                                       const ConstantMap& consts = {},
                                                       bool normalized = true);

}  // namespace varjet
