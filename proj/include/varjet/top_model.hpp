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

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "varjet/model.hpp"

namespace varjet {

// Planar relativistic top in 2 + 1 dimensions. With ||u|| = sqrt(u.u),
// (a x b)_alpha = eps_{alpha beta gamma} a^beta b^gamma and indices lowered
// by the metric:
//
//   E10_i = -(*v'')_i / s^3 + 3 (*v')_i (v.v') / s^5
//           - mu / s^3 [s^2 v'_i - (v.v') v_i],          s^2 = g00 + v.v,
//   HOM_a = -(udd x u)_a / ||u||^3 + 3 (ud x u)_a (ud.u) / ||u||^5
//           - mu / ||u||^3 [(u.u) ud_a - (ud.u) u_a],
//   p_a   = (ud x u)_a / ||u||^3 + mu u_a / ||u||,
//
// where (*a)_i = eps_{0ij} a^j. HOM = -D p.
struct TopModel {
  Model model;
  ExprVector momentum;
};

// Diagonal (1, -1, -1) with eps_012 = -1.
Metric top_default_metric();

// Without a value, mu is left as a free constant.
TopModel build_top_model(std::optional<double> mu = std::nullopt,
                         const Metric& metric = top_default_metric());

// Orientation for which the homogeneous Lagrangian LH0 reproduces
// HOM, found by evaluation at sampled points.
int calibrate_orientation(const Metric& metric = top_default_metric(), int samples = 10,
                          std::uint64_t seed = 0xC0FFEE);

// eta3 sigma3 (udd x u / ||u||^3 - 3 (ud.u) ud x u / ||u||^5)
//   + m0 ||u||^-3 [(u.u) ud - (ud.u) u]
DynamicalForm mp_planar_form(const Expr& m0, double sigma3, double eta3,
                             const Metric& metric = top_default_metric());

std::vector<double> conserved_momentum(const std::vector<double>& u,
                                       const std::vector<double>& udot, double mu,
                                       const Metric& metric = top_default_metric());

// The unique v'' with E10(v, v', v'') = 0.
std::array<double, 2> solve_acceleration_parametric(const std::array<double, 2>& v,
                                                    const std::array<double, 2>& vp, double mu,
                                                    const Metric& metric = top_default_metric());

struct ParametricState {
  double t = 0.0;
  std::array<double, 2> x{};
  std::array<double, 2> v{};
  std::array<double, 2> vp{};
};

struct HomogeneousState {
  double zeta = 0.0;
  std::array<double, 3> X{};
  std::array<double, 3> u{};
  std::array<double, 3> ud{};
};

// Homogeneous state of the same world line with u.u = 1 and u.ud = 0.
HomogeneousState homogeneous_from_parametric(const ParametricState& s,
                                             const Metric& metric = top_default_metric());

struct TopConfig {
  double mu = 1.0;
  Metric metric = top_default_metric();
  double h = 1e-3;
  int steps = 1000;
  // Keep every k-th step in the trajectory; the last step is always kept.
  int record_every = 1;
  ParametricState parametric;
  HomogeneousState homogeneous;
};

struct TrajectorySample {
  double param = 0.0;
  // Parametric: t, x1, x2, v1, v2, v1', v2'.
  // Homogeneous: zeta, X0..X2, u0..u2, ud0..ud2.
  std::vector<double> state;
  std::vector<double> momentum;
  double uu_drift = 0.0;
  double p_drift = 0.0;
};

struct Trajectory {
  ChartKind kind = ChartKind::parametric;
  std::vector<TrajectorySample> samples;
  bool halted = false;
  std::string halt_reason;
  double max_p_drift = 0.0;
  double max_uu_drift = 0.0;
};

// Fixed-step classical Runge-Kutta. Leaving 1 + v.v >= 0.05 (resp.
// u.u >= 0.05) halts with the trajectory so far.
Trajectory integrate_parametric(const TopConfig& cfg);
Trajectory integrate_homogeneous(const TopConfig& cfg);

void write_trajectory_csv(const Trajectory& tr, std::ostream& out);

}  // namespace varjet
