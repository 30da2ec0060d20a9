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

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "varjet/normal_forms.hpp"

namespace varjet {

// Lorentz generator on the parametric chart (t, x, v, v'):
//   X = -(pi.x) d_t + (g00 t pi^j + Omega_ij x^i) d_{x^j}
//       + (g00 pi^j + (pi.v) v^j + Omega_ij v^i) d_{v^j}
//       + (2 (pi.v) w^j + (pi.w) v^j + Omega_ij w^i) d_{w^j}
// with w = v', dots taken with the spatial block of the metric.
struct Generator {
  Eigen::MatrixXd omega;
  Eigen::VectorXd pi;
  Metric metric;
  DiffOperator op;

  int n() const { return static_cast<int>(pi.size()); }
};

Generator lorentz_generator(const Eigen::MatrixXd& omega, const Eigen::VectorXd& pi,
                            const Metric& metric);

// Random generator with entries of omega and pi uniform in [-scale, scale].
Generator random_generator(int n, const Metric& metric, Rng& rng, double scale = 1.0);

struct SymmetryResidual {
  JetPoint point;
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd Xi;
  Eigen::MatrixXd Pi;
  Eigen::VectorXd residual;

  double max_abs() const { return residual.cwiseAbs().maxCoeff(); }
};

struct LsqDefect {
  double defect = 0.0;
  Eigen::VectorXd residual;
};

// A, k and the images X(A), X(k) under the generator basis, compiled once
// for a shape so that many generators can be tested at the same point.
class SymmetryProbe {
 public:
  SymmetryProbe(const Shape3& S, const Metric& metric);

  struct PointData {
    JetPoint point;
    Eigen::MatrixXd A;
    Eigen::VectorXd k;
    // Images under the basis generators: first the rotations E_ij - E_ji,
    // i < j, then the boosts e_i.
    std::vector<Eigen::MatrixXd> XA;
    std::vector<Eigen::VectorXd> Xk;
  };

  int n() const { return n_; }
  PointData at(const JetPoint& p, const ConstantMap& consts = {}) const;

  // Phi = [X(A) + 2 (pi.v) A + (A v) (x) pi_low - A Omega] A^-1,
  // Pi = 2 (A v') (x) pi_low + (pi.v') A, Xi = -k (x) pi_low,
  // residual = Phi k - Xi v - Pi v' - X(k).
  SymmetryResidual exact2d(const PointData& d, const Generator& G) const;
  // Least-squares defect of the same linear system with Phi, Xi, Pi free.
  LsqDefect lsq(const PointData& d, const Generator& G) const;

 private:
  void images(const PointData& d, const Generator& G, Eigen::MatrixXd& XA,
              Eigen::VectorXd& Xk) const;

  int n_;
  Metric metric_;
  int basis_size_ = 0;
  Tape tape_;
};

SymmetryResidual symmetry_residual_exact2d(const Shape3& S, const Generator& G,
                                           const JetPoint& p, const ConstantMap& consts = {});
LsqDefect symmetry_residual_lsq(const Shape3& S, const Generator& G, const JetPoint& p,
                                const ConstantMap& consts = {});

// PDE system for a = A_12(v1, v2) with R = v1 d2 - v2 d1, V = v1 d1 + v2 d2,
// P_i = d_i - v_i V:
//   rotation_1 = R d1 a + d2 a - (d1 a / a) R a
//   rotation_2 = R d2 a - d1 a - (d2 a / a) R a
//   boost_ii   = P_i d_i a - v_i d_i a - V a - (d_i a / a) P_i a - 3 a
//   boost_ij   = P_i d_j a - v_i d_j a - (d_j a / a) P_i a,  i != j
// plus f_equation = (1 - y) f'_y - f - 3 for f = V a / a, y = v1^2 + v2^2 > 0.
// The point must be a parametric 2-dimensional jet of order >= 1.
std::map<std::string, double> appendix_pde_residuals(const Expr& a, const JetPoint& p,
                                                     const ConstantMap& consts = {});

// (1 - y) f'(y) - f(y) - 3 for f written in the parametric independent
// variable t, read as y.
double f_equation_residual(const Expr& f, double y, const ConstantMap& consts = {});

struct NogoResult {
  double certificate = 0.0;
  std::vector<double> omega;
  int trials = 0;
};

// max over sampled omega in [-1, 1]^3 of (a x omega)^2 + [a v omega]^2 in a
// 3-dimensional metric, with (a x omega)^2 = a.a omega.omega - (a.omega)^2 and
// [a v omega] = a^i (v x omega)_i.
NogoResult nogo_certificate(const std::vector<double>& a, const std::vector<double>& v,
                            const Metric& metric, int trials, std::uint64_t seed);

}  // namespace varjet
