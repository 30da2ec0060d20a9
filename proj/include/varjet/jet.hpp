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

#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace varjet {

enum class ChartKind { parametric, homogeneous };

const char* to_string(ChartKind kind);

// Jet coordinate (index, order). order -1 is the position, 0 the first
// derivative, r the (r+1)-th derivative. Parametric indices run 1..n,
// homogeneous indices 0..n.
struct Coordinate {
  ChartKind kind = ChartKind::parametric;
  int index = 1;
  int order = -1;

  auto operator<=>(const Coordinate&) const = default;
};

struct JetChart {
  ChartKind kind = ChartKind::parametric;
  int n = 1;
  // A chart of order k carries derivatives up to order k, i.e. r <= k - 1.
  int order = 0;

  JetChart() = default;
  JetChart(ChartKind kind, int n, int order);

  int dim() const { return kind == ChartKind::parametric ? n : n + 1; }
  int first_index() const { return kind == ChartKind::parametric ? 1 : 0; }
  int last_index() const { return n; }
  bool contains(const Coordinate& c) const;
  std::vector<Coordinate> coordinates() const;
  JetChart with_order(int k) const { return JetChart(kind, n, k); }
  // The chart of the other kind describing the same configuration space.
  JetChart companion() const;

  std::string coordinate_name(const Coordinate& c) const;
  const char* independent_name() const;

  Coordinate position(int i) const { return {kind, i, -1}; }
  Coordinate velocity(int i, int r = 0) const { return {kind, i, r}; }

  bool operator==(const JetChart&) const = default;
};

class JetPoint {
 public:
  JetPoint() = default;
  explicit JetPoint(const JetChart& chart, double t_value = 0.0);

  const JetChart& chart() const { return chart_; }
  double t_value() const { return t_; }
  void set_t_value(double t) { t_ = t; }

  bool has(const Coordinate& c) const { return chart_.contains(c); }
  double operator[](const Coordinate& c) const;
  double& at(const Coordinate& c);
  double value(int index, int order) const {
    return (*this)[{chart_.kind, index, order}];
  }
  void set(int index, int order, double v) { at({chart_.kind, index, order}) = v; }

  // Components (index first_index..n) at one derivative order.
  std::vector<double> block(int order) const;
  void set_block(int order, const std::vector<double>& v);

  const std::vector<double>& raw() const { return values_; }

 private:
  std::size_t slot(const Coordinate& c) const;

  JetChart chart_;
  double t_ = 0.0;
  std::vector<double> values_;
};

// Diagonal metric with entries +-1 and the sign of the Levi-Civita symbol
// eps_{01..n} with all indices down.
class Metric {
 public:
  Metric() : Metric({1, -1, -1}) {}
  explicit Metric(std::vector<int> eta, int orientation = 1);

  static Metric minkowski(int dim);
  static Metric parse_signature(const std::string& signs, int orientation = 1);

  int dim() const { return static_cast<int>(eta_.size()); }
  int eta(int a) const { return eta_.at(a); }
  const std::vector<int>& entries() const { return eta_; }
  int orientation() const { return orientation_; }
  Metric with_orientation(int s) const { return Metric(eta_, s); }
  std::string signature() const;

  double dot(const std::vector<double>& a, const std::vector<double>& b) const;
  std::vector<double> lower(const std::vector<double>& a) const;
  // Spatial block diag(eta_1..eta_n).
  Metric spatial() const;

  double epsilon_lower(const std::vector<int>& idx) const;
  double epsilon_upper(const std::vector<int>& idx) const;
  double epsilon_contraction() const;
  // (a x b)_alpha = eps_{alpha beta gamma} a^beta b^gamma, dim 3 only.
  std::vector<double> cross(const std::vector<double>& a,
                            const std::vector<double>& b) const;

  bool operator==(const Metric&) const = default;

 private:
  std::vector<int> eta_;
  int orientation_ = 1;
};

int permutation_sign(const std::vector<int>& idx);

// splitmix64 finalizer, used to derive per-sample seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// mt19937_64; uniform draws are (bits >> 11) * 2^-53 mapped onto [lo, hi].
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi);
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

struct SampleRanges {
  Interval independent{-1.0, 1.0};
  // Entry r + 1 holds the interval for derivative order r.
  std::vector<Interval> by_order;
  std::map<Coordinate, Interval> overrides;

  static SampleRanges uniform(int order, Interval iv);
  // 1 - |v|^2 >= 0.5 for the parametric top.
  static SampleRanges admissible_parametric(int order);
  // u0 in [1.2, 2], u^i in [-0.7, 0.7]: timelike for diag(1,-1,-1).
  static SampleRanges admissible_homogeneous(int order);
};

JetPoint sample_jetpoint(const JetChart& chart, const SampleRanges& ranges,
                         std::uint64_t seed);

struct Polynomial {
  std::vector<double> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

  double operator()(double s) const;
  Polynomial derivative() const;
  double derivative_at(double s, int k) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial compose(const Polynomial& inner) const;
};

// Jet of the polynomial curve s -> (coords[0](s), ...) at s = at. The chart
// dimension follows from coords.size().
JetPoint prolong_curve(ChartKind kind, const std::vector<Polynomial>& coords,
                       double at, int order);

}  // namespace varjet
