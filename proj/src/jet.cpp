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

#include "varjet/jet.hpp"

#include <algorithm>
#include <cmath>

#include "varjet/error.hpp"

namespace varjet {

const char* to_string(ChartKind kind) {
  return kind == ChartKind::parametric ? "parametric" : "homogeneous";
}

JetChart::JetChart(ChartKind k, int dims, int ord) : kind(k), n(dims), order(ord) {
  if (n < 1) throw ChartError("chart dimension must be at least 1");
  if (order < 0) throw ChartError("chart order must be non-negative");
}

bool JetChart::contains(const Coordinate& c) const {
  return c.kind == kind && c.index >= first_index() && c.index <= n &&
         c.order >= -1 && c.order <= order - 1;
}

std::vector<Coordinate> JetChart::coordinates() const {
  std::vector<Coordinate> out;
  for (int r = -1; r <= order - 1; ++r)
    for (int i = first_index(); i <= n; ++i) out.push_back({kind, i, r});
  return out;
}

JetChart JetChart::companion() const {
  return JetChart(kind == ChartKind::parametric ? ChartKind::homogeneous
                                                : ChartKind::parametric,
                  n, order);
}

const char* JetChart::independent_name() const {
  return kind == ChartKind::parametric ? "t" : "zeta";
}

std::string JetChart::coordinate_name(const Coordinate& c) const {
  std::string s;
  if (c.order < 0) {
    s = (c.kind == ChartKind::parametric ? "x" : "X") + std::to_string(c.index);
  } else {
    s = (c.kind == ChartKind::parametric ? "v" : "u") + std::to_string(c.index);
    s.append(static_cast<std::size_t>(c.order), '\'');
  }
  return s;
}

JetPoint::JetPoint(const JetChart& chart, double t_value)
    : chart_(chart),
      t_(t_value),
      values_(static_cast<std::size_t>((chart.order + 1) * chart.dim()), 0.0) {}

std::size_t JetPoint::slot(const Coordinate& c) const {
  if (c.kind != chart_.kind)
    throw ChartError("coordinate of a " + std::string(to_string(c.kind)) +
                     " chart used with a " + to_string(chart_.kind) + " point");
  if (c.index < chart_.first_index() || c.index > chart_.n)
    throw ChartError("coordinate index " + std::to_string(c.index) +
                     " outside the chart");
  if (c.order < -1 || c.order > chart_.order - 1)
    throw EvaluationError("jet point of order " + std::to_string(chart_.order) +
                          " has no coordinate " + chart_.coordinate_name(c));
  return static_cast<std::size_t>((c.order + 1) * chart_.dim() +
                                  (c.index - chart_.first_index()));
}

double JetPoint::operator[](const Coordinate& c) const { return values_[slot(c)]; }

double& JetPoint::at(const Coordinate& c) { return values_[slot(c)]; }

std::vector<double> JetPoint::block(int order) const {
  std::vector<double> out;
  for (int i = chart_.first_index(); i <= chart_.n; ++i)
    out.push_back(value(i, order));
  return out;
}

void JetPoint::set_block(int order, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != chart_.dim())
    throw ChartError("block size does not match chart dimension");
  for (int i = 0; i < chart_.dim(); ++i) set(chart_.first_index() + i, order, v[i]);
}

Metric::Metric(std::vector<int> eta, int orientation)
    : eta_(std::move(eta)), orientation_(orientation) {
  if (eta_.empty()) throw DomainError("metric needs at least one entry");
  for (int e : eta_)
    if (e != 1 && e != -1) throw DomainError("metric entries must be +1 or -1");
  if (orientation_ != 1 && orientation_ != -1)
    throw DomainError("orientation must be +1 or -1");
}

Metric Metric::minkowski(int dim) {
  std::vector<int> eta(static_cast<std::size_t>(dim), -1);
  eta[0] = 1;
  return Metric(eta);
}

Metric Metric::parse_signature(const std::string& signs, int orientation) {
  std::vector<int> eta;
  for (char ch : signs) {
    if (ch == '+') eta.push_back(1);
    else if (ch == '-') eta.push_back(-1);
    else throw FormatError("signature must consist of '+' and '-': " + signs);
  }
  return Metric(eta, orientation);
}

std::string Metric::signature() const {
  std::string s;
  for (int e : eta_) s.push_back(e > 0 ? '+' : '-');
  return s;
}

double Metric::dot(const std::vector<double>& a, const std::vector<double>& b) const {
  if (a.size() != eta_.size() || b.size() != eta_.size())
    throw DomainError("vector size does not match metric dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < eta_.size(); ++k) s += eta_[k] * a[k] * b[k];
  return s;
}

std::vector<double> Metric::lower(const std::vector<double>& a) const {
  if (a.size() != eta_.size())
    throw DomainError("vector size does not match metric dimension");
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = eta_[k] * a[k];
  return out;
}

Metric Metric::spatial() const {
  if (eta_.size() < 2) throw DomainError("metric has no spatial block");
  return Metric(std::vector<int>(eta_.begin() + 1, eta_.end()));
}

int permutation_sign(const std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return 0;
      if (idx[a] > idx[b]) sign = -sign;
    }
  return sign;
}

double Metric::epsilon_lower(const std::vector<int>& idx) const {
  if (idx.size() != eta_.size()) throw DomainError("epsilon needs dim indices");
  return orientation_ * permutation_sign(idx);
}

double Metric::epsilon_upper(const std::vector<int>& idx) const {
  double s = epsilon_lower(idx);
  for (int a : idx) s *= eta_.at(a);
  return s;
}

double Metric::epsilon_contraction() const {
  std::vector<int> idx(eta_.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  double total = 0.0;
  std::sort(idx.begin(), idx.end());
  do {
    total += epsilon_lower(idx) * epsilon_upper(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return total;
}

std::vector<double> Metric::cross(const std::vector<double>& a,
                                  const std::vector<double>& b) const {
  if (dim() != 3 || a.size() != 3 || b.size() != 3)
    throw DomainError("cross product needs a 3-dimensional metric");
  std::vector<double> out(3, 0.0);
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be)
      for (int ga = 0; ga < 3; ++ga) {
        double e = epsilon_lower({al, be, ga});
        if (e != 0.0) out[al] += e * a[be] * b[ga];
      }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

int Rng::integer(int lo, int hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(gen_() % span);
}

SampleRanges SampleRanges::uniform(int order, Interval iv) {
  SampleRanges r;
  r.by_order.assign(static_cast<std::size_t>(order + 1), iv);
  return r;
}

SampleRanges SampleRanges::admissible_parametric(int order) {
  SampleRanges r = uniform(order, {-1.0, 1.0});
  if (order >= 1) r.by_order[1] = {-0.5, 0.5};
  return r;
}

SampleRanges SampleRanges::admissible_homogeneous(int order) {
  SampleRanges r = uniform(order, {-1.0, 1.0});
  if (order >= 1) {
    r.by_order[1] = {-0.7, 0.7};
    r.overrides[{ChartKind::homogeneous, 0, 0}] = {1.2, 2.0};
  }
  return r;
}

namespace {

void check_interval(const Interval& iv) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi)
    throw RangeError("empty or inverted sampling interval");
}

}  // namespace

JetPoint sample_jetpoint(const JetChart& chart, const SampleRanges& ranges,
                         std::uint64_t seed) {
  if (static_cast<int>(ranges.by_order.size()) < chart.order + 1)
    throw RangeError("sampling ranges do not cover every jet order");
  check_interval(ranges.independent);
  for (const auto& iv : ranges.by_order) check_interval(iv);
  for (const auto& [c, iv] : ranges.overrides) check_interval(iv);

  Rng rng(seed);
  JetPoint p(chart, rng.uniform(ranges.independent.lo, ranges.independent.hi));
  for (const Coordinate& c : chart.coordinates()) {
    Interval iv = ranges.by_order[static_cast<std::size_t>(c.order + 1)];
    auto it = ranges.overrides.find(c);
    if (it != ranges.overrides.end()) iv = it->second;
    p.at(c) = rng.uniform(iv.lo, iv.hi);
  }
  return p;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < c.size(); ++k)
    d.c.push_back(static_cast<double>(k) * c[k]);
  return d;
}

double Polynomial::derivative_at(double s, int k) const {
  Polynomial p = *this;
  for (int j = 0; j < k; ++j) p = p.derivative();
  return p(s);
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  out.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t k = 0; k < a.c.size(); ++k) out.c[k] += a.c[k];
  for (std::size_t k = 0; k < b.c.size(); ++k) out.c[k] += b.c[k];
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  if (a.c.empty() || b.c.empty()) return out;
  out.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
  Polynomial acc;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * inner + Polynomial({*it});
  return acc;
}

JetPoint prolong_curve(ChartKind kind, const std::vector<Polynomial>& coords,
                       double at, int order) {
  int dim = static_cast<int>(coords.size());
  int n = kind == ChartKind::parametric ? dim : dim - 1;
  JetChart chart(kind, n, order);
  JetPoint p(chart, at);
  for (int k = 0; k < dim; ++k) {
    Polynomial d = coords[static_cast<std::size_t>(k)];
    for (int r = -1; r <= order - 1; ++r) {
      p.set(chart.first_index() + k, r, d(at));
      d = d.derivative();
    }
  }
  return p;
}

}  // namespace varjet
