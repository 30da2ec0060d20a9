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

#include "varjet/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace varjet {

bool ReportPart::pass() const { return lower ? value > bound : value <= bound; }

double ReportPart::score() const {
  const double inf = std::numeric_limits<double>::infinity();
  if (std::isnan(value)) return std::numeric_limits<double>::quiet_NaN();
  if (lower) {
    if (value > bound) return bound <= 0.0 ? 0.0 : bound / value;
    return inf;
  }
  if (bound == 0.0) return value == 0.0 ? 0.0 : inf;
  return value / bound;
}

Report make_report(const std::string& check, std::uint64_t seed, int samples, double residual,
                   double tolerance) {
  Report r;
  r.check = check;
  r.seed = seed;
  r.samples = samples;
  r.max_abs_residual = residual;
  r.tolerance = tolerance;
  return r;
}

Report combine_parts(const std::string& check, std::uint64_t seed, int samples,
                     std::vector<ReportPart> parts) {
  Report r = make_report(check, seed, samples, 0.0, 1.0);
  bool all_pass = true;
  for (const ReportPart& p : parts) {
    double s = p.score();
    if (std::isnan(s) || std::isnan(r.max_abs_residual))
      r.max_abs_residual = std::numeric_limits<double>::quiet_NaN();
    else
      r.max_abs_residual = std::max(r.max_abs_residual, s);
    all_pass = all_pass && p.pass();
  }
  if (!all_pass && r.max_abs_residual <= 1.0)
    r.max_abs_residual = std::numeric_limits<double>::infinity();
  r.parts = std::move(parts);
  return r;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string to_json(const Report& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["max_abs_residual"] = number(r.max_abs_residual);
  j["tolerance"] = number(r.tolerance);
  j["pass"] = r.pass();
  if (with_timing && r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  if (!r.parts.empty()) {
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (const ReportPart& p : r.parts) {
      nlohmann::ordered_json pj;
      pj["name"] = p.name;
      pj["value"] = number(p.value);
      pj[p.lower ? "must_exceed" : "bound"] = number(p.bound);
      pj["pass"] = p.pass();
      parts.push_back(pj);
    }
    j["parts"] = parts;
  }
  for (const auto& [k, v] : r.notes) j["notes"][k] = v;
  return j.dump();
}

}  // namespace varjet
