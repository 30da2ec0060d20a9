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
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varjet {

// A bound on one measured quantity. Upper bounds pass when value <= bound,
// lower bounds when value > bound.
struct ReportPart {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool lower = false;

  bool pass() const;
  // value / bound for upper bounds and bound / value for lower bounds, so
  // that a part passes when its score is at most 1.
  double score() const;
};

struct Report {
  std::string check;
  std::uint64_t seed = 0;
  int samples = 0;
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  std::optional<double> elapsed_ms;
  std::vector<ReportPart> parts;
  std::vector<std::pair<std::string, std::string>> notes;

  // NaN residuals fail.
  bool pass() const { return max_abs_residual <= tolerance; }
};

// Single-bound report.
Report make_report(const std::string& check, std::uint64_t seed, int samples, double residual,
                   double tolerance);

// Several bounds: the residual is the largest part score and the tolerance 1.
Report combine_parts(const std::string& check, std::uint64_t seed, int samples,
                     std::vector<ReportPart> parts);

// One JSON object, no trailing newline. Timing is written only on request.
std::string to_json(const Report& r, bool with_timing = false);

}  // namespace varjet
