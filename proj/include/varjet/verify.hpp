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
#include <vector>

#include "varjet/report.hpp"

namespace varjet {

struct AcceptanceOptions {
  std::uint64_t seed = 0xC0FFEE;
  // Adds the runtime bound of criterion 5 and elapsed times; the output is
  // then no longer reproducible byte for byte.
  bool timing = false;
  // Criterion 12 reruns criteria 1-11 and compares the serialized reports.
  bool determinism = true;
};

// Criteria 1-12, one report each, in order.
std::vector<Report> run_acceptance(const AcceptanceOptions& options = {});
Report run_criterion(int number, const AcceptanceOptions& options = {});

}  // namespace varjet
