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
#include <string>
#include <vector>

#include "varjet/forms.hpp"

namespace varjet {

struct CorpusEntry {
  std::string name;
  LagrangianDef lagrangian;
  // L = alpha(t, x, v).v' + beta(t, x, v); the Euler-Poisson form then has
  // order at most 3.
  bool affine_in_w = false;
};

// Polynomial Lagrangian with coefficients k/3, |k| <= 4, in (t, x, v) and,
// for order 2, v' = w. The general order-2 family has a w-quadratic part with
// positive diagonal plus cubic w terms.
LagrangianDef random_polynomial_lagrangian(int n, int order, bool affine_in_w, Rng& rng);

// Entries cycle through n = 1, 2, 3 and orders 1, 2 with both order-2
// families represented.
std::vector<CorpusEntry> lagrangian_corpus(int count, std::uint64_t seed);

}  // namespace varjet
