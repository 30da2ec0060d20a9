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
#include <string>

#include "varjet/expr.hpp"
#include "varjet/parser.hpp"

namespace varjet::testing {

inline std::string model_path(const std::string& file) {
  return std::string(VARJET_MODELS_DIR) + "/" + file;
}

inline Expr P(const std::string& text, const JetChart& chart) {
  return parse_expression(text, chart);
}

// Random expression over the coordinates of `chart` that stays finite on
// the sampling ranges used in the tests: no division, sqrt of 1 + square.
class TreeGen {
 public:
  TreeGen(const JetChart& chart, Rng& rng) : chart_(chart), rng_(rng), coords_(chart.coordinates()) {}

  Expr operator()(int depth) {
    if (depth == 0 || rng_.uniform() < 0.2) return leaf();
    switch (rng_.integer(0, 5)) {
      case 0: return (*this)(depth - 1) + (*this)(depth - 1);
      case 1: return (*this)(depth - 1) - (*this)(depth - 1);
      case 2: return (*this)(depth - 1) * (*this)(depth - 1);
      case 3: return -(*this)(depth - 1);
      case 4: {
        Expr a = (*this)(depth - 1);
        return Expr::sqrt(Expr(1.0) + a * a);
      }
      default: return Expr::pow((*this)(depth - 1), rng_.integer(2, 3));
    }
  }

 private:
  Expr leaf() {
    int k = rng_.integer(0, static_cast<int>(coords_.size()) + 1);
    if (k < static_cast<int>(coords_.size())) return Expr::coordinate(coords_[static_cast<std::size_t>(k)]);
    if (k == static_cast<int>(coords_.size())) return Expr::independent(chart_.kind);
    return Expr(std::round(rng_.uniform(-3, 3) * 4) / 4);
  }

  JetChart chart_;
  Rng& rng_;
  std::vector<Coordinate> coords_;
};

}  // namespace varjet::testing
