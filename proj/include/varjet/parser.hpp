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

#include <set>
#include <string>

#include "varjet/expr.hpp"

namespace varjet {

struct ParseOptions {
  // When set, identifiers outside the chart must be listed here.
  const std::set<std::string>* constants = nullptr;
  // Position of the text inside a larger file, for error reports.
  int line = 1;
  int column = 1;
};

// Grammar:
//   expr     := term (('+' | '-') term)*
//   term     := factor (('*' | '/') factor)*
//   factor   := '-' factor | power
//   power    := base ('^' exponent)?
//   base     := number | ident | '(' expr ')' | 'sqrt' '(' expr ')'
//   exponent := sign? number | '(' sign? integer ('/' integer)? ')'
// so -a^2 reads -(a^2) and v1^2/2 reads (v1^2)/2.
Expr parse_expression(const std::string& text, const JetChart& chart,
                      const ParseOptions& options = {});

std::string render_expression(const Expr& e);

}  // namespace varjet
