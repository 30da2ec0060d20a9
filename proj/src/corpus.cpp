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

#include "varjet/corpus.hpp"

namespace varjet {

namespace {

constexpr ChartKind P = ChartKind::parametric;

Expr coefficient(Rng& rng) {
  int k = 0;
  while (k == 0) k = rng.integer(-4, 4);
  return Expr(k / 3.0);
}

// Sum of `terms` monomials, each a product of `degree` factors drawn from
// vars and 1.
Expr random_poly(const std::vector<Expr>& vars, int degree, int terms, Rng& rng) {
  Expr out(0.0);
  const int choices = static_cast<int>(vars.size());
  for (int k = 0; k < terms; ++k) {
    Expr m = coefficient(rng);
    for (int d = 0; d < degree; ++d) {
      int pick = rng.integer(0, choices);
      if (pick < choices) m = m * vars[static_cast<std::size_t>(pick)];
    }
    out = out + m;
  }
  return out;
}

}  // namespace

LagrangianDef random_polynomial_lagrangian(int n, int order, bool affine_in_w, Rng& rng) {
  std::vector<Expr> base{Expr::independent(P)};
  for (int i = 1; i <= n; ++i) base.push_back(Expr::coordinate({P, i, -1}));
  for (int i = 1; i <= n; ++i) base.push_back(Expr::coordinate({P, i, 0}));
  auto w = [](int i) { return Expr::coordinate({P, i, 1}); };
  JetChart chart(P, n, std::max(order, 1));
  Expr L = random_poly(base, 3, 3 + 2 * n, rng);
  if (order == 1) {
    // Keep the velocity dependence regular: a positive quadratic part.
    for (int i = 1; i <= n; ++i) {
      Expr v = Expr::coordinate({P, i, 0});
      L = L + Expr(0.5 * rng.integer(1, 4)) * v * v;
    }
    return LagrangianDef(chart, L, 1);
  }
  for (int i = 1; i <= n; ++i) L = L + w(i) * random_poly(base, 3, 3, rng);
  if (!affine_in_w) {
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        Expr c = random_poly(base, 2, 2, rng);
        if (i == j) c = c + Expr(2.0);
        L = L + w(i) * w(j) * c;
      }
    L = L + w(1) * w(1) * w(1) * random_poly(base, 1, 1, rng);
    if (n > 1) L = L + w(1) * w(2) * w(2) * random_poly(base, 1, 1, rng);
  }
  return LagrangianDef(chart, L, 2);
}

std::vector<CorpusEntry> lagrangian_corpus(int count, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    int n = 1 + k % 3;
    int kind = (k / 3) % 3;  // 0: order 1, 1: order 2 affine in w, 2: general order 2
    int order = kind == 0 ? 1 : 2;
    bool affine = kind != 2;
    CorpusEntry e;
    e.name = "corpus" + std::to_string(k) + "_n" + std::to_string(n) + "_o" +
             std::to_string(order) + (kind == 1 ? "_affine" : "");
    e.lagrangian = random_polynomial_lagrangian(n, order, affine, rng);
    e.affine_in_w = affine;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace varjet
