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

#include "varjet/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "varjet/error.hpp"

namespace varjet {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  int primes = 0;
  int column = 0;
};

class Parser {
 public:
  Parser(const std::string& text, const JetChart& chart, const ParseOptions& opt)
      : text_(text), chart_(chart), opt_(opt) {
    advance();
  }

  Expr parse() {
    Expr e = expr();
    if (tok_.kind != Tok::end) error("unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what, int column = -1) const {
    int col = column < 0 ? tok_.column : column;
    throw ParseError(what, opt_.line, opt_.column + col);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    tok_ = Token{};
    tok_.column = static_cast<int>(pos_);
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::end;
      tok_.text = "end of input";
      return;
    }
    char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      tok_.text = text_.substr(start, pos_ - start);
      while (pos_ < text_.size() && text_[pos_] == '\'') {
        ++tok_.primes;
        ++pos_;
      }
      tok_.kind = Tok::ident;
      return;
    }
    ++pos_;
    tok_.text = std::string(1, ch);
    switch (ch) {
      case '+': tok_.kind = Tok::plus; return;
      case '-': tok_.kind = Tok::minus; return;
      case '*': tok_.kind = Tok::star; return;
      case '/': tok_.kind = Tok::slash; return;
      case '^': tok_.kind = Tok::caret; return;
      case '(': tok_.kind = Tok::lparen; return;
      case ')': tok_.kind = Tok::rparen; return;
      default: error("unexpected character '" + tok_.text + "'");
    }
  }

  void lex_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) error("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    tok_.kind = Tok::number;
    tok_.text = text_.substr(start, pos_ - start);
    tok_.number = std::strtod(tok_.text.c_str(), nullptr);
  }

  Expr expr() {
    Expr acc = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      bool add = tok_.kind == Tok::plus;
      advance();
      Expr rhs = term();
      acc = add ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  Expr term() {
    Expr acc = factor();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      bool mul = tok_.kind == Tok::star;
      advance();
      Expr rhs = factor();
      acc = mul ? acc * rhs : acc / rhs;
    }
    return acc;
  }

  Expr factor() {
    if (tok_.kind == Tok::minus) {
      advance();
      return -factor();
    }
    Expr b = base();
    if (tok_.kind != Tok::caret) return b;
    advance();
    return Expr::pow(b, exponent());
  }

  Exponent exponent() {
    int column = tok_.column;
    if (tok_.kind == Tok::lparen) {
      advance();
      int sign = signum();
      if (tok_.kind != Tok::number) error("expected an integer exponent");
      double num = tok_.number;
      advance();
      double den = 1.0;
      if (tok_.kind == Tok::slash) {
        advance();
        if (tok_.kind != Tok::number) error("expected an integer denominator");
        den = tok_.number;
        advance();
      }
      if (tok_.kind != Tok::rparen) error("expected ')' after exponent");
      advance();
      if (num != std::floor(num) || den != std::floor(den) || den == 0.0)
        error("exponent must be a ratio of integers", column);
      return to_exponent(sign * num / den, column);
    }
    int sign = signum();
    if (tok_.kind != Tok::number) error("expected a numeric exponent");
    double v = sign * tok_.number;
    advance();
    return to_exponent(v, column);
  }

  int signum() {
    if (tok_.kind == Tok::minus) {
      advance();
      return -1;
    }
    if (tok_.kind == Tok::plus) advance();
    return 1;
  }

  Exponent to_exponent(double v, int column) const {
    double twice = 2.0 * v;
    if (twice != std::floor(twice) || std::fabs(twice) > 1e6)
      error("exponent must be an integer or a half-integer", column);
    int t = static_cast<int>(twice);
    if (t % 2 == 0) return {t / 2, 1};
    return {t, 2};
  }

  Expr base() {
    switch (tok_.kind) {
      case Tok::number: {
        double v = tok_.number;
        advance();
        return Expr(v);
      }
      case Tok::lparen: {
        advance();
        Expr e = expr();
        if (tok_.kind != Tok::rparen) error("expected ')'");
        advance();
        return e;
      }
      case Tok::ident:
        return identifier();
      case Tok::end:
        error("unexpected end of input");
      default:
        error("unexpected '" + tok_.text + "'");
    }
  }

  Expr identifier() {
    Token id = tok_;
    advance();
    if (id.text == "sqrt" && id.primes == 0) {
      if (tok_.kind != Tok::lparen) error("expected '(' after sqrt");
      advance();
      Expr e = expr();
      if (tok_.kind != Tok::rparen) error("expected ')'");
      advance();
      return Expr::sqrt(e);
    }
    std::string full = id.text + std::string(static_cast<std::size_t>(id.primes), '\'');
    if (id.text == chart_.independent_name()) {
      if (id.primes) error("unknown identifier '" + full + "'", id.column);
      return Expr::independent(chart_.kind);
    }
    bool param = chart_.kind == ChartKind::parametric;
    char pos_letter = param ? 'x' : 'X';
    char vel_letter = param ? 'v' : 'u';
    char lead = id.text[0];
    bool numeric_tail = id.text.size() > 1;
    for (std::size_t k = 1; k < id.text.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(id.text[k]))) numeric_tail = false;
    if (numeric_tail && (lead == pos_letter || lead == vel_letter)) {
      int index = std::atoi(id.text.c_str() + 1);
      bool canonical = id.text.size() == 2 || id.text[1] != '0';
      Coordinate c{chart_.kind, index, lead == pos_letter ? -1 : id.primes};
      if (!canonical || index < chart_.first_index() || index > chart_.n ||
          (lead == pos_letter && id.primes))
        error("unknown identifier '" + full + "' for a " +
                  std::string(to_string(chart_.kind)) + " chart of dimension " +
                  std::to_string(chart_.n),
              id.column);
      if (!chart_.contains(c))
        error("'" + full + "' exceeds the chart order " + std::to_string(chart_.order),
              id.column);
      return Expr::coordinate(c);
    }
    if (id.primes) error("unknown identifier '" + full + "'", id.column);
    if (opt_.constants && !opt_.constants->count(id.text))
      error("unknown identifier '" + id.text + "'", id.column);
    return Expr::constant(id.text);
  }

  const std::string& text_;
  const JetChart& chart_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace

Expr parse_expression(const std::string& text, const JetChart& chart,
                      const ParseOptions& options) {
  return Parser(text, chart, options).parse();
}

std::string render_expression(const Expr& e) { return to_text(e); }

}  // namespace varjet
