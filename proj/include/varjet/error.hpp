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

#include <stdexcept>
#include <string>
#include <vector>

namespace varjet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown coordinate, chart mismatch, or an expression outside its chart.
class ChartError : public Error {
 public:
  using Error::Error;
};

// Unbound constant or incomplete substitution.
class BindingError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<int> path,
                  std::string subtree)
      : Error(what), path_(std::move(path)), subtree_(std::move(subtree)) {}
  explicit EvaluationError(const std::string& what) : Error(what) {}

  // Child indices from the evaluated root down to the failing node.
  const std::vector<int>& path() const { return path_; }
  const std::string& subtree() const { return subtree_; }

 private:
  std::vector<int> path_;
  std::string subtree_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  // Same position inside a named file, "file:line:column: what".
  ParseError(const std::string& source, const std::string& what, int line, int column)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ArityError : public FormatError {
 public:
  using FormatError::FormatError;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NormalFormError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

}  // namespace varjet
