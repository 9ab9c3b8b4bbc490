// Copyright 2026 The lnndx Authors
//
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

#ifndef LNN_ERROR_HPP
#define LNN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed trees, arity mismatches, out-of-range feature indices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters, including an alpha that admits no feasible
/// conjunction of the requested arity.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined for the given labels (e.g. AUC with one class).
class MetricError : public Error {
 public:
  using Error::Error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace lnn

#endif  // LNN_ERROR_HPP
