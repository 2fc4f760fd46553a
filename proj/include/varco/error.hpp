// Copyright 2026 The Varco Authors. All Rights Reserved.
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
// =============================================================================

#pragma once

#include <stdexcept>
#include <string>

namespace varco {

// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument values, inconsistent configuration or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operand shapes do not agree.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " +
              what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// A wire block that does not match its declared context or sizes.
class CorruptBlock : public Error {
 public:
  using Error::Error;
};

// NaN/Inf during training.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace varco
