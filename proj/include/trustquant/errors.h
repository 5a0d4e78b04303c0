/*
 * Copyright 2026 The TrustQuant Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TRUSTQUANT_ERRORS_H_
#define TRUSTQUANT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trustquant {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration, bad input values or malformed files. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A required column or field is missing or misnamed.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A cell could not be parsed. Carries the 1-based line number in the file.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : ValidationError("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value outside the mathematical domain of an operation.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Layer or feature dimensions do not agree.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Non-finite value produced during a computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File system failures. CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trustquant

#endif  // TRUSTQUANT_ERRORS_H_
