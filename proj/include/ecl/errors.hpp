// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: syntax errors, undeclared symbols, arity mismatches,
// violated preconditions of a public operation.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SignatureError : public InputError {
 public:
  using InputError::InputError;
};

// An explicit, configurable search bound was hit. Never a silent truncation.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Raised when an internal cross-check fails; always indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Bounds on the exponential searches performed by the library.
struct Limits {
  std::size_t max_theta = 12;
  std::size_t max_partitions = 1'000'000;
  std::size_t max_model = 8;
  std::size_t max_disjuncts = 4096;
  std::size_t max_search_nodes = 20'000'000;
};

}  // namespace ecl
