// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace acs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (shape mismatch, index out of
/// range, invalid domain object).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration. `line` is 1-based, or 0 when no source
/// location is known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

/// Failure while executing a valid configuration (I/O, corrupted files).
class RuntimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace acs
