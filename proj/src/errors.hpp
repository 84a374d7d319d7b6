// Copyright 2026 The cfgreen Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cfgreen {

enum class ErrorKind {
  dimension,   // mismatched qubit counts / matrix sizes
  domain,      // argument outside the mathematical domain (Im(w) <= 0, r >= 1/2, ...)
  config,      // malformed or inconsistent configuration
  degeneracy,  // degenerate input: null-space operator, empty/degenerate sector
  numeric,     // conditioning or evaluation instability
  io,
  internal,
};

/// Base exception for every failure raised by the library. The C API maps
/// `kind()` onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& w) : Error(ErrorKind::dimension, w) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& w) : Error(ErrorKind::degeneracy, w) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

}  // namespace cfgreen
