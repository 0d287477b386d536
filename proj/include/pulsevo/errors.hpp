// Copyright 2026 The Pulsevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pulsevo {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input / model errors. The CLI maps all of these to exit code 3.

class DimensionError : public Error {
 public:
  using Error::Error;
};

class KindError : public Error {
 public:
  using Error::Error;
};

/// An invariant of a domain object was violated. `field()` names the
/// offending field, e.g. "pulses[2].duration".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, std::string message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)),
        message_(std::move(message)) {}

  const std::string& field() const noexcept { return field_; }
  /// The description without the field prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

class ParamError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TimingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A pulse Hamiltonian was requested outside the pulse's active window.
class WindowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// An identifier (operator, recipe) could not be resolved.
class NameError : public Error {
 public:
  NameError(std::string name, const std::string& what)
      : Error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Numerical failures of the integrator. The CLI maps these to exit code 4.

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class StiffnessError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

class BudgetError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

class NumericsError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

}  // namespace pulsevo
