/* Copyright 2026 The ionphoton Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace ionphoton {

// Base of every error the library throws. The CLI maps subclasses onto exit
// codes: ConfigError -> 2, NumericError and its children -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string section, std::string key, const std::string &what)
      : Error("[" + section + "] " + key + ": " + what),
        section_(std::move(section)),
        key_(std::move(key)) {}

  const std::string &section() const { return section_; }
  const std::string &key() const { return key_; }

 private:
  std::string section_;
  std::string key_;
};

// Invalid argument to a physics routine (zero detuning, bad index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class SolverError : public NumericError {
 public:
  SolverError(const std::string &what, double residual)
      : NumericError(what + " (residual " + std::to_string(residual) + " N)"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Ion collision during iteration or a non-positive Hessian eigenvalue.
class InstabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnsupportedError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A requested ZZ interaction cannot be built from the available couplings.
class UncompilableError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ionphoton
