// Copyright 2026 The kipa-esr Authors
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

namespace kipa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input outside the model's domain (bad geometry, currents above I*, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Amplifier driven at or past the parametric threshold.
class ThresholdError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Formula is 0/0 or otherwise undefined at this input (e.g. n_k at G_k = 1).
class DegenerateInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : NumericalError(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

class NoCrossingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kipa
