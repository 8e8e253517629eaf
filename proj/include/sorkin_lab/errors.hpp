// Copyright 2026 The sorkin-lab Authors
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

namespace sorkin {

/// Base class for every error raised by the library. The CLI maps all of
/// these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix handed to a unitary-only operation fails U^dagger U = I.
class NonUnitaryError : public Error {
 public:
  using Error::Error;
};

/// A state that must be normalized is not.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// The seven-experiment protocol cannot be built for the requested amplitudes.
class DegenerateProtocolError : public Error {
 public:
  using Error::Error;
};

/// Sum of second-order magnitudes at or below the floor; kappa is undefined.
class NotQuantumRegimeError : public Error {
 public:
  using Error::Error;
};

/// A deformation parameter drives a probability negative or above one.
class UnphysicalParameterError : public Error {
 public:
  using Error::Error;
};

class InsufficientBatchesError : public Error {
 public:
  using Error::Error;
};

/// The lab-frame integrator was asked for a resolution it refuses to run at.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Config schema violation. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace sorkin
