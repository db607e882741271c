// Copyright 2026 The NavForge Authors
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

#ifndef NAVFORGE_ERRORS_H_
#define NAVFORGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace navforge {

// Violated precondition of a public operation (wrong shape, wrong task, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown robot or task name.
class RegistryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Robot/task pair disabled by the compatibility matrix.
class CompatibilityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Non-finite state produced by the simulation.
class SimulationFault : public std::runtime_error {
 public:
  // env_index < 0 means the env is not known yet.
  SimulationFault(const std::string& message, int env_index)
      : std::runtime_error(env_index < 0 ? message
                                         : message + " (env " +
                                               std::to_string(env_index) + ")"),
        message_(message),
        env_index_(env_index) {}

  // The message without the env tag.
  const std::string& message() const { return message_; }
  int env_index() const { return env_index_; }

 private:
  std::string message_;
  int env_index_;
};

// Non-finite loss or parameters during optimization.
class TrainingFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or incompatible checkpoint / data file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace navforge

#endif  // NAVFORGE_ERRORS_H_
