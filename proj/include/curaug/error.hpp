// Copyright 2026 The curaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace curaug {

// Out-of-range or inconsistent arguments (k, p, C, margins, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Missing, empty or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid combination of configuration options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coverage or consistency checks on externally supplied files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A training run that cannot continue (non-finite loss, impossible triplet).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant (e.g. sampling from an unnormalized distribution).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace curaug
