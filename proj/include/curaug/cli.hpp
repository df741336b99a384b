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

// Command-line front end. Exit codes: 0 success, 2 unreadable or malformed
// input, 3 invalid parameters or failed validation, 4 internal failure.

#include <ostream>

namespace curaug {

inline constexpr const char* kVersion = "0.1.0";

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitInternal = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace curaug
