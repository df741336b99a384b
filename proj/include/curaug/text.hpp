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

#include <string>
#include <string_view>
#include <vector>

namespace curaug {

// Lowercases ASCII letters, splits on whitespace and detaches every ASCII
// punctuation character into its own token. Apostrophes between two
// alphanumerics stay inside the word ("don't").
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

// Fixed English stop-word list used by the content-word heuristics.
bool is_stop_word(std::string_view token);

bool is_punctuation_token(std::string_view token);

}  // namespace curaug
