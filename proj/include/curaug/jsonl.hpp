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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace curaug {

using Json = nlohmann::ordered_json;

// Calls fn(record, line_number) for every non-blank line. Missing files and
// lines that are not JSON objects raise DataError naming path and line.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const Json&, std::size_t)>& fn);

// Typed field access that reports the offending line on failure.
std::string require_string(const Json& record, const char* key, std::size_t line);
double require_number(const Json& record, const char* key, std::size_t line);
std::int64_t require_integer(const Json& record, const char* key, std::size_t line);
std::optional<std::string> optional_string(const Json& record, const char* key, std::size_t line);

// One compact record per line.
std::string to_jsonl_line(const Json& record);

// Writes all lines atomically enough for our purposes (truncate + write).
void write_text_file(const std::filesystem::path& path, const std::string& content);

// An original datum anchoring a candidate bag.
struct TrainingInstance {
  std::string id;
  std::string text;
  std::optional<std::string> label;

  friend bool operator==(const TrainingInstance&, const TrainingInstance&) = default;
};

// Corpus records: {"id", "text", "label"?}. Ids must be unique.
std::vector<TrainingInstance> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const std::vector<TrainingInstance>& corpus);

}  // namespace curaug
