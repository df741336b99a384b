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
#include "curaug/jsonl.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "curaug/error.hpp"

namespace curaug {
namespace {

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path.string() + ": " + where(line_no) + "malformed record (" + e.what() + ")");
    }
    if (!record.is_object()) {
      throw DataError(path.string() + ": " + where(line_no) + "record is not a JSON object");
    }
    try {
      fn(record, line_no);
    } catch (const DataError& e) {
      const std::string msg = e.what();
      if (msg.rfind(path.string(), 0) == 0) throw;
      throw DataError(path.string() + ": " + msg);
    }
  }
}

std::string require_string(const Json& record, const char* key, std::size_t line) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    throw DataError(where(line) + "missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

double require_number(const Json& record, const char* key, std::size_t line) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_number()) {
    throw DataError(where(line) + "missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

std::int64_t require_integer(const Json& record, const char* key, std::size_t line) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_number_integer()) {
    throw DataError(where(line) + "missing integer field '" + key + "'");
  }
  return it->get<std::int64_t>();
}

std::optional<std::string> optional_string(const Json& record, const char* key, std::size_t line) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(where(line) + "field '" + key + "' must be a string");
  return it->get<std::string>();
}

std::string to_jsonl_line(const Json& record) { return record.dump() + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::vector<TrainingInstance> load_corpus(const std::filesystem::path& path) {
  std::vector<TrainingInstance> corpus;
  std::set<std::string> seen;
  read_jsonl(path, [&](const Json& r, std::size_t line) {
    TrainingInstance inst{require_string(r, "id", line), require_string(r, "text", line),
                          optional_string(r, "label", line)};
    if (!seen.insert(inst.id).second) {
      throw DataError(where(line) + "duplicate id '" + inst.id + "'");
    }
    corpus.push_back(std::move(inst));
  });
  return corpus;
}

void save_corpus(const std::filesystem::path& path, const std::vector<TrainingInstance>& corpus) {
  std::string out;
  for (const auto& inst : corpus) {
    Json r;
    r["id"] = inst.id;
    r["text"] = inst.text;
    if (inst.label) r["label"] = *inst.label;
    out += to_jsonl_line(r);
  }
  write_text_file(path, out);
}

}  // namespace curaug
