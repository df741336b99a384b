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
#include "curaug/vocabulary.hpp"

#include <array>

#include "curaug/error.hpp"

namespace curaug {
namespace {

constexpr std::array<std::string_view, Vocabulary::kReservedCount> kReserved = {
    "<bos>", "<eos>", "<sep>", "<unk>"};

}  // namespace

Vocabulary::Vocabulary() {
  for (auto t : kReserved) add(t);
}

TokenId Vocabulary::add(std::string_view token) {
  if (auto existing = find(token)) return *existing;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id(std::string_view token) const { return find(token).value_or(kUnk); }

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw ParameterError("token id " + std::to_string(id) + " outside the vocabulary");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(token(id));
  return out;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < kReservedCount) throw DataError("vocabulary is missing reserved tokens");
  for (std::size_t i = 0; i < kReservedCount; ++i) {
    if (tokens[i] != kReserved[i]) throw DataError("vocabulary reserved token mismatch at " + std::to_string(i));
  }
  Vocabulary v;
  for (std::size_t i = kReservedCount; i < tokens.size(); ++i) {
    const std::size_t before = v.size();
    v.add(tokens[i]);
    if (v.size() == before) throw DataError("duplicate vocabulary entry '" + tokens[i] + "'");
  }
  return v;
}

}  // namespace curaug
