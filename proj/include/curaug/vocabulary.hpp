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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curaug/sampling.hpp"

namespace curaug {

// Dense token ids. Ids 0..3 are reserved and never reassigned; the reserved
// strings cannot come out of the tokenizer because '<' is detached.
class Vocabulary {
 public:
  static constexpr TokenId kBos = 0;
  static constexpr TokenId kEos = 1;
  static constexpr TokenId kSep = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr std::size_t kReservedCount = 4;

  Vocabulary();

  // Returns the existing id or assigns the next free one.
  TokenId add(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  // Unknown tokens map to kUnk.
  TokenId id(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const { return tokens_.size(); }

  static bool is_reserved(TokenId id) { return id >= 0 && id < static_cast<TokenId>(kReservedCount); }
  // Tokens a model may emit: every word plus end-of-sequence.
  static bool is_emittable(TokenId id) { return id == kEos || !is_reserved(id); }

  std::vector<TokenId> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(std::span<const TokenId> ids) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  // Rebuilds from a full token list whose first entries are the reserved ones.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace curaug
