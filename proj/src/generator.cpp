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
#include "curaug/generator.hpp"

#include "curaug/error.hpp"
#include "curaug/jsonl.hpp"
#include "curaug/text.hpp"

namespace curaug {

std::vector<TokenId> make_prompt(const std::vector<std::string>& source, const Vocabulary& vocab) {
  std::vector<TokenId> prompt{Vocabulary::kBos};
  for (const auto& t : source) prompt.push_back(vocab.id(t));
  prompt.push_back(Vocabulary::kSep);
  return prompt;
}

std::vector<TokenId> decode_one(const std::vector<TokenId>& prompt, const LanguageModel& model,
                                const SamplerSpec& spec, std::size_t max_len, Rng& rng) {
  std::vector<TokenId> context = prompt;
  std::vector<TokenId> out;
  for (std::size_t step = 0; step < max_len; ++step) {
    const TokenDistribution dist = apply_policy(model.next_distribution(context), spec, step);
    const TokenId tok = sample_token(dist, rng);
    if (tok == Vocabulary::kEos) break;
    out.push_back(tok);
    context.push_back(tok);
  }
  return out;
}

std::vector<std::vector<std::string>> generate_candidates(const std::vector<std::string>& source,
                                                          const LanguageModel& model,
                                                          const SamplerSpec& spec,
                                                          std::size_t count, std::size_t max_len,
                                                          Rng& rng) {
  if (max_len < 1) throw ParameterError("max_len must be at least 1");
  spec.validate();
  std::vector<std::vector<std::string>> bag;
  bag.reserve(count);
  const std::vector<TokenId> prompt = make_prompt(source, model.vocabulary());
  for (std::size_t i = 0; i < count; ++i) {
    bag.push_back(model.vocabulary().decode(decode_one(prompt, model, spec, max_len, rng)));
  }
  return bag;
}

CandidateBags load_external_candidates(const std::filesystem::path& path) {
  CandidateBags bags;
  read_jsonl(path, [&](const Json& r, std::size_t line) {
    std::string id = require_string(r, "source_id", line);
    std::string text = require_string(r, "candidate_text", line);
    if (tokenize(text).empty()) {
      throw DataError("line " + std::to_string(line) + ": empty candidate text");
    }
    bags[std::move(id)].push_back(std::move(text));
  });
  return bags;
}

}  // namespace curaug
