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
#include <map>
#include <string>
#include <vector>

#include "curaug/ngram.hpp"
#include "curaug/random.hpp"
#include "curaug/sampling.hpp"

namespace curaug {

inline constexpr std::size_t kDefaultCandidateCount = 20;
inline constexpr std::size_t kDefaultMaxLength = 30;

enum class GeneratorSource { builtin_ngram, external_file };

// Decodes count sequences from the context [BOS] source [SEP], applying the
// sampler policy at every step (step 0 is the first generated token) and
// stopping at EOS or max_len. Source tokens unknown to the model become UNK.
std::vector<std::vector<std::string>> generate_candidates(const std::vector<std::string>& source,
                                                          const LanguageModel& model,
                                                          const SamplerSpec& spec,
                                                          std::size_t count, std::size_t max_len,
                                                          Rng& rng);

// Same decode loop returning raw ids, for callers that inspect the steps.
std::vector<TokenId> decode_one(const std::vector<TokenId>& prompt, const LanguageModel& model,
                                const SamplerSpec& spec, std::size_t max_len, Rng& rng);

std::vector<TokenId> make_prompt(const std::vector<std::string>& source, const Vocabulary& vocab);

// External candidate file: {"source_id", "candidate_text"} per line. Bags keep
// file order; repeated ids are concatenated.
using CandidateBags = std::map<std::string, std::vector<std::string>>;
CandidateBags load_external_candidates(const std::filesystem::path& path);

}  // namespace curaug
