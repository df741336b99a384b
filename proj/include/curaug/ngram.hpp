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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "curaug/jsonl.hpp"
#include "curaug/sampling.hpp"
#include "curaug/vocabulary.hpp"

namespace curaug {

// Autoregressive conditional model: the next-token distribution given the
// whole decode context (for generation: [BOS] source [SEP] generated...).
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual const Vocabulary& vocabulary() const = 0;
  virtual TokenDistribution next_distribution(std::span<const TokenId> context) const = 0;
};

inline constexpr double kStupidBackoffFactor = 0.4;
inline constexpr std::size_t kDefaultOrder = 3;
inline constexpr double kDefaultAlpha = 0.01;
inline constexpr int kNGramFormatVersion = 1;

// Word-level n-gram model with add-alpha smoothing at the longest stored
// context and stupid backoff to shorter contexts when a context is unseen.
class NGramModel final : public LanguageModel {
 public:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::map<TokenId, std::uint64_t> next;
    friend bool operator==(const ContextCounts&, const ContextCounts&) = default;
  };

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const Vocabulary& vocabulary() const override { return vocab_; }
  // Number of stored contexts, the empty (unigram) context included.
  std::size_t context_count() const { return table_.size(); }
  // Words plus end-of-sequence.
  std::size_t emittable_count() const { return vocab_.size() - (Vocabulary::kReservedCount - 1); }

  // Uses the last (order - 1) tokens of context, backing off while unseen.
  TokenDistribution next_distribution(std::span<const TokenId> context) const override;
  std::vector<double> next_probabilities(std::span<const TokenId> context) const;

  // Unnormalized stupid-backoff score: factor^depth * P(token | longest seen
  // suffix), where depth counts the dropped context tokens. Every emittable
  // token receives mass at the level it is evaluated, so normalizing these
  // scores gives back next_probabilities().
  double backoff_score(TokenId token, std::span<const TokenId> context) const;

  // The suffix of context actually used for prediction.
  std::vector<TokenId> effective_context(std::span<const TokenId> context) const;

  // Versioned plain-text dump; provenance is stored verbatim in the header.
  std::string serialize(const Json& provenance = Json::object()) const;
  struct Loaded;
  static Loaded deserialize(const std::string& text, const std::string& origin = "<memory>");
  static Loaded load(const std::filesystem::path& path);

  friend NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus,
                                std::size_t order, double alpha);

 private:
  NGramModel() = default;

  std::size_t order_ = 1;
  double alpha_ = 1.0;
  Vocabulary vocab_;
  std::map<std::vector<TokenId>, ContextCounts> table_;
  std::vector<double> unigram_;
};

struct NGramModel::Loaded {
  NGramModel model;
  Json provenance;
};

// Each sequence is trained as [BOS] tokens [EOS]. Vocabulary ids follow first
// appearance in the corpus.
NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus, std::size_t order,
                       double alpha);

// Builtin pseudo-paraphraser. Reads the source segment out of the decode
// context and mixes the n-gram prediction for the generated prefix with a
// copy distribution over the source:
//   P(t) = (1 - copy_weight) * P_ngram(t | [BOS] generated)
//        + copy_weight * (align_weight * P_align(t) + (1 - align_weight) * P_bag(t))
// P_align puts mass on the source tokens that follow occurrences of the last
// generated token in the source (the first source token at step 0, EOS after
// the final one); P_bag is the source token frequency. Without an alignment
// the whole copy mass goes to P_bag. Contexts without a separator fall back to
// the plain n-gram.
class SourceConditionedModel final : public LanguageModel {
 public:
  struct Options {
    double copy_weight = 0.3;
    double align_weight = 0.8;
  };

  SourceConditionedModel(const NGramModel& base, Options options);
  explicit SourceConditionedModel(const NGramModel& base)
      : SourceConditionedModel(base, Options{}) {}

  const Vocabulary& vocabulary() const override { return base_.vocabulary(); }
  TokenDistribution next_distribution(std::span<const TokenId> context) const override;
  const Options& options() const { return options_; }

 private:
  const NGramModel& base_;
  Options options_;
};

}  // namespace curaug
