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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curaug/random.hpp"

namespace curaug {

using TokenId = std::int32_t;

// A distribution over a fixed vocabulary. Tokens are switched off through an
// explicit support mask, so ids stay stable across filters. Logits are kept
// alongside the probabilities so temperature can be re-applied.
class TokenDistribution {
 public:
  // Softmax over the finite logits; -inf entries are excluded from the support.
  static TokenDistribution from_logits(std::vector<double> logits);

  // Probabilities must be finite, non-negative and sum to 1 within 1e-6; they
  // are renormalized exactly. Zero entries are excluded from the support.
  static TokenDistribution from_probabilities(std::span<const double> probs);

  std::size_t vocab_size() const { return probs_.size(); }
  std::span<const double> logits() const { return logits_; }
  std::span<const double> probabilities() const { return probs_; }
  double probability(TokenId id) const { return probs_.at(static_cast<std::size_t>(id)); }
  bool in_support(TokenId id) const { return mask_.at(static_cast<std::size_t>(id)) != 0; }
  std::size_t support_size() const;
  std::vector<TokenId> support() const;

  // Supported ids ordered by descending probability, lower id first on ties,
  // truncated to at most limit entries.
  std::vector<TokenId> ranked(std::size_t limit) const;

  // Recomputes probabilities as softmax(logits / temperature) over the support.
  TokenDistribution with_temperature(double temperature) const;

  // Keeps only ids with keep[id] != 0 (intersected with the current support)
  // and divides every surviving probability by the surviving mass.
  TokenDistribution restricted(std::span<const std::uint8_t> keep) const;

 private:
  TokenDistribution() = default;

  std::vector<double> logits_;
  std::vector<double> probs_;
  std::vector<std::uint8_t> mask_;
};

enum class Strategy { pure, top_k, top_p, top_combined, bottom_k };

// Decoding policy. For bottom_k the filter is used for the first
// bottom_steps decode steps and the fallback spec afterwards.
struct SamplerSpec {
  Strategy strategy = Strategy::pure;
  std::size_t k = 0;
  double p = 1.0;
  std::size_t bottom_steps = 0;
  std::shared_ptr<const SamplerSpec> fallback;
  double temperature = 1.0;

  static SamplerSpec pure();
  static SamplerSpec top_k(std::size_t k);
  static SamplerSpec top_p(double p);
  static SamplerSpec top_combined(std::size_t k, double p);
  // Falls back to top_combined(120, 0.95) unless a fallback is given.
  static SamplerSpec bottom_k(std::size_t k, std::size_t steps);
  static SamplerSpec bottom_k(std::size_t k, std::size_t steps, SamplerSpec fallback);

  // Checks the vocabulary-independent invariants.
  void validate() const;

  friend bool operator==(const SamplerSpec& a, const SamplerSpec& b);
};

inline constexpr std::size_t kDefaultFallbackK = 120;
inline constexpr double kDefaultFallbackP = 0.95;

// Text form: "pure", "topk:k=40", "topp:p=0.9", "top:k=120,p=0.95",
// "bottom:k=2,n=1,fallback=top:k=120,p=0.95". A non-unit temperature is
// written as a "t=" key before any fallback.
SamplerSpec parse_sampler_spec(std::string_view text);
std::string format_sampler_spec(const SamplerSpec& spec);
std::string_view strategy_name(Strategy strategy);

TokenDistribution top_k_filter(const TokenDistribution& dist, std::size_t k);
TokenDistribution top_p_filter(const TokenDistribution& dist, double p);
TokenDistribution bottom_k_filter(const TokenDistribution& dist, std::size_t k);

// Inverse-CDF draw over the support in id order.
TokenId sample_token(const TokenDistribution& dist, Rng& rng);

// Temperature first, then the strategy selected for this decode step.
TokenDistribution apply_policy(const TokenDistribution& dist, const SamplerSpec& spec,
                               std::size_t step);

}  // namespace curaug
