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
#include "curaug/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "curaug/error.hpp"

namespace curaug {
namespace {

constexpr double kNormTolerance = 1e-9;

}  // namespace

TokenDistribution TokenDistribution::from_logits(std::vector<double> logits) {
  TokenDistribution d;
  const std::size_t n = logits.size();
  d.mask_.assign(n, 0);
  d.probs_.assign(n, 0.0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(logits[i]) || logits[i] == std::numeric_limits<double>::infinity()) {
      throw ParameterError("logit " + std::to_string(i) + " is not a real number");
    }
    if (std::isfinite(logits[i])) {
      d.mask_[i] = 1;
      max_logit = std::max(max_logit, logits[i]);
    }
  }
  if (!std::isfinite(max_logit)) throw ParameterError("distribution has empty support");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.mask_[i]) {
      d.probs_[i] = std::exp(logits[i] - max_logit);
      total += d.probs_[i];
    }
  }
  for (double& p : d.probs_) p /= total;
  d.logits_ = std::move(logits);
  return d;
}

TokenDistribution TokenDistribution::from_probabilities(std::span<const double> probs) {
  TokenDistribution d;
  const std::size_t n = probs.size();
  d.mask_.assign(n, 0);
  d.probs_.assign(probs.begin(), probs.end());
  d.logits_.assign(n, -std::numeric_limits<double>::infinity());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw ParameterError("probability " + std::to_string(i) + " is negative or not finite");
    }
    if (probs[i] > 0.0) {
      d.mask_[i] = 1;
      d.logits_[i] = std::log(probs[i]);
      total += probs[i];
    }
  }
  if (total == 0.0) throw ParameterError("distribution has empty support");
  if (std::abs(total - 1.0) > 1e-6) {
    throw ParameterError("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& p : d.probs_) p /= total;
  return d;
}

std::size_t TokenDistribution::support_size() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<TokenId> TokenDistribution::support() const {
  std::vector<TokenId> ids;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) ids.push_back(static_cast<TokenId>(i));
  }
  return ids;
}

std::vector<TokenId> TokenDistribution::ranked(std::size_t limit) const {
  std::vector<TokenId> ids = support();
  const auto more_probable = [this](TokenId a, TokenId b) {
    const double pa = probs_[static_cast<std::size_t>(a)];
    const double pb = probs_[static_cast<std::size_t>(b)];
    return pa > pb || (pa == pb && a < b);
  };
  const std::size_t keep = std::min(limit, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                    more_probable);
  ids.resize(keep);
  return ids;
}

TokenDistribution TokenDistribution::with_temperature(double temperature) const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ParameterError("temperature must be a positive real");
  }
  if (temperature == 1.0) return *this;
  std::vector<double> scaled(logits_.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (mask_[i]) scaled[i] = logits_[i] / temperature;
  }
  TokenDistribution d = from_logits(std::move(scaled));
  // Keep the unscaled logits so repeated application does not compound.
  d.logits_ = logits_;
  return d;
}

TokenDistribution TokenDistribution::restricted(std::span<const std::uint8_t> keep) const {
  if (keep.size() != mask_.size()) throw InternalError("mask size does not match vocabulary");
  TokenDistribution d = *this;
  double mass = 0.0;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    d.mask_[i] = static_cast<std::uint8_t>(mask_[i] && keep[i]);
    if (d.mask_[i]) mass += probs_[i];
  }
  if (!(mass > 0.0)) throw ParameterError("filter left an empty support");
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    d.probs_[i] = d.mask_[i] ? probs_[i] / mass : 0.0;
  }
  return d;
}

// ---------------------------------------------------------------------------

SamplerSpec SamplerSpec::pure() { return SamplerSpec{}; }

SamplerSpec SamplerSpec::top_k(std::size_t k) {
  SamplerSpec s;
  s.strategy = Strategy::top_k;
  s.k = k;
  return s;
}

SamplerSpec SamplerSpec::top_p(double p) {
  SamplerSpec s;
  s.strategy = Strategy::top_p;
  s.p = p;
  return s;
}

SamplerSpec SamplerSpec::top_combined(std::size_t k, double p) {
  SamplerSpec s;
  s.strategy = Strategy::top_combined;
  s.k = k;
  s.p = p;
  return s;
}

SamplerSpec SamplerSpec::bottom_k(std::size_t k, std::size_t steps) {
  return bottom_k(k, steps, top_combined(kDefaultFallbackK, kDefaultFallbackP));
}

SamplerSpec SamplerSpec::bottom_k(std::size_t k, std::size_t steps, SamplerSpec fallback) {
  SamplerSpec s;
  s.strategy = Strategy::bottom_k;
  s.k = k;
  s.bottom_steps = steps;
  s.fallback = std::make_shared<const SamplerSpec>(std::move(fallback));
  return s;
}

void SamplerSpec::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ParameterError("temperature must be a positive real");
  }
  const bool uses_k = strategy == Strategy::top_k || strategy == Strategy::top_combined;
  const bool uses_p = strategy == Strategy::top_p || strategy == Strategy::top_combined;
  if (uses_k && k < 1) throw ParameterError("k must be at least 1");
  if (uses_p && !(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  if ((strategy == Strategy::bottom_k) != static_cast<bool>(fallback)) {
    throw ParameterError("a fallback spec is required for bottom_k and only for bottom_k");
  }
  if (fallback) fallback->validate();
}

bool operator==(const SamplerSpec& a, const SamplerSpec& b) {
  if (a.strategy != b.strategy || a.k != b.k || a.p != b.p ||
      a.bottom_steps != b.bottom_steps || a.temperature != b.temperature) {
    return false;
  }
  if (static_cast<bool>(a.fallback) != static_cast<bool>(b.fallback)) return false;
  return !a.fallback || *a.fallback == *b.fallback;
}

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::pure: return "pure";
    case Strategy::top_k: return "topk";
    case Strategy::top_p: return "topp";
    case Strategy::top_combined: return "top";
    case Strategy::bottom_k: return "bottom";
  }
  return "?";
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ParameterError("sampler spec: bad value for '" + std::string(key) + "': '" +
                         std::string(v) + "'");
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ParameterError("sampler spec: bad integer for '" + std::string(key) + "': '" +
                         std::string(v) + "'");
  }
  return out;
}

}  // namespace

SamplerSpec parse_sampler_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  SamplerSpec spec;
  if (name == "pure") {
    spec.strategy = Strategy::pure;
  } else if (name == "topk") {
    spec.strategy = Strategy::top_k;
  } else if (name == "topp") {
    spec.strategy = Strategy::top_p;
  } else if (name == "top") {
    spec.strategy = Strategy::top_combined;
  } else if (name == "bottom") {
    spec.strategy = Strategy::bottom_k;
  } else {
    throw ParameterError("sampler spec: unknown strategy '" + std::string(name) + "'");
  }

  bool has_k = false, has_p = false, has_n = false;
  while (!args.empty()) {
    const auto eq = args.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("sampler spec: expected key=value in '" + std::string(args) + "'");
    }
    const std::string_view key = args.substr(0, eq);
    if (key == "fallback") {
      if (spec.strategy != Strategy::bottom_k) {
        throw ParameterError("sampler spec: fallback is only valid for bottom");
      }
      spec.fallback = std::make_shared<const SamplerSpec>(parse_sampler_spec(args.substr(eq + 1)));
      break;
    }
    const auto comma = args.find(',', eq);
    const std::string_view value = args.substr(eq + 1, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - eq - 1);
    if (key == "k") {
      spec.k = parse_count(key, value);
      has_k = true;
    } else if (key == "p") {
      spec.p = parse_double(key, value);
      has_p = true;
    } else if (key == "n") {
      spec.bottom_steps = parse_count(key, value);
      has_n = true;
    } else if (key == "t") {
      spec.temperature = parse_double(key, value);
    } else {
      throw ParameterError("sampler spec: unknown key '" + std::string(key) + "'");
    }
    args = comma == std::string_view::npos ? std::string_view{} : args.substr(comma + 1);
  }

  const bool needs_k = spec.strategy == Strategy::top_k || spec.strategy == Strategy::top_combined ||
                       spec.strategy == Strategy::bottom_k;
  const bool needs_p = spec.strategy == Strategy::top_p || spec.strategy == Strategy::top_combined;
  const bool needs_n = spec.strategy == Strategy::bottom_k;
  if (has_k != needs_k || has_p != needs_p || has_n != needs_n) {
    throw ParameterError("sampler spec: wrong parameters for '" + std::string(name) + "' in '" +
                         std::string(text) + "'");
  }
  if (spec.strategy == Strategy::bottom_k && !spec.fallback) {
    spec.fallback = std::make_shared<const SamplerSpec>(
        SamplerSpec::top_combined(kDefaultFallbackK, kDefaultFallbackP));
  }
  spec.validate();
  return spec;
}

std::string format_sampler_spec(const SamplerSpec& spec) {
  std::string out(strategy_name(spec.strategy));
  std::vector<std::string> parts;
  switch (spec.strategy) {
    case Strategy::pure:
      break;
    case Strategy::top_k:
      parts.push_back("k=" + std::to_string(spec.k));
      break;
    case Strategy::top_p:
      parts.push_back("p=" + format_double(spec.p));
      break;
    case Strategy::top_combined:
      parts.push_back("k=" + std::to_string(spec.k));
      parts.push_back("p=" + format_double(spec.p));
      break;
    case Strategy::bottom_k:
      parts.push_back("k=" + std::to_string(spec.k));
      parts.push_back("n=" + std::to_string(spec.bottom_steps));
      break;
  }
  if (spec.temperature != 1.0) parts.push_back("t=" + format_double(spec.temperature));
  if (spec.fallback) parts.push_back("fallback=" + format_sampler_spec(*spec.fallback));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i == 0 ? ':' : ',');
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

TokenDistribution top_k_filter(const TokenDistribution& dist, std::size_t k) {
  if (k < 1 || k > dist.vocab_size()) {
    throw ParameterError("top-k: k=" + std::to_string(k) + " outside [1, " +
                         std::to_string(dist.vocab_size()) + "]");
  }
  std::vector<std::uint8_t> keep(dist.vocab_size(), 0);
  for (TokenId id : dist.ranked(k)) keep[static_cast<std::size_t>(id)] = 1;
  return dist.restricted(keep);
}

TokenDistribution top_p_filter(const TokenDistribution& dist, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ParameterError("top-p: p=" + std::to_string(p) + " outside (0, 1]");
  }
  std::vector<std::uint8_t> keep(dist.vocab_size(), 0);
  double cumulative = 0.0;
  for (TokenId id : dist.ranked(dist.vocab_size())) {
    keep[static_cast<std::size_t>(id)] = 1;
    cumulative += dist.probability(id);
    if (cumulative >= p) break;
  }
  return dist.restricted(keep);
}

TokenDistribution bottom_k_filter(const TokenDistribution& dist, std::size_t k) {
  if (k >= dist.vocab_size()) {
    throw ParameterError("bottom-k: k=" + std::to_string(k) + " leaves an empty support (|V|=" +
                         std::to_string(dist.vocab_size()) + ")");
  }
  if (k == 0) return dist;
  if (k >= dist.support_size()) {
    throw ParameterError("bottom-k: k=" + std::to_string(k) + " removes the whole support of " +
                         std::to_string(dist.support_size()) + " tokens");
  }
  std::vector<std::uint8_t> keep(dist.vocab_size(), 1);
  for (TokenId id : dist.ranked(k)) keep[static_cast<std::size_t>(id)] = 0;
  return dist.restricted(keep);
}

TokenId sample_token(const TokenDistribution& dist, Rng& rng) {
  const auto probs = dist.probabilities();
  double total = 0.0;
  TokenId last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!dist.in_support(static_cast<TokenId>(i))) continue;
    total += probs[i];
    if (probs[i] > 0.0) last_positive = static_cast<TokenId>(i);
  }
  if (last_positive < 0) throw InternalError("sampling from an empty support");
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InternalError("sampling from an unnormalized distribution (mass " +
                        std::to_string(total) + ")");
  }
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!dist.in_support(static_cast<TokenId>(i))) continue;
    cumulative += probs[i];
    if (u < cumulative) return static_cast<TokenId>(i);
  }
  return last_positive;
}

TokenDistribution apply_policy(const TokenDistribution& dist, const SamplerSpec& spec,
                               std::size_t step) {
  if (spec.strategy == Strategy::bottom_k) {
    if (!spec.fallback) throw ParameterError("bottom_k spec without fallback");
    if (step >= spec.bottom_steps) return apply_policy(dist, *spec.fallback, step);
  }
  const TokenDistribution scaled = dist.with_temperature(spec.temperature);
  // Policy-level k may exceed a small vocabulary; the filter itself is strict.
  const std::size_t k = std::min(spec.k, dist.vocab_size());
  switch (spec.strategy) {
    case Strategy::pure:
      return scaled;
    case Strategy::top_k:
      return top_k_filter(scaled, k);
    case Strategy::top_p:
      return top_p_filter(scaled, spec.p);
    case Strategy::top_combined:
      return top_p_filter(top_k_filter(scaled, k), spec.p);
    case Strategy::bottom_k:
      return bottom_k_filter(scaled, spec.k);
  }
  throw InternalError("unknown sampling strategy");
}

}  // namespace curaug
