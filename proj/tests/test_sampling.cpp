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

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "curaug/error.hpp"
#include "curaug/random.hpp"
#include "curaug/sampling.hpp"
#include "oracles.hpp"

namespace curaug {
namespace {

std::vector<double> probs_of(const TokenDistribution& d) {
  return {d.probabilities().begin(), d.probabilities().end()};
}

void expect_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "id " << i;
}

std::vector<double> random_logits(Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal() * 2.0;
  return out;
}

const std::vector<double> kLogits = {2.0, 1.0, 0.5};

TEST(TopK, FullVocabularyIsIdentity) {
  const auto d = TokenDistribution::from_logits(kLogits);
  expect_close(probs_of(top_k_filter(d, 3)), probs_of(d), 1e-12);
}

TEST(TopK, SingleSurvivor) {
  const auto d = top_k_filter(TokenDistribution::from_logits(kLogits), 1);
  EXPECT_DOUBLE_EQ(d.probability(0), 1.0);
  EXPECT_EQ(d.support_size(), 1u);
}

TEST(TopK, TwoSurvivors) {
  const auto d = top_k_filter(TokenDistribution::from_logits(kLogits), 2);
  const double e = std::exp(1.0);
  EXPECT_NEAR(d.probability(0), e / (e + 1.0), 1e-12);
  EXPECT_NEAR(d.probability(1), 1.0 / (e + 1.0), 1e-12);
  EXPECT_NEAR(d.probability(0), 0.7311, 1e-4);
  EXPECT_FALSE(d.in_support(2));
}

TEST(TopK, OutOfRangeThrows) {
  const auto d = TokenDistribution::from_logits(kLogits);
  EXPECT_THROW(top_k_filter(d, 0), ParameterError);
  EXPECT_THROW(top_k_filter(d, 4), ParameterError);
}

TEST(TopK, TiesPreferLowerId) {
  const auto d = top_k_filter(TokenDistribution::from_logits({1.0, 3.0, 3.0, 3.0}), 2);
  EXPECT_TRUE(d.in_support(1));
  EXPECT_TRUE(d.in_support(2));
  EXPECT_FALSE(d.in_support(3));
}

TEST(TopP, ExamplesFromProbabilities) {
  const std::vector<double> p = {0.6, 0.3, 0.1};
  const auto d = TokenDistribution::from_probabilities(p);
  const auto half = top_p_filter(d, 0.5);
  EXPECT_EQ(half.support_size(), 1u);
  EXPECT_DOUBLE_EQ(half.probability(0), 1.0);
  const auto most = top_p_filter(d, 0.8);
  EXPECT_EQ(most.support_size(), 2u);
  EXPECT_NEAR(most.probability(0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(most.probability(1), 1.0 / 3.0, 1e-12);
  expect_close(probs_of(top_p_filter(d, 1.0)), p, 1e-12);
}

TEST(TopP, RejectsBadP) {
  const auto d = TokenDistribution::from_logits(kLogits);
  EXPECT_THROW(top_p_filter(d, 0.0), ParameterError);
  EXPECT_THROW(top_p_filter(d, 1.5), ParameterError);
}

TEST(BottomK, Examples) {
  const auto d = TokenDistribution::from_logits(kLogits);
  expect_close(probs_of(bottom_k_filter(d, 0)), probs_of(d), 0.0);
  const auto one = bottom_k_filter(d, 1);
  const double a = std::exp(1.0), b = std::exp(0.5);
  EXPECT_EQ(one.probability(0), 0.0);
  EXPECT_NEAR(one.probability(1), a / (a + b), 1e-12);
  EXPECT_NEAR(one.probability(2), b / (a + b), 1e-12);
  EXPECT_NEAR(one.probability(1), 0.6225, 1e-4);
  EXPECT_DOUBLE_EQ(bottom_k_filter(d, 2).probability(2), 1.0);
  EXPECT_THROW(bottom_k_filter(d, 3), ParameterError);
}

TEST(Filters, MatchBruteForceOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto logits = random_logits(rng, 10);
    const auto d = TokenDistribution::from_logits(logits);
    const auto ref = oracle::softmax(logits);
    expect_close(probs_of(d), ref, 1e-12);
    const std::size_t k = 1 + rng.uniform_index(9);
    const double p = 0.05 + 0.95 * rng.uniform01();
    expect_close(probs_of(top_k_filter(d, k)), oracle::top_k(ref, k), 1e-9);
    expect_close(probs_of(bottom_k_filter(d, k)), oracle::bottom_k(ref, k), 1e-9);
    expect_close(probs_of(top_p_filter(d, p)), oracle::top_p(ref, p), 1e-9);
  }
}

TEST(Filters, TopAndBottomPartitionTheSupport) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto logits = random_logits(rng, 12);
    logits[rng.uniform_index(12)] = logits[rng.uniform_index(12)];  // force some ties
    const auto d = TokenDistribution::from_logits(logits);
    const std::size_t k = 1 + rng.uniform_index(11);
    const auto top = top_k_filter(d, k);
    const auto bottom = bottom_k_filter(d, k);
    for (TokenId id = 0; id < 12; ++id) {
      EXPECT_NE(top.in_support(id), bottom.in_support(id)) << "id " << id << " k " << k;
    }
  }
}

TEST(Filters, OutputNormalizedWithinInputSupport) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto logits = random_logits(rng, 10);
    logits[rng.uniform_index(10)] = -INFINITY;
    const auto d = TokenDistribution::from_logits(logits);
    const std::size_t k = 1 + rng.uniform_index(d.support_size() - 1);
    for (const auto& f : {top_k_filter(d, k), bottom_k_filter(d, k), top_p_filter(d, 0.7)}) {
      const auto ps = probs_of(f);
      EXPECT_NEAR(std::accumulate(ps.begin(), ps.end(), 0.0), 1.0, 1e-9);
      for (TokenId id = 0; id < 10; ++id) {
        if (f.in_support(id)) EXPECT_TRUE(d.in_support(id));
      }
    }
  }
}

TEST(Temperature, SharpensAndFlattens) {
  const auto d = TokenDistribution::from_logits(kLogits);
  expect_close(probs_of(d.with_temperature(2.0)), oracle::softmax({1.0, 0.5, 0.25}), 1e-12);
  EXPECT_GT(d.with_temperature(0.5).probability(0), d.probability(0));
  EXPECT_THROW(d.with_temperature(0.0), ParameterError);
}

TEST(SampleToken, PointMass) {
  std::vector<double> p(8, 0.0);
  p[5] = 1.0;
  const auto d = TokenDistribution::from_probabilities(p);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(sample_token(d, rng), 5);
  }
}

TEST(SampleToken, FairCoinFrequencies) {
  const std::vector<double> p = {0.5, 0.5};
  const auto d = TokenDistribution::from_probabilities(p);
  Rng rng(3);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += sample_token(d, rng);
  EXPECT_NEAR(ones / static_cast<double>(n), 0.5, 0.01);
}

TEST(SampleToken, BottomKExcludedNeverDrawn) {
  const auto d = bottom_k_filter(TokenDistribution::from_logits(kLogits), 1);
  Rng rng(4);
  for (int i = 0; i < 20000; ++i) EXPECT_NE(sample_token(d, rng), 0);
}

TEST(SampleToken, ChiSquareAgainstFilteredDistribution) {
  const auto d = top_p_filter(TokenDistribution::from_logits({0.3, 1.2, -0.4, 0.9, 0.0, 2.1}), 0.9);
  Rng rng(5);
  const int n = 100000;
  std::vector<double> counts(d.vocab_size(), 0.0);
  for (int i = 0; i < n; ++i) counts[static_cast<std::size_t>(sample_token(d, rng))] += 1.0;
  double chi2 = 0.0;
  int cells = 0;
  for (TokenId id = 0; id < static_cast<TokenId>(d.vocab_size()); ++id) {
    if (!d.in_support(id)) {
      EXPECT_EQ(counts[id], 0.0);
      continue;
    }
    const double e = n * d.probability(id);
    chi2 += (counts[id] - e) * (counts[id] - e) / e;
    ++cells;
  }
  const boost::math::chi_squared dist(cells - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(SampleToken, EmptyOrUnnormalizedIsInternalError) {
  const std::vector<double> p = {1.0};
  const auto d = TokenDistribution::from_probabilities(p);
  std::vector<std::uint8_t> none = {0};
  Rng rng(1);
  EXPECT_THROW(sample_token(d.restricted(none), rng), std::exception);
}

TEST(Policy, BottomKThenFallback) {
  std::vector<double> logits(200);
  for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = -0.02 * static_cast<double>(i);
  const auto d = TokenDistribution::from_logits(logits);
  const auto spec = SamplerSpec::bottom_k(2, 1);
  const auto first = apply_policy(d, spec, 0);
  EXPECT_FALSE(first.in_support(0));
  EXPECT_FALSE(first.in_support(1));
  EXPECT_TRUE(first.in_support(2));
  const auto later = apply_policy(d, spec, 1);
  const auto want = top_p_filter(top_k_filter(d, 120), 0.95);
  expect_close(probs_of(later), probs_of(want), 0.0);
  EXPECT_LE(later.support_size(), 120u);
}

TEST(Policy, PureIgnoresStep) {
  const auto d = TokenDistribution::from_logits(kLogits);
  for (std::size_t step : {0u, 1u, 7u}) {
    expect_close(probs_of(apply_policy(d, SamplerSpec::pure(), step)), probs_of(d), 0.0);
  }
}

TEST(Policy, TemperatureBeforeFiltering) {
  auto spec = SamplerSpec::top_k(2);
  spec.temperature = 2.0;
  const auto d = TokenDistribution::from_logits(kLogits);
  expect_close(probs_of(apply_policy(d, spec, 0)), probs_of(top_k_filter(d.with_temperature(2.0), 2)),
               1e-15);
}

TEST(SamplerSpecText, RoundTrip) {
  for (const char* text : {"pure", "topk:k=40", "topp:p=0.9", "top:k=120,p=0.95",
                           "bottom:k=2,n=1,fallback=top:k=120,p=0.95",
                           "bottom:k=10,n=15,fallback=topk:k=40"}) {
    const auto spec = parse_sampler_spec(text);
    EXPECT_EQ(format_sampler_spec(spec), text);
    EXPECT_EQ(parse_sampler_spec(format_sampler_spec(spec)), spec);
  }
  auto odd = SamplerSpec::top_combined(80, 0.1 + 0.2);
  odd.temperature = 0.7;
  EXPECT_EQ(parse_sampler_spec(format_sampler_spec(odd)), odd);
}

TEST(SamplerSpecText, DefaultFallbackForBottom) {
  const auto spec = parse_sampler_spec("bottom:k=2,n=1");
  ASSERT_TRUE(spec.fallback);
  EXPECT_EQ(*spec.fallback, SamplerSpec::top_combined(120, 0.95));
}

TEST(SamplerSpecText, RejectsMalformed) {
  for (const char* text : {"", "sideways", "topk:k=0", "topp:p=0", "top:k=3", "pure:k=2",
                           "topk:k=4,fallback=pure", "bottom:k=-1,n=1"}) {
    EXPECT_THROW(parse_sampler_spec(text), ParameterError) << text;
  }
}

}  // namespace
}  // namespace curaug
