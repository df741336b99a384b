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

#include "curaug/error.hpp"
#include "curaug/metrics.hpp"
#include "curaug/random.hpp"
#include "curaug/text.hpp"
#include "oracles.hpp"

namespace curaug {
namespace {

TEST(DistinctN, HandExamples) {
  EXPECT_DOUBLE_EQ(distinct_n({{"a", "b", "a", "b"}}, 1), 0.5);
  EXPECT_DOUBLE_EQ(distinct_n({{"a", "b", "c", "d"}}, 1), 1.0);
  EXPECT_DOUBLE_EQ(distinct_n({{"a", "b"}, {"a", "b"}}, 2), 0.5);
  EXPECT_DOUBLE_EQ(distinct_n({{"a", "b", "a", "b"}}, 2), 2.0 / 3.0);
}

TEST(DistinctN, WindowsStayInsideTexts) {
  // "b c" would only exist across the boundary.
  const auto c = count_distinct({{"a", "b"}, {"c", "d"}}, 2);
  EXPECT_EQ(c.distinct, 2u);
  EXPECT_EQ(c.total, 2u);
}

TEST(DistinctN, Errors) {
  EXPECT_THROW(distinct_n({{"a"}}, 2), DataError);
  EXPECT_THROW(distinct_n({}, 1), DataError);
  EXPECT_THROW(distinct_n({{"a"}}, 0), ParameterError);
}

TEST(DistinctN, RandomTextsAgainstOracle) {
  Rng rng(1);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TokenSequence> texts(1 + rng.uniform_index(6));
    for (auto& t : texts) {
      t.resize(1 + rng.uniform_index(8));
      for (auto& w : t) w = words[rng.uniform_index(words.size())];
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      bool any = false;
      for (const auto& t : texts) any = any || t.size() >= n;
      if (!any) continue;
      const double got = distinct_n(texts, n);
      EXPECT_DOUBLE_EQ(got, oracle::distinct(texts, n));
      EXPECT_GT(got, 0.0);
      EXPECT_LE(got, 1.0);
      // An exact duplicate never raises the ratio.
      auto more = texts;
      more.push_back(texts[rng.uniform_index(texts.size())]);
      EXPECT_LE(distinct_n(more, n), got + 1e-15);
      // Order does not matter.
      auto rev = texts;
      std::reverse(rev.begin(), rev.end());
      EXPECT_DOUBLE_EQ(distinct_n(rev, n), got);
    }
  }
}

TEST(DiversityReport, FixedOrderFormat) {
  const auto report = diversity_report({{"a", "b", "a", "b"}}, {2, 1});
  EXPECT_EQ(format_report(report), "n\tdistinct\ttotal\tratio\n1\t2\t4\t0.500\n2\t2\t3\t0.667\n");
  EXPECT_TRUE(diversity_report({{"a"}}, {}).by_n.empty());
}

TEST(OverlapStats, MeanMinMax) {
  const auto s = overlap_stats({{"a b", "a b"}, {"a b", "c d"}});
  EXPECT_EQ(s.count, 2u);
  EXPECT_DOUBLE_EQ(s.mean_similarity, 0.0);
  EXPECT_DOUBLE_EQ(s.min_similarity, -1.0);
  EXPECT_DOUBLE_EQ(s.max_similarity, 1.0);
}

TEST(Tokenize, LowercaseAndPunctuation) {
  EXPECT_EQ(tokenize("Hello, World!  It's"), (std::vector<std::string>{"hello", ",", "world", "!", "it's"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

}  // namespace
}  // namespace curaug
