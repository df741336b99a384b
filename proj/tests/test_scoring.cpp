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

#include <cmath>
#include <map>

#include "curaug/error.hpp"
#include "curaug/random.hpp"
#include "curaug/scoring.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace curaug {
namespace {

const std::vector<double> kTableScores = {0.888, 0.619, 0.371, -0.038, -0.265, -0.506};

// Scores looked up by candidate text.
class FixedScores final : public SimilarityScorer, public MIClassifier {
 public:
  std::map<std::string, std::pair<double, int>> table;
  double score(const ScoringQuery& q) const override { return table.at(std::string(q.candidate)).first; }
  int classify(const ScoringQuery& q) const override { return table.at(std::string(q.candidate)).second; }
  std::string name() const override { return "fixed"; }
};

TEST(LexicalSimilarity, Examples) {
  EXPECT_DOUBLE_EQ(lexical_similarity("the cat sat", "the cat sat"), 1.0);
  EXPECT_DOUBLE_EQ(lexical_similarity("a b", "c d"), -1.0);
  EXPECT_DOUBLE_EQ(lexical_similarity("a b", "a c"), 0.0);
  EXPECT_DOUBLE_EQ(lexical_similarity("The Cat.", "the cat ."), 1.0);
  EXPECT_THROW(lexical_similarity("", "a"), DataError);
}

TEST(LexicalSimilarity, CountsMultisets) {
  // overlap 1 of candidate length 2 and source length 4: F1 = 2/6.
  EXPECT_NEAR(lexical_similarity("a a b c", "a d"), 2.0 * (1.0 / 3.0) - 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(lexical_similarity("x y", "y x"), lexical_similarity("y x", "x y"));
}

TEST(HeuristicMI, CoverageBothWays) {
  const HeuristicMIClassifier mi(0.6);
  auto q = [](const char* s, const char* c) { return ScoringQuery{"id", 0, s, c}; };
  EXPECT_EQ(mi.classify(q("the cat sat on the mat", "on the mat the cat sat")), 1);
  EXPECT_EQ(mi.classify(q("the cat sat on the mat", "a dog barked")), 0);
  // Candidate covers the source but adds too much of its own.
  EXPECT_EQ(mi.classify(q("cat mat", "cat mat dog log fog bog")), 0);
  EXPECT_THROW(HeuristicMIClassifier(1.5), ParameterError);
}

TEST(ContentCoverage, StopWordsIgnored) {
  EXPECT_DOUBLE_EQ(content_coverage("the cat and the dog", "a cat"), 0.5);
  EXPECT_DOUBLE_EQ(content_coverage("the and", "the"), 0.5);
}

TEST(FilterCandidate, TruthTable) {
  EXPECT_EQ(filter_candidate(1, -0.9, 0.5), 1);
  EXPECT_EQ(filter_candidate(0, 0.9, 0.5), 1);
  EXPECT_EQ(filter_candidate(0, 0.2, 0.5), 0);
  EXPECT_EQ(filter_candidate(1, 0.9, 0.5), 1);
  EXPECT_EQ(filter_candidate(0, 0.5, 0.5), 1);
}

TEST(FilterCandidate, MatchesFormulaOnRandomInputs) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const int mi = static_cast<int>(rng.uniform_index(2));
    const double sim = 2.0 * rng.uniform01() - 1.0;
    const double beta = 2.0 * rng.uniform01() - 1.0;
    EXPECT_EQ(filter_candidate(mi, sim, beta), oracle::keep(mi, sim, beta));
  }
}

TEST(AssignDifficulty, TableExample) {
  EXPECT_EQ(assign_difficulty(kTableScores, 5), (std::vector<int>{1, 2, 3, 4, 5, 5}));
}

TEST(AssignDifficulty, SingleCandidateIsHardest) {
  EXPECT_EQ(assign_difficulty(std::vector<double>{0.3}, 5), std::vector<int>{5});
}

TEST(AssignDifficulty, BagOfSizeCIsIdentityRanks) {
  for (int c = 1; c <= 10; ++c) {
    std::vector<double> sims;
    std::vector<int> want;
    for (int r = 1; r <= c; ++r) {
      sims.push_back(1.0 - 0.1 * r);
      want.push_back(r);
    }
    EXPECT_EQ(assign_difficulty(sims, c), want);
  }
}

TEST(AssignDifficulty, TiesBrokenByPosition) {
  EXPECT_EQ(assign_difficulty(std::vector<double>{0.5, 0.5, 0.5, 0.5}, 2),
            (std::vector<int>{1, 1, 2, 2}));
}

TEST(AssignDifficulty, Errors) {
  EXPECT_THROW(assign_difficulty(std::vector<double>{}, 5), DataError);
  EXPECT_THROW(assign_difficulty(std::vector<double>{0.1}, 0), ParameterError);
  EXPECT_THROW(assign_difficulty(std::vector<double>{NAN}, 5), DataError);
}

TEST(AssignDifficulty, RandomBagsAgainstOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(100);
    const int c = 1 + static_cast<int>(rng.uniform_index(10));
    std::vector<double> sims(n);
    for (double& s : sims) s = std::round((2.0 * rng.uniform01() - 1.0) * 50.0) / 50.0;
    const auto d = assign_difficulty(sims, c);
    ASSERT_EQ(d, oracle::difficulties(sims, c));
    const auto order = oracle::rank_ids(sims);
    const int ni = static_cast<int>(n);
    EXPECT_EQ(d[order.front()], (c + ni - 1) / ni);
    if (ni >= c) EXPECT_EQ(d[order.front()], 1);
    EXPECT_EQ(d[order.back()], c);
    for (std::size_t i = 1; i < order.size(); ++i) EXPECT_LE(d[order[i - 1]], d[order[i]]);
  }
}

TEST(AssignDifficulty, InvariantUnderMonotoneMaps) {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(60);
    const int c = 1 + static_cast<int>(rng.uniform_index(10));
    std::vector<double> sims(n), mapped(n);
    for (std::size_t i = 0; i < n; ++i) {
      sims[i] = 2.0 * rng.uniform01() - 1.0;
      mapped[i] = sims[i] * sims[i] * sims[i] + 2.0 * sims[i];
    }
    EXPECT_EQ(assign_difficulty(sims, c), assign_difficulty(mapped, c));
  }
}

TEST(CandidateRecords, TableBagAllImplied) {
  FixedScores fixed;
  std::vector<std::string> raw;
  for (std::size_t i = 0; i < kTableScores.size(); ++i) {
    raw.push_back("candidate " + std::to_string(i));
    fixed.table[raw.back()] = {kTableScores[i], 1};
  }
  const auto recs = build_candidate_records({"s", "source text", {}}, raw, fixed, fixed, {});
  ASSERT_EQ(recs.size(), 6u);
  std::vector<int> d;
  for (const auto& r : recs) {
    EXPECT_TRUE(r.kept);
    d.push_back(r.difficulty);
  }
  EXPECT_EQ(d, (std::vector<int>{1, 2, 3, 4, 5, 5}));
}

TEST(CandidateRecords, NothingKept) {
  FixedScores fixed;
  fixed.table = {{"x", {0.1, 0}}, {"y", {0.2, 0}}};
  const auto recs = build_candidate_records({"s", "src", {}}, {"x", "y"}, fixed, fixed, {});
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) {
    EXPECT_FALSE(r.kept);
    EXPECT_EQ(r.difficulty, 0);
  }
}

TEST(CandidateRecords, DuplicatesAndSourceCopiesDropped) {
  FixedScores fixed;
  fixed.table = {{"a b", {0.9, 1}}, {"A b", {0.9, 1}}, {"src", {1.0, 1}}, {"c", {0.1, 1}}};
  const auto recs = build_candidate_records({"s", "src", {}}, {"a b", "src", "A b", "c"}, fixed, fixed, {});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].index, 0u);
  EXPECT_EQ(recs[1].index, 3u);
}

TEST(CandidateRecords, KeptSatisfyRuleOnLexicalScores) {
  const LexicalSimilarity sim;
  const HeuristicMIClassifier mi;
  const std::vector<std::string> raw = {"the cat sat on a mat", "dogs bark loudly", "a cat sat",
                                        "mat on the cat sat", "the the the"};
  const ScoringConfig cfg{0.2, 5};
  for (const auto& r : build_candidate_records({"s", "the cat sat on the mat", {}}, raw, sim, mi, cfg)) {
    EXPECT_EQ(r.kept, oracle::keep(r.mi, r.similarity, cfg.beta) == 1);
    if (r.kept) {
      EXPECT_GE(r.difficulty, 1);
      EXPECT_LE(r.difficulty, 5);
    }
  }
}

TEST(PrecomputedScores, LoadLookupAndCoverage) {
  testing_util::TempDir dir;
  testing_util::write_file(dir / "s.jsonl",
                           "{\"source_id\":\"s1\",\"candidate_index\":0,\"similarity\":0.4,\"mi\":1}\n"
                           "{\"source_id\":\"s1\",\"candidate_index\":2,\"similarity\":-0.1,\"mi\":0}\n"
                           "{\"source_id\":\"s9\",\"candidate_index\":0,\"similarity\":0.0,\"mi\":0}\n");
  const auto scores = PrecomputedScores::load(dir / "s.jsonl");
  const ScoringQuery q{"s1", 2, "x", "y"};
  EXPECT_DOUBLE_EQ(scores.score(q), -0.1);
  EXPECT_EQ(scores.classify(q), 0);
  const CandidateBags bags = {{"s1", {"a", "b", "c"}}};
  using Key = PrecomputedScores::Key;
  EXPECT_EQ(scores.missing(bags), (std::vector<Key>{{"s1", 1}}));
  EXPECT_EQ(scores.unused(bags), (std::vector<Key>{{"s9", 0}}));
  EXPECT_THROW(scores.score({"s1", 1, "x", "y"}), ValidationError);
}

TEST(PrecomputedScores, RejectsBadRecords) {
  testing_util::TempDir dir;
  testing_util::write_file(dir / "mi.jsonl",
                           "{\"source_id\":\"s1\",\"candidate_index\":0,\"similarity\":0.4,\"mi\":2}\n");
  EXPECT_THROW(PrecomputedScores::load(dir / "mi.jsonl"), DataError);
  testing_util::write_file(dir / "dup.jsonl",
                           "{\"source_id\":\"s1\",\"candidate_index\":0,\"similarity\":0.4,\"mi\":1}\n"
                           "{\"source_id\":\"s1\",\"candidate_index\":0,\"similarity\":0.5,\"mi\":1}\n");
  EXPECT_THROW(PrecomputedScores::load(dir / "dup.jsonl"), ValidationError);
}

}  // namespace
}  // namespace curaug
