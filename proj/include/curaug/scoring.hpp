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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curaug/generator.hpp"
#include "curaug/jsonl.hpp"

namespace curaug {

// Everything a scorer may key on. File-backed scorers use the id and index,
// text scorers the two strings.
struct ScoringQuery {
  std::string_view source_id;
  std::size_t candidate_index = 0;
  std::string_view source;
  std::string_view candidate;
};

class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double score(const ScoringQuery& q) const = 0;
  virtual std::string name() const = 0;
};

class MIClassifier {
 public:
  virtual ~MIClassifier() = default;
  // 1 when the pair is judged mutually implicative, 0 otherwise.
  virtual int classify(const ScoringQuery& q) const = 0;
  virtual std::string name() const = 0;
};

// 2 * F1(token multisets) - 1, in [-1, 1]. Throws DataError on empty text.
double lexical_similarity(std::string_view source, std::string_view candidate);

// Fraction of the distinct content words of from that also occur in to.
// Stop words and punctuation are not content words; a text made only of
// those falls back to its non-punctuation tokens, then to all tokens.
double content_coverage(std::string_view from, std::string_view to);

class LexicalSimilarity final : public SimilarityScorer {
 public:
  double score(const ScoringQuery& q) const override {
    return lexical_similarity(q.source, q.candidate);
  }
  std::string name() const override { return "lexical"; }
};

inline constexpr double kDefaultMIThreshold = 0.6;

// Proxy for a trained mutual implication classifier: content-word coverage
// must reach tau in both directions.
class HeuristicMIClassifier final : public MIClassifier {
 public:
  explicit HeuristicMIClassifier(double tau = kDefaultMIThreshold);
  int classify(const ScoringQuery& q) const override;
  std::string name() const override { return "heuristic"; }
  double tau() const { return tau_; }

 private:
  double tau_;
};

// Precomputed {"source_id", "candidate_index", "similarity", "mi"} records.
// Serves as both scorer and classifier.
class PrecomputedScores final : public SimilarityScorer, public MIClassifier {
 public:
  struct Entry {
    double similarity = 0.0;
    int mi = 0;
  };
  using Key = std::pair<std::string, std::size_t>;

  static PrecomputedScores load(const std::filesystem::path& path);
  void add(std::string source_id, std::size_t index, Entry entry);

  double score(const ScoringQuery& q) const override;
  int classify(const ScoringQuery& q) const override;
  std::string name() const override { return "file"; }

  // Candidates in bags without an entry, in bag order.
  std::vector<Key> missing(const CandidateBags& bags) const;
  // Entries that refer to no candidate in bags.
  std::vector<Key> unused(const CandidateBags& bags) const;

 private:
  const Entry& lookup(const ScoringQuery& q) const;
  std::map<Key, Entry> entries_;
};

// Keep rule: mi + (1 - mi) * [sim >= beta]. 1 keeps, 0 discards.
int filter_candidate(int mi, double similarity, double beta);

// Rank-based difficulty: sort by similarity descending (ties by position),
// the candidate at 1-based rank r gets ceil(levels * r / n). Returns the
// difficulty of each input position.
std::vector<int> assign_difficulty(std::span<const double> similarities, int levels);

inline constexpr double kDefaultBeta = 0.5;
inline constexpr int kDefaultLevels = 5;

struct ScoringConfig {
  double beta = kDefaultBeta;
  int levels = kDefaultLevels;
};

struct ParaphraseCandidate {
  std::string source_id;
  std::size_t index = 0;  // position in the raw candidate bag
  std::string text;
  double similarity = 0.0;
  int mi = 0;
  bool kept = false;
  int difficulty = 0;  // 1..levels when kept, 0 otherwise

  friend bool operator==(const ParaphraseCandidate&, const ParaphraseCandidate&) = default;
};

// Scores every raw candidate, applies the keep rule, drops exact duplicate
// texts (first occurrence wins) and assigns difficulties over the kept set.
// Returned records include discarded candidates, flagged kept = false.
std::vector<ParaphraseCandidate> build_candidate_records(const TrainingInstance& instance,
                                                         const std::vector<std::string>& raw,
                                                         const SimilarityScorer& scorer,
                                                         const MIClassifier& classifier,
                                                         const ScoringConfig& config);

}  // namespace curaug
