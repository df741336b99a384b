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
#include "curaug/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "curaug/error.hpp"
#include "curaug/text.hpp"

namespace curaug {
namespace {

std::set<std::string> content_words(std::string_view text) {
  const auto tokens = tokenize(text);
  std::set<std::string> content, words;
  for (const auto& t : tokens) {
    if (is_punctuation_token(t)) continue;
    words.insert(t);
    if (!is_stop_word(t)) content.insert(t);
  }
  if (!content.empty()) return content;
  if (!words.empty()) return words;
  return {tokens.begin(), tokens.end()};
}

std::string describe(const ScoringQuery& q) {
  return "source '" + std::string(q.source_id) + "' candidate " + std::to_string(q.candidate_index);
}

}  // namespace

double lexical_similarity(std::string_view source, std::string_view candidate) {
  const auto a = tokenize(source);
  const auto b = tokenize(candidate);
  if (a.empty() || b.empty()) throw DataError("lexical similarity of an empty text");
  std::unordered_map<std::string, long> counts;
  for (const auto& t : a) ++counts[t];
  long overlap = 0;
  for (const auto& t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  // F1 = 2PR / (P + R) = 2 * overlap / (|a| + |b|)
  const double f1 = 2.0 * static_cast<double>(overlap) / static_cast<double>(a.size() + b.size());
  return 2.0 * f1 - 1.0;
}

double content_coverage(std::string_view from, std::string_view to) {
  const auto a = content_words(from);
  if (a.empty()) throw DataError("content coverage of an empty text");
  const auto toks = tokenize(to);
  const std::unordered_set<std::string> b(toks.begin(), toks.end());
  const auto covered = std::count_if(a.begin(), a.end(), [&](const auto& w) { return b.contains(w); });
  return static_cast<double>(covered) / static_cast<double>(a.size());
}

HeuristicMIClassifier::HeuristicMIClassifier(double tau) : tau_(tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("MI threshold tau must lie in [0, 1]");
}

int HeuristicMIClassifier::classify(const ScoringQuery& q) const {
  return content_coverage(q.source, q.candidate) >= tau_ &&
                 content_coverage(q.candidate, q.source) >= tau_
             ? 1
             : 0;
}

// ---------------------------------------------------------------------------

PrecomputedScores PrecomputedScores::load(const std::filesystem::path& path) {
  PrecomputedScores scores;
  read_jsonl(path, [&](const Json& r, std::size_t line) {
    std::string id = require_string(r, "source_id", line);
    const std::int64_t index = require_integer(r, "candidate_index", line);
    const double sim = require_number(r, "similarity", line);
    const std::int64_t mi = require_integer(r, "mi", line);
    if (index < 0) throw DataError("line " + std::to_string(line) + ": negative candidate_index");
    if (mi != 0 && mi != 1) throw DataError("line " + std::to_string(line) + ": mi must be 0 or 1");
    if (!std::isfinite(sim)) throw DataError("line " + std::to_string(line) + ": similarity is not finite");
    const Key key{id, static_cast<std::size_t>(index)};
    if (scores.entries_.contains(key)) {
      throw ValidationError(path.string() + ": line " + std::to_string(line) + ": duplicate entry for ('" +
                            id + "', " + std::to_string(index) + ")");
    }
    scores.entries_.emplace(key, Entry{sim, static_cast<int>(mi)});
  });
  return scores;
}

void PrecomputedScores::add(std::string source_id, std::size_t index, Entry entry) {
  entries_[{std::move(source_id), index}] = entry;
}

const PrecomputedScores::Entry& PrecomputedScores::lookup(const ScoringQuery& q) const {
  const auto it = entries_.find({std::string(q.source_id), q.candidate_index});
  if (it == entries_.end()) throw ValidationError("no precomputed score for " + describe(q));
  return it->second;
}

double PrecomputedScores::score(const ScoringQuery& q) const { return lookup(q).similarity; }

int PrecomputedScores::classify(const ScoringQuery& q) const { return lookup(q).mi; }

std::vector<PrecomputedScores::Key> PrecomputedScores::missing(const CandidateBags& bags) const {
  std::vector<Key> out;
  for (const auto& [id, bag] : bags) {
    for (std::size_t i = 0; i < bag.size(); ++i) {
      if (!entries_.contains({id, i})) out.emplace_back(id, i);
    }
  }
  return out;
}

std::vector<PrecomputedScores::Key> PrecomputedScores::unused(const CandidateBags& bags) const {
  std::vector<Key> out;
  for (const auto& [key, entry] : entries_) {
    const auto it = bags.find(key.first);
    if (it == bags.end() || key.second >= it->second.size()) out.push_back(key);
  }
  return out;
}

// ---------------------------------------------------------------------------

int filter_candidate(int mi, double similarity, double beta) {
  return mi + (1 - mi) * (similarity >= beta ? 1 : 0);
}

std::vector<int> assign_difficulty(std::span<const double> similarities, int levels) {
  if (similarities.empty()) throw DataError("cannot rank an empty candidate bag");
  if (levels < 1) throw ParameterError("number of curriculum levels must be at least 1");
  for (double s : similarities) {
    if (std::isnan(s)) throw DataError("similarity score is NaN");
  }
  std::vector<std::size_t> order(similarities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return similarities[a] > similarities[b];
  });
  const auto n = static_cast<long long>(similarities.size());
  std::vector<int> difficulty(similarities.size(), 0);
  for (long long rank = 1; rank <= n; ++rank) {
    // ceil(levels * rank / n) in exact integer arithmetic
    difficulty[order[static_cast<std::size_t>(rank - 1)]] =
        static_cast<int>((levels * rank + n - 1) / n);
  }
  return difficulty;
}

std::vector<ParaphraseCandidate> build_candidate_records(const TrainingInstance& instance,
                                                         const std::vector<std::string>& raw,
                                                         const SimilarityScorer& scorer,
                                                         const MIClassifier& classifier,
                                                         const ScoringConfig& config) {
  if (config.levels < 1) throw ParameterError("number of curriculum levels must be at least 1");
  std::vector<ParaphraseCandidate> records;
  // Verbatim copies of the source and repeated candidates carry no new data.
  std::unordered_set<std::string> seen{join_tokens(tokenize(instance.text))};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const ScoringQuery q{instance.id, i, instance.text, raw[i]};
    ParaphraseCandidate c;
    c.source_id = instance.id;
    c.index = i;
    c.text = raw[i];
    try {
      c.similarity = scorer.score(q);
      c.mi = classifier.classify(q);
    } catch (const DataError& e) {
      throw DataError(describe(q) + ": " + e.what());
    }
    if (c.mi != 0 && c.mi != 1) throw DataError(describe(q) + ": classifier returned " + std::to_string(c.mi));
    c.kept = filter_candidate(c.mi, c.similarity, config.beta) == 1;
    if (!seen.insert(join_tokens(tokenize(c.text))).second) continue;
    records.push_back(std::move(c));
  }

  std::vector<double> kept_sims;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].kept) {
      kept_sims.push_back(records[i].similarity);
      kept_pos.push_back(i);
    }
  }
  if (!kept_sims.empty()) {
    const auto d = assign_difficulty(kept_sims, config.levels);
    for (std::size_t j = 0; j < kept_pos.size(); ++j) records[kept_pos[j]].difficulty = d[j];
  }
  return records;
}

}  // namespace curaug
