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
#include <map>
#include <set>
#include <string>
#include <vector>

namespace curaug {

using TokenSequence = std::vector<std::string>;

// Distinct N-grams over total N-grams, pooled over all texts. Windows never
// cross text boundaries. Throws DataError when no text has N tokens.
double distinct_n(const std::vector<TokenSequence>& texts, std::size_t n);

struct DistinctCount {
  std::size_t distinct = 0;
  std::size_t total = 0;
  double ratio = 0.0;
};

struct DiversityReport {
  std::map<std::size_t, DistinctCount> by_n;
};

DistinctCount count_distinct(const std::vector<TokenSequence>& texts, std::size_t n);
DiversityReport diversity_report(const std::vector<TokenSequence>& texts, const std::set<std::size_t>& ns);

// Tab-separated "n distinct total ratio" lines, ratio to three decimals.
std::string format_report(const DiversityReport& report);

struct OverlapStats {
  std::size_t count = 0;
  double mean_similarity = 0.0;
  double min_similarity = 0.0;
  double max_similarity = 0.0;
};

// Lexical similarity of every candidate to its source.
OverlapStats overlap_stats(const std::vector<std::pair<std::string, std::string>>& source_candidate);

}  // namespace curaug
