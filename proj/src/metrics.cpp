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
#include "curaug/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "curaug/error.hpp"
#include "curaug/scoring.hpp"

namespace curaug {

DistinctCount count_distinct(const std::vector<TokenSequence>& texts, std::size_t n) {
  if (n < 1) throw ParameterError("n-gram order must be at least 1");
  std::set<std::vector<std::string>> seen;
  DistinctCount out;
  for (const auto& text : texts) {
    if (text.size() < n) continue;
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
      seen.emplace(text.begin() + static_cast<std::ptrdiff_t>(i),
                   text.begin() + static_cast<std::ptrdiff_t>(i + n));
      ++out.total;
    }
  }
  if (out.total == 0) {
    throw DataError("no text has at least " + std::to_string(n) + " tokens");
  }
  out.distinct = seen.size();
  out.ratio = static_cast<double>(out.distinct) / static_cast<double>(out.total);
  return out;
}

double distinct_n(const std::vector<TokenSequence>& texts, std::size_t n) {
  return count_distinct(texts, n).ratio;
}

DiversityReport diversity_report(const std::vector<TokenSequence>& texts, const std::set<std::size_t>& ns) {
  DiversityReport report;
  for (std::size_t n : ns) report.by_n[n] = count_distinct(texts, n);
  return report;
}

std::string format_report(const DiversityReport& report) {
  std::string out = "n\tdistinct\ttotal\tratio\n";
  char buf[128];
  for (const auto& [n, c] : report.by_n) {
    std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%zu\t%.3f\n", n, c.distinct, c.total, c.ratio);
    out += buf;
  }
  return out;
}

OverlapStats overlap_stats(const std::vector<std::pair<std::string, std::string>>& source_candidate) {
  OverlapStats s;
  if (source_candidate.empty()) return s;
  s.min_similarity = std::numeric_limits<double>::infinity();
  s.max_similarity = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& [src, cand] : source_candidate) {
    const double v = lexical_similarity(src, cand);
    sum += v;
    s.min_similarity = std::min(s.min_similarity, v);
    s.max_similarity = std::max(s.max_similarity, v);
  }
  s.count = source_candidate.size();
  s.mean_similarity = sum / static_cast<double>(s.count);
  return s;
}

}  // namespace curaug
