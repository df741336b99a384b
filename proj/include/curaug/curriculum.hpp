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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curaug/generator.hpp"
#include "curaug/jsonl.hpp"
#include "curaug/random.hpp"
#include "curaug/scoring.hpp"

namespace curaug {

inline constexpr int kCacheFormatVersion = 1;

// Per-instance bags of difficulty-bucketed paraphrases. Bucket 0 holds exactly
// the original text; bucket d holds the kept candidates of difficulty d.
// Immutable once assembled.
class AugmentationCache {
 public:
  struct Entry {
    TrainingInstance original;
    std::vector<std::vector<std::string>> buckets;  // size levels + 1
    std::vector<ParaphraseCandidate> records;       // kept and discarded
    std::string error;                              // generation/scoring failure, if any
  };

  // records[i] belongs to dataset[i]. Kept records must carry difficulties in
  // 1..levels.
  static AugmentationCache assemble(const std::vector<TrainingInstance>& dataset,
                                    std::vector<std::vector<ParaphraseCandidate>> records,
                                    std::vector<std::string> errors, int levels, Json provenance);

  int levels() const { return levels_; }
  const Json& provenance() const { return provenance_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& at(std::size_t i) const { return entries_.at(i); }
  // DataError for unknown ids.
  const Entry& entry(std::string_view source_id) const;
  bool contains(std::string_view source_id) const;

  // Header record, then per instance its original record followed by its
  // candidate records. Stable field order.
  std::string serialize() const;
  static AugmentationCache deserialize(const std::string& text, const std::string& origin = "<memory>");
  static AugmentationCache load(const std::filesystem::path& path);

  // Bucket sizes summed over instances, index = difficulty.
  std::vector<std::size_t> bucket_histogram() const;

 private:
  int levels_ = 0;
  Json provenance_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

using CandidateProvider = std::function<std::vector<std::string>(const TrainingInstance&)>;

// Samplers for the two generation regimes and the candidate budget split.
struct GenerationPlan {
  SamplerSpec easy = SamplerSpec::top_combined(kDefaultFallbackK, kDefaultFallbackP);
  SamplerSpec hard = SamplerSpec::bottom_k(2, 1);
  std::size_t candidates = kDefaultCandidateCount;
  double hard_fraction = 0.5;
  std::size_t max_len = kDefaultMaxLength;

  std::size_t hard_count() const;
  std::size_t easy_count() const { return candidates - hard_count(); }
};

// Generates easy-regime then hard-regime candidates from the builtin model.
// Each instance and regime gets its own random stream derived from
// (seed, source id), so results do not depend on processing order. Empty
// generations are dropped.
CandidateProvider builtin_provider(const LanguageModel& model, GenerationPlan plan, std::uint64_t seed);

// Candidates from an external file; ids absent from the file get no candidates.
CandidateProvider external_provider(CandidateBags bags);

// Generates, filters and buckets candidates for every instance. Failures are
// recorded on the instance, which then keeps only its original. threads > 1
// processes instances concurrently without changing the result.
AugmentationCache build_cache(const std::vector<TrainingInstance>& dataset,
                              const CandidateProvider& provider, const SimilarityScorer& scorer,
                              const MIClassifier& classifier, const ScoringConfig& config,
                              Json provenance, unsigned threads = 1);

struct Retrieved {
  std::string text;
  int level = 0;  // bucket the text was drawn from
};

// Level 0 is the original; otherwise a uniform draw from bucket level, falling
// back to the nearest non-empty lower bucket.
Retrieved retrieve(const AugmentationCache& cache, std::string_view source_id, int level, Rng& rng);

// ---------------------------------------------------------------------------

enum class ScheduleMode { cyclic, gradual, two_stage, random, inverse, inverse_cyclic };

std::string_view schedule_mode_name(ScheduleMode mode);
ScheduleMode parse_schedule_mode(std::string_view name);

struct PlateauRule {
  std::size_t window = 5;
  double min_improvement = 1e-3;
};

struct ScheduleSpec {
  ScheduleMode mode = ScheduleMode::cyclic;
  int levels = kDefaultLevels;
  int cycles = 2;  // cyclic mode only
  std::size_t steps_per_level = 10;
  std::size_t batch_size = 8;
  int two_stage_level = -1;      // augmented stage of two_stage; -1 means levels
  std::uint64_t order_seed = 0;  // random mode permutation
  bool repeat_boundary = true;   // inverse_cyclic: ...,C,C,... versus ...,C,C-1,...
  std::optional<PlateauRule> plateau;

  void validate() const;
};

struct Stage {
  int level = 0;
  int cycle = 0;
};

// cyclic: (0..C) x cycles; gradual: 0..C; two_stage: 0, L; inverse: C..0;
// random: seeded permutation of 0..C; inverse_cyclic: 0..C then C..0.
std::vector<int> level_sequence(const ScheduleSpec& spec);
std::vector<Stage> stage_plan(const ScheduleSpec& spec);

struct BatchItem {
  std::string source_id;
  std::string text;
  std::optional<std::string> label;
  int level = 0;         // requested curriculum level
  int bucket_level = 0;  // bucket actually used
};

class TrainerHook {
 public:
  virtual ~TrainerHook() = default;
  // Returns the (finite) training loss of the batch.
  virtual double train_batch(std::span<const BatchItem> batch) = 0;
};

struct LogEntry {
  std::size_t step = 0;
  int cycle = 0;
  int level = 0;
  double loss = 0.0;
  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

// Walks the stage plan; each step samples batch_size instances uniformly with
// replacement, retrieves them at the current level and trains once. A
// non-finite loss throws TrainingError naming the step and level.
std::vector<LogEntry> run(const AugmentationCache& cache, const ScheduleSpec& spec,
                          TrainerHook& trainer, Rng& rng);

std::string serialize_log(const std::vector<LogEntry>& log);

struct ScheduledItem {
  std::size_t step = 0;
  std::string source_id;
  int level = 0;
  std::string text;
};

// The exact item order run() would feed a trainer (plateau rule ignored).
std::vector<ScheduledItem> export_schedule(const AugmentationCache& cache, const ScheduleSpec& spec,
                                           Rng& rng);

}  // namespace curaug
