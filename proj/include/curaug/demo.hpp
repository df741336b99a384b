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

// End-to-end few-shot classification demo: synthetic task, builtin
// generator, augmentation cache, curriculum training and nearest-neighbor
// evaluation, repeated over seeds and schedule modes.

#include <cstdint>
#include <string>
#include <vector>

#include "curaug/curriculum.hpp"
#include "curaug/downstream.hpp"
#include "curaug/ngram.hpp"
#include "curaug/synthetic.hpp"

namespace curaug {

// "none" trains on the originals only, with the cyclic schedule.
inline constexpr const char* kNoAugmentation = "none";

struct DemoConfig {
  DemoConfig();  // tuned defaults for the synthetic task

  std::vector<std::string> modes = {"cyclic", "gradual", "random", "inverse"};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  SyntheticTaskOptions task;
  std::size_t lm_order = kDefaultOrder;
  double lm_alpha = kDefaultAlpha;
  SourceConditionedModel::Options generator;
  GenerationPlan plan;
  ScoringConfig scoring;
  double mi_threshold = kDefaultMIThreshold;
  ScheduleSpec schedule;  // mode and order_seed are set per run
  TripletConfig triplet;
  EmbeddingModel::Options embedding;
  unsigned threads = 1;

  void validate() const;
};

struct DemoRun {
  std::string mode;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::vector<LogEntry> log;
  friend bool operator==(const DemoRun&, const DemoRun&) = default;
};

// Per-seed artifacts shared by all modes.
struct DemoSeedData {
  SyntheticTask task;
  AugmentationCache cache;
  AugmentationCache originals_only;
};

DemoSeedData prepare_demo_seed(const DemoConfig& config, std::uint64_t seed);

DemoRun run_demo_mode(const DemoConfig& config, const DemoSeedData& data, const std::string& mode,
                      std::uint64_t seed);

// Runs are ordered seed-major, then by config.modes.
std::vector<DemoRun> run_demo(const DemoConfig& config);

// Accuracy table: one row per mode, one column per seed, then the mean.
std::string format_demo_table(const DemoConfig& config, const std::vector<DemoRun>& runs);

double mean_accuracy(const std::vector<DemoRun>& runs, const std::string& mode);

}  // namespace curaug
