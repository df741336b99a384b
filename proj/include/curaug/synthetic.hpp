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

// Seeded few-shot text classification task with pseudo-word vocabularies.
// Each class owns a set of topic words; sentences interleave runs of shared
// filler words with short topic phrases, so an n-gram model trained on the
// unlabeled pool learns which topic words co-occur.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "curaug/jsonl.hpp"

namespace curaug {

struct SyntheticTaskOptions {
  std::size_t classes = 5;
  std::size_t shots = 5;             // training instances per class
  std::size_t test_per_class = 40;
  std::size_t unlabeled = 600;       // LM training pool, mixed classes
  std::size_t topic_words = 30;      // per class
  std::size_t filler_words = 120;    // shared by all classes
  std::size_t min_length = 8;
  std::size_t max_length = 16;
  double topic_rate = 0.3;           // chance that the next chunk is a topic phrase
  double leak_rate = 0.1;            // chance that a topic phrase comes from another class

  void validate() const;
};

struct SyntheticTask {
  std::vector<std::string> labels;
  std::vector<TrainingInstance> train;
  std::vector<TrainingInstance> test;
  std::vector<TrainingInstance> unlabeled;  // labels kept for inspection only
};

SyntheticTask make_synthetic_task(std::uint64_t seed, const SyntheticTaskOptions& options = {});

}  // namespace curaug
