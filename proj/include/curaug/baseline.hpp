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

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "curaug/curriculum.hpp"
#include "curaug/random.hpp"

namespace curaug {

// Word-level perturbation augmentation where the perturbation ratio is the
// difficulty measure.

enum class EditOp { swap = 0, remove = 1, insert_duplicate = 2, synonym_replace = 3 };

using Lexicon = std::map<std::string, std::vector<std::string>>;

struct PerturbationSpec {
  double ratio = 0.0;
  bool swap = true;
  bool remove = true;
  bool insert_duplicate = true;
  bool synonym_replace = false;
  std::shared_ptr<const Lexicon> lexicon;
  // Out-of-lexicon words (or no lexicon at all) turn a synonym replacement into
  // an insert_duplicate. Without the fallback a lexicon is mandatory.
  bool synonym_fallback = true;

  void validate() const;
};

struct PerturbResult {
  std::vector<std::string> tokens;
  std::size_t edits = 0;    // ceil(ratio * length) edit slots
  std::size_t skipped = 0;  // slots that changed nothing (last-token deletion, ...)
  std::array<std::size_t, 4> applied{};  // per EditOp, after fallbacks
};

// Applies ceil(ratio * length) single-token edits, each a uniformly chosen
// enabled operation at a uniformly chosen position. Never empties the text.
PerturbResult perturb(const std::vector<std::string>& tokens, const PerturbationSpec& spec, Rng& rng);

// Linear ramp: level / levels * max_ratio.
double ratio_for_level(int level, int levels, double max_ratio);

inline constexpr double kDefaultMaxRatio = 0.3;

// Lexicon file: {"word", "synonym"} per line.
Lexicon load_lexicon(const std::filesystem::path& path);

struct PerturbationCachePlan {
  int levels = kDefaultLevels;
  double max_ratio = kDefaultMaxRatio;
  std::size_t per_level = 4;
  PerturbationSpec operations;  // ratio is overridden per level
};

// Fills bucket l of every instance with perturbations at ratio_for_level(l).
AugmentationCache build_perturbation_cache(const std::vector<TrainingInstance>& dataset,
                                           const PerturbationCachePlan& plan, std::uint64_t seed,
                                           Json provenance);

}  // namespace curaug
