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
#include "curaug/synthetic.hpp"

#include <set>

#include "curaug/error.hpp"
#include "curaug/random.hpp"

namespace curaug {

namespace {

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};

// Distinct pronounceable pseudo-words, two or three syllables each.
std::vector<std::string> make_words(std::size_t count, Rng& rng, std::set<std::string>& taken) {
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w;
    const std::size_t syllables = 2 + rng.uniform_index(2);
    for (std::size_t s = 0; s < syllables; ++s) {
      w += kOnsets[rng.uniform_index(std::size(kOnsets))];
      w += kVowels[rng.uniform_index(std::size(kVowels))];
    }
    if (taken.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

// Filler words follow a rough Zipf law: index ~ floor(n * u^2).
const std::string& pick_filler(const std::vector<std::string>& filler, Rng& rng) {
  const double u = rng.uniform01();
  return filler[static_cast<std::size_t>(static_cast<double>(filler.size()) * u * u)];
}

}  // namespace

void SyntheticTaskOptions::validate() const {
  if (classes < 2) throw ParameterError("synthetic task needs at least 2 classes");
  if (shots < 1) throw ParameterError("synthetic task needs at least 1 shot per class");
  if (topic_words < 2 || filler_words < 1) throw ParameterError("synthetic vocabulary too small");
  if (min_length < 2 || max_length < min_length) throw ParameterError("bad synthetic sentence lengths");
  if (!(topic_rate > 0.0 && topic_rate <= 1.0)) throw ParameterError("topic_rate must be in (0, 1]");
  if (!(leak_rate >= 0.0 && leak_rate < 1.0)) throw ParameterError("leak_rate must be in [0, 1)");
}

SyntheticTask make_synthetic_task(std::uint64_t seed, const SyntheticTaskOptions& options) {
  options.validate();
  Rng rng(derive_seed(seed, "synthetic-task"));
  std::set<std::string> taken;
  const auto filler = make_words(options.filler_words, rng, taken);
  std::vector<std::vector<std::string>> topics;
  SyntheticTask task;
  for (std::size_t c = 0; c < options.classes; ++c) {
    topics.push_back(make_words(options.topic_words, rng, taken));
    task.labels.push_back("c" + std::to_string(c));
  }

  const auto sentence = [&](std::size_t cls) {
    const std::size_t length =
        options.min_length + rng.uniform_index(options.max_length - options.min_length + 1);
    std::string text;
    std::size_t n = 0;
    const auto emit = [&](const std::string& w) {
      if (!text.empty()) text += ' ';
      text += w;
      ++n;
    };
    bool has_topic = false;
    while (n < length) {
      const bool topic = rng.uniform01() < options.topic_rate || (!has_topic && n + 2 >= length);
      if (topic) {
        std::size_t from = cls;
        if (rng.uniform01() < options.leak_rate) from = rng.uniform_index(options.classes);
        const auto& words = topics[from];
        // A phrase is a short walk along the class's word ring.
        std::size_t at = rng.uniform_index(words.size());
        const std::size_t len = 1 + rng.uniform_index(3);
        for (std::size_t k = 0; k < len && n < length; ++k) {
          emit(words[at]);
          at = (at + 1 + rng.uniform_index(2)) % words.size();
        }
        has_topic = has_topic || from == cls;
      } else {
        const std::size_t len = 1 + rng.uniform_index(3);
        for (std::size_t k = 0; k < len && n < length; ++k) emit(pick_filler(filler, rng));
      }
    }
    return text;
  };

  const auto make_split = [&](const char* prefix, std::size_t per_class, std::vector<TrainingInstance>& out) {
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t c = 0; c < options.classes; ++c) {
        out.push_back({std::string(prefix) + std::to_string(out.size()), sentence(c), task.labels[c]});
      }
    }
  };
  make_split("train-", options.shots, task.train);
  make_split("test-", options.test_per_class, task.test);
  for (std::size_t i = 0; i < options.unlabeled; ++i) {
    const std::size_t c = rng.uniform_index(options.classes);
    task.unlabeled.push_back({"pool-" + std::to_string(i), sentence(c), task.labels[c]});
  }
  return task;
}

}  // namespace curaug
