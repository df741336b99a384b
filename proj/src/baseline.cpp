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
#include "curaug/baseline.hpp"

#include <cmath>
#include <set>

#include "curaug/error.hpp"
#include "curaug/jsonl.hpp"
#include "curaug/scoring.hpp"
#include "curaug/text.hpp"

namespace curaug {

void PerturbationSpec::validate() const {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ParameterError("perturbation ratio must lie in [0, 1]");
  if (!swap && !remove && !insert_duplicate && !synonym_replace) {
    throw ConfigError("at least one perturbation operation must be enabled");
  }
  if (synonym_replace && !lexicon && !synonym_fallback) {
    throw ConfigError("synonym replacement needs a lexicon when fallback is disabled");
  }
}

PerturbResult perturb(const std::vector<std::string>& tokens, const PerturbationSpec& spec, Rng& rng) {
  spec.validate();
  if (tokens.empty()) throw DataError("cannot perturb an empty text");
  std::vector<EditOp> ops;
  if (spec.swap) ops.push_back(EditOp::swap);
  if (spec.remove) ops.push_back(EditOp::remove);
  if (spec.insert_duplicate) ops.push_back(EditOp::insert_duplicate);
  if (spec.synonym_replace) ops.push_back(EditOp::synonym_replace);

  PerturbResult res;
  res.tokens = tokens;
  // The epsilon keeps products like 0.3 * 10 from rounding up to 4.
  res.edits = static_cast<std::size_t>(std::ceil(spec.ratio * static_cast<double>(tokens.size()) - 1e-9));
  auto& seq = res.tokens;
  const auto record = [&](EditOp op) { ++res.applied[static_cast<std::size_t>(op)]; };
  const auto insert_copy = [&] {
    const std::string word = seq[rng.uniform_index(seq.size())];
    const auto pos = rng.uniform_index(seq.size() + 1);
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(pos), word);
    record(EditOp::insert_duplicate);
  };

  for (std::size_t e = 0; e < res.edits; ++e) {
    const EditOp op = ops[rng.uniform_index(ops.size())];
    switch (op) {
      case EditOp::swap: {
        const auto i = rng.uniform_index(seq.size());
        const auto j = rng.uniform_index(seq.size());
        if (i == j) {
          ++res.skipped;
        } else {
          std::swap(seq[i], seq[j]);
          record(op);
        }
        break;
      }
      case EditOp::remove: {
        const auto i = rng.uniform_index(seq.size());
        if (seq.size() == 1) {
          ++res.skipped;
        } else {
          seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
          record(op);
        }
        break;
      }
      case EditOp::insert_duplicate:
        insert_copy();
        break;
      case EditOp::synonym_replace: {
        const auto i = rng.uniform_index(seq.size());
        const std::vector<std::string>* synonyms = nullptr;
        if (spec.lexicon) {
          const auto it = spec.lexicon->find(seq[i]);
          if (it != spec.lexicon->end() && !it->second.empty()) synonyms = &it->second;
        }
        if (synonyms) {
          seq[i] = (*synonyms)[rng.uniform_index(synonyms->size())];
          record(op);
        } else if (spec.synonym_fallback) {
          insert_copy();
        } else {
          ++res.skipped;
        }
        break;
      }
    }
  }
  return res;
}

double ratio_for_level(int level, int levels, double max_ratio) {
  if (levels < 1) throw ParameterError("levels must be at least 1");
  if (level < 0 || level > levels) throw ParameterError("level outside [0, levels]");
  return static_cast<double>(level) / static_cast<double>(levels) * max_ratio;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  Lexicon lex;
  read_jsonl(path, [&](const Json& r, std::size_t line) {
    auto word = require_string(r, "word", line);
    auto syn = require_string(r, "synonym", line);
    lex[std::move(word)].push_back(std::move(syn));
  });
  return lex;
}

AugmentationCache build_perturbation_cache(const std::vector<TrainingInstance>& dataset,
                                           const PerturbationCachePlan& plan, std::uint64_t seed,
                                           Json provenance) {
  if (dataset.empty()) throw DataError("cannot build a cache for an empty dataset");
  if (!(plan.max_ratio >= 0.0 && plan.max_ratio <= 1.0)) throw ParameterError("max_ratio must lie in [0, 1]");
  std::vector<std::vector<ParaphraseCandidate>> records(dataset.size());
  std::vector<std::string> errors(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& inst = dataset[i];
    const auto tokens = tokenize(inst.text);
    if (tokens.empty()) {
      errors[i] = "empty text";
      continue;
    }
    Rng rng(derive_seed(seed, inst.id + "/perturb"));
    std::set<std::string> seen;
    std::size_t index = 0;
    for (int level = 1; level <= plan.levels; ++level) {
      PerturbationSpec spec = plan.operations;
      spec.ratio = ratio_for_level(level, plan.levels, plan.max_ratio);
      for (std::size_t k = 0; k < plan.per_level; ++k) {
        std::string text = join_tokens(perturb(tokens, spec, rng).tokens);
        if (!seen.insert(text).second) continue;
        ParaphraseCandidate c;
        c.source_id = inst.id;
        c.index = index++;
        c.similarity = lexical_similarity(inst.text, text);
        c.text = std::move(text);
        c.mi = 1;
        c.kept = true;
        c.difficulty = level;
        records[i].push_back(std::move(c));
      }
    }
  }
  return AugmentationCache::assemble(dataset, std::move(records), std::move(errors), plan.levels,
                                     std::move(provenance));
}

}  // namespace curaug
