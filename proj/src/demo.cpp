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
#include "curaug/demo.hpp"

#include <cstdio>

#include "curaug/error.hpp"
#include "curaug/text.hpp"

namespace curaug {

DemoConfig::DemoConfig() {
  task.topic_rate = 0.4;
  generator.copy_weight = 0.5;
  schedule.steps_per_level = 100;
  schedule.batch_size = 16;
  triplet.margin = 2.0;
  triplet.learning_rate = 0.5;
  triplet.weight_decay = 0.01;
  embedding.normalize = true;
}

void DemoConfig::validate() const {
  if (modes.empty()) throw ParameterError("demo needs at least one mode");
  if (seeds.empty()) throw ParameterError("demo needs at least one seed");
  for (const auto& m : modes) {
    if (m != kNoAugmentation) parse_schedule_mode(m);
  }
  task.validate();
  plan.easy.validate();
  plan.hard.validate();
  schedule.validate();
  triplet.validate();
}

DemoSeedData prepare_demo_seed(const DemoConfig& config, std::uint64_t seed) {
  SyntheticTask task = make_synthetic_task(seed, config.task);
  std::vector<std::vector<std::string>> lm_corpus;
  for (const auto& inst : task.unlabeled) lm_corpus.push_back(tokenize(inst.text));
  for (const auto& inst : task.train) lm_corpus.push_back(tokenize(inst.text));
  const NGramModel base = train_ngram(lm_corpus, config.lm_order, config.lm_alpha);
  const SourceConditionedModel model(base, config.generator);

  ScoringConfig scoring = config.scoring;
  scoring.levels = config.schedule.levels;
  const LexicalSimilarity sim;
  const HeuristicMIClassifier mi(config.mi_threshold);
  AugmentationCache cache = build_cache(task.train, builtin_provider(model, config.plan, seed), sim, mi,
                                        scoring, Json::object(), config.threads);
  AugmentationCache originals =
      AugmentationCache::assemble(task.train, std::vector<std::vector<ParaphraseCandidate>>(task.train.size()),
                                  std::vector<std::string>(task.train.size()), scoring.levels, Json::object());
  return {std::move(task), std::move(cache), std::move(originals)};
}

DemoRun run_demo_mode(const DemoConfig& config, const DemoSeedData& data, const std::string& mode,
                      std::uint64_t seed) {
  ScheduleSpec schedule = config.schedule;
  const bool augmented = mode != kNoAugmentation;
  schedule.mode = augmented ? parse_schedule_mode(mode) : ScheduleMode::cyclic;
  schedule.order_seed = derive_seed(seed, "order");
  const AugmentationCache& cache = augmented ? data.cache : data.originals_only;
  TrainedClassifier trained =
      train_classifier(data.task.train, cache, schedule, config.triplet, config.embedding, seed);
  DemoRun run;
  run.mode = mode;
  run.seed = seed;
  run.accuracy = accuracy(trained.model, data.task.train, data.task.test);
  run.log = std::move(trained.log);
  return run;
}

std::vector<DemoRun> run_demo(const DemoConfig& config) {
  config.validate();
  std::vector<DemoRun> runs;
  for (const auto seed : config.seeds) {
    const DemoSeedData data = prepare_demo_seed(config, seed);
    for (const auto& mode : config.modes) runs.push_back(run_demo_mode(config, data, mode, seed));
  }
  return runs;
}

double mean_accuracy(const std::vector<DemoRun>& runs, const std::string& mode) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : runs) {
    if (r.mode == mode) {
      sum += r.accuracy;
      ++n;
    }
  }
  if (n == 0) throw ParameterError("no demo runs for mode '" + mode + "'");
  return sum / static_cast<double>(n);
}

std::string format_demo_table(const DemoConfig& config, const std::vector<DemoRun>& runs) {
  std::string out = "mode";
  for (const auto seed : config.seeds) out += "\tseed" + std::to_string(seed);
  out += "\tmean\n";
  char buf[32];
  for (const auto& mode : config.modes) {
    out += mode;
    for (const auto seed : config.seeds) {
      const DemoRun* hit = nullptr;
      for (const auto& r : runs) {
        if (r.mode == mode && r.seed == seed) hit = &r;
      }
      if (!hit) throw InternalError("missing demo run for " + mode);
      std::snprintf(buf, sizeof buf, "\t%.3f", hit->accuracy);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "\t%.3f\n", mean_accuracy(runs, mode));
    out += buf;
  }
  return out;
}

}  // namespace curaug
