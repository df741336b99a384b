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
#include "curaug/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "curaug/error.hpp"
#include "curaug/text.hpp"

namespace curaug {

AugmentationCache AugmentationCache::assemble(const std::vector<TrainingInstance>& dataset,
                                              std::vector<std::vector<ParaphraseCandidate>> records,
                                              std::vector<std::string> errors, int levels,
                                              Json provenance) {
  if (levels < 1) throw ParameterError("number of curriculum levels must be at least 1");
  if (records.size() != dataset.size() || errors.size() != dataset.size()) {
    throw InternalError("cache assembly: per-instance inputs do not line up");
  }
  AugmentationCache cache;
  cache.levels_ = levels;
  cache.provenance_ = std::move(provenance);
  cache.entries_.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    Entry e;
    e.original = dataset[i];
    e.buckets.assign(static_cast<std::size_t>(levels) + 1, {});
    e.buckets[0].push_back(e.original.text);
    for (const auto& r : records[i]) {
      if (!r.kept) continue;
      if (r.difficulty < 1 || r.difficulty > levels) {
        throw InternalError("kept candidate of '" + r.source_id + "' has difficulty " +
                            std::to_string(r.difficulty));
      }
      e.buckets[static_cast<std::size_t>(r.difficulty)].push_back(r.text);
    }
    e.records = std::move(records[i]);
    e.error = std::move(errors[i]);
    if (!cache.index_.emplace(e.original.id, i).second) {
      throw DataError("duplicate source id '" + e.original.id + "'");
    }
    cache.entries_.push_back(std::move(e));
  }
  return cache;
}

const AugmentationCache::Entry& AugmentationCache::entry(std::string_view source_id) const {
  const auto it = index_.find(std::string(source_id));
  if (it == index_.end()) throw DataError("unknown source id '" + std::string(source_id) + "'");
  return entries_[it->second];
}

bool AugmentationCache::contains(std::string_view source_id) const {
  return index_.contains(std::string(source_id));
}

std::vector<std::size_t> AugmentationCache::bucket_histogram() const {
  std::vector<std::size_t> hist(static_cast<std::size_t>(levels_) + 1, 0);
  for (const auto& e : entries_) {
    for (std::size_t d = 0; d < e.buckets.size(); ++d) hist[d] += e.buckets[d].size();
  }
  return hist;
}

std::string AugmentationCache::serialize() const {
  std::string out;
  Json header;
  header["kind"] = "header";
  header["format"] = "curaug-cache";
  header["format_version"] = kCacheFormatVersion;
  header["levels"] = levels_;
  header["instances"] = entries_.size();
  header["provenance"] = provenance_;
  out += to_jsonl_line(header);
  for (const auto& e : entries_) {
    Json orig;
    orig["kind"] = "original";
    orig["source_id"] = e.original.id;
    orig["text"] = e.original.text;
    orig["label"] = e.original.label ? Json(*e.original.label) : Json(nullptr);
    orig["difficulty"] = 0;
    if (!e.error.empty()) orig["error"] = e.error;
    out += to_jsonl_line(orig);
    for (const auto& r : e.records) {
      Json c;
      c["kind"] = "candidate";
      c["source_id"] = r.source_id;
      c["index"] = r.index;
      c["text"] = r.text;
      c["similarity"] = r.similarity;
      c["mi"] = r.mi;
      c["difficulty"] = r.kept ? Json(r.difficulty) : Json(nullptr);
      c["kept"] = r.kept;
      out += to_jsonl_line(c);
    }
  }
  return out;
}

AugmentationCache AugmentationCache::deserialize(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    return DataError(origin + ": line " + std::to_string(line_no) + ": " + msg);
  };
  int levels = 0;
  std::size_t expected = 0;
  Json provenance;
  bool have_header = false;
  std::vector<TrainingInstance> dataset;
  std::vector<std::vector<ParaphraseCandidate>> records;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw fail("malformed record");
    }
    try {
      const std::string kind = rec.at("kind").get<std::string>();
      if (!have_header) {
        if (kind != "header" || rec.at("format").get<std::string>() != "curaug-cache") {
          throw fail("not an augmentation cache file");
        }
        if (rec.at("format_version").get<int>() != kCacheFormatVersion) {
          throw fail("unsupported format version " + rec.at("format_version").dump());
        }
        levels = rec.at("levels").get<int>();
        expected = rec.at("instances").get<std::size_t>();
        provenance = rec.at("provenance");
        have_header = true;
      } else if (kind == "original") {
        TrainingInstance inst;
        inst.id = rec.at("source_id").get<std::string>();
        inst.text = rec.at("text").get<std::string>();
        if (!rec.at("label").is_null()) inst.label = rec.at("label").get<std::string>();
        dataset.push_back(std::move(inst));
        records.emplace_back();
        errors.push_back(rec.contains("error") ? rec.at("error").get<std::string>() : std::string{});
      } else if (kind == "candidate") {
        if (dataset.empty()) throw fail("candidate before any original record");
        ParaphraseCandidate c;
        c.source_id = rec.at("source_id").get<std::string>();
        if (c.source_id != dataset.back().id) throw fail("candidate does not follow its original");
        c.index = rec.at("index").get<std::size_t>();
        c.text = rec.at("text").get<std::string>();
        c.similarity = rec.at("similarity").get<double>();
        c.mi = rec.at("mi").get<int>();
        c.kept = rec.at("kept").get<bool>();
        c.difficulty = rec.at("difficulty").is_null() ? 0 : rec.at("difficulty").get<int>();
        if (c.kept != (c.difficulty != 0)) throw fail("difficulty must be set exactly for kept candidates");
        records.back().push_back(std::move(c));
      } else {
        throw fail("unknown record kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("bad field: ") + e.what());
    }
  }
  if (!have_header) throw DataError(origin + ": missing cache header");
  if (dataset.size() != expected) throw DataError(origin + ": instance count does not match header");
  return assemble(dataset, std::move(records), std::move(errors), levels, std::move(provenance));
}

AugmentationCache AugmentationCache::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str(), path.string());
}

// ---------------------------------------------------------------------------

std::size_t GenerationPlan::hard_count() const {
  if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0)) {
    throw ParameterError("hard_fraction must lie in [0, 1]");
  }
  return static_cast<std::size_t>(std::llround(hard_fraction * static_cast<double>(candidates)));
}

CandidateProvider builtin_provider(const LanguageModel& model, GenerationPlan plan, std::uint64_t seed) {
  plan.easy.validate();
  plan.hard.validate();
  (void)plan.hard_count();
  return [&model, plan, seed](const TrainingInstance& inst) {
    const auto source = tokenize(inst.text);
    std::vector<std::string> out;
    const auto add = [&](const SamplerSpec& spec, std::size_t count, const char* regime) {
      Rng rng(derive_seed(seed, inst.id + "/" + regime));
      for (auto& toks : generate_candidates(source, model, spec, count, plan.max_len, rng)) {
        if (!toks.empty()) out.push_back(join_tokens(toks));
      }
    };
    add(plan.easy, plan.easy_count(), "easy");
    add(plan.hard, plan.hard_count(), "hard");
    return out;
  };
}

CandidateProvider external_provider(CandidateBags bags) {
  return [bags = std::move(bags)](const TrainingInstance& inst) {
    const auto it = bags.find(inst.id);
    return it == bags.end() ? std::vector<std::string>{} : it->second;
  };
}

AugmentationCache build_cache(const std::vector<TrainingInstance>& dataset,
                              const CandidateProvider& provider, const SimilarityScorer& scorer,
                              const MIClassifier& classifier, const ScoringConfig& config,
                              Json provenance, unsigned threads) {
  if (dataset.empty()) throw DataError("cannot build a cache for an empty dataset");
  if (config.levels < 1) throw ParameterError("number of curriculum levels must be at least 1");
  std::vector<std::vector<ParaphraseCandidate>> records(dataset.size());
  std::vector<std::string> errors(dataset.size());
  std::vector<std::exception_ptr> fatal(dataset.size());

  // Data problems stay local to their instance; anything else aborts the build.
  const auto work = [&](std::size_t i) {
    try {
      records[i] = build_candidate_records(dataset[i], provider(dataset[i]), scorer, classifier, config);
    } catch (const DataError& e) {
      records[i].clear();
      errors[i] = e.what();
    } catch (...) {
      fatal[i] = std::current_exception();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(dataset.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < dataset.size(); i += threads) work(i);
      });
    }
  }
  for (const auto& f : fatal) {
    if (f) std::rethrow_exception(f);
  }
  return AugmentationCache::assemble(dataset, std::move(records), std::move(errors), config.levels,
                                     std::move(provenance));
}

Retrieved retrieve(const AugmentationCache& cache, std::string_view source_id, int level, Rng& rng) {
  const auto& e = cache.entry(source_id);
  if (level < 0 || level > cache.levels()) {
    throw ParameterError("level " + std::to_string(level) + " outside [0, " +
                         std::to_string(cache.levels()) + "]");
  }
  for (int l = level; l > 0; --l) {
    const auto& bucket = e.buckets[static_cast<std::size_t>(l)];
    if (!bucket.empty()) return {bucket[rng.uniform_index(bucket.size())], l};
  }
  return {e.original.text, 0};
}

// ---------------------------------------------------------------------------

std::string_view schedule_mode_name(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::cyclic: return "cyclic";
    case ScheduleMode::gradual: return "gradual";
    case ScheduleMode::two_stage: return "two_stage";
    case ScheduleMode::random: return "random";
    case ScheduleMode::inverse: return "inverse";
    case ScheduleMode::inverse_cyclic: return "inverse_cyclic";
  }
  return "?";
}

ScheduleMode parse_schedule_mode(std::string_view name) {
  for (auto m : {ScheduleMode::cyclic, ScheduleMode::gradual, ScheduleMode::two_stage,
                 ScheduleMode::random, ScheduleMode::inverse, ScheduleMode::inverse_cyclic}) {
    if (schedule_mode_name(m) == name) return m;
  }
  if (name == "two-stage") return ScheduleMode::two_stage;
  if (name == "inverse-cyclic") return ScheduleMode::inverse_cyclic;
  throw ParameterError("unknown schedule mode '" + std::string(name) + "'");
}

void ScheduleSpec::validate() const {
  if (levels < 1) throw ParameterError("levels must be at least 1");
  if (cycles < 1) throw ParameterError("cycles must be at least 1");
  if (steps_per_level < 1) throw ParameterError("steps_per_level must be at least 1");
  if (batch_size < 1) throw ParameterError("batch_size must be at least 1");
  if (two_stage_level != -1 && (two_stage_level < 1 || two_stage_level > levels)) {
    throw ParameterError("two_stage_level must lie in [1, levels]");
  }
  if (plateau && plateau->window < 1) throw ParameterError("plateau window must be at least 1");
}

std::vector<Stage> stage_plan(const ScheduleSpec& spec) {
  spec.validate();
  const int c = spec.levels;
  std::vector<Stage> plan;
  const auto forward = [&](int cycle) {
    for (int l = 0; l <= c; ++l) plan.push_back({l, cycle});
  };
  const auto backward = [&](int cycle, int from) {
    for (int l = from; l >= 0; --l) plan.push_back({l, cycle});
  };
  switch (spec.mode) {
    case ScheduleMode::cyclic:
      for (int k = 0; k < spec.cycles; ++k) forward(k);
      break;
    case ScheduleMode::gradual:
      forward(0);
      break;
    case ScheduleMode::two_stage:
      plan.push_back({0, 0});
      plan.push_back({spec.two_stage_level == -1 ? c : spec.two_stage_level, 0});
      break;
    case ScheduleMode::inverse:
      backward(0, c);
      break;
    case ScheduleMode::random: {
      std::vector<int> levels(static_cast<std::size_t>(c) + 1);
      std::iota(levels.begin(), levels.end(), 0);
      Rng rng(spec.order_seed);
      for (std::size_t i = levels.size() - 1; i > 0; --i) {
        std::swap(levels[i], levels[rng.uniform_index(i + 1)]);
      }
      for (int l : levels) plan.push_back({l, 0});
      break;
    }
    case ScheduleMode::inverse_cyclic:
      forward(0);
      backward(1, spec.repeat_boundary ? c : c - 1);
      break;
  }
  return plan;
}

std::vector<int> level_sequence(const ScheduleSpec& spec) {
  std::vector<int> levels;
  for (const auto& s : stage_plan(spec)) levels.push_back(s.level);
  return levels;
}

namespace {

double window_mean(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(begin),
                         v.begin() + static_cast<std::ptrdiff_t>(end), 0.0) /
         static_cast<double>(end - begin);
}

}  // namespace

std::vector<LogEntry> run(const AugmentationCache& cache, const ScheduleSpec& spec,
                          TrainerHook& trainer, Rng& rng) {
  spec.validate();
  if (cache.size() == 0) throw DataError("cannot train on an empty cache");
  if (spec.levels > cache.levels()) {
    throw ParameterError("schedule uses " + std::to_string(spec.levels) + " levels but the cache has " +
                         std::to_string(cache.levels()));
  }
  std::vector<LogEntry> log;
  std::vector<BatchItem> batch;
  std::size_t step = 0;
  for (const Stage& stage : stage_plan(spec)) {
    std::vector<double> level_losses;
    for (std::size_t s = 0; s < spec.steps_per_level; ++s) {
      batch.clear();
      for (std::size_t b = 0; b < spec.batch_size; ++b) {
        const auto& e = cache.at(rng.uniform_index(cache.size()));
        Retrieved r = retrieve(cache, e.original.id, stage.level, rng);
        batch.push_back({e.original.id, std::move(r.text), e.original.label, stage.level, r.level});
      }
      const double loss = trainer.train_batch(batch);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite loss at step " + std::to_string(step) + " (level " +
                            std::to_string(stage.level) + ", cycle " + std::to_string(stage.cycle) + ")");
      }
      log.push_back({step, stage.cycle, stage.level, loss});
      ++step;
      level_losses.push_back(loss);
      if (spec.plateau) {
        const std::size_t w = spec.plateau->window;
        const std::size_t n = level_losses.size();
        if (n >= 2 * w &&
            window_mean(level_losses, n - 2 * w, n - w) - window_mean(level_losses, n - w, n) <
                spec.plateau->min_improvement) {
          break;
        }
      }
    }
  }
  return log;
}

std::string serialize_log(const std::vector<LogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    Json r;
    r["step"] = e.step;
    r["cycle"] = e.cycle;
    r["level"] = e.level;
    r["loss"] = e.loss;
    out += to_jsonl_line(r);
  }
  return out;
}

namespace {

class RecordingTrainer final : public TrainerHook {
 public:
  explicit RecordingTrainer(std::vector<ScheduledItem>& out) : out_(out) {}
  double train_batch(std::span<const BatchItem> batch) override {
    for (const auto& item : batch) out_.push_back({step_, item.source_id, item.level, item.text});
    ++step_;
    return 0.0;
  }

 private:
  std::vector<ScheduledItem>& out_;
  std::size_t step_ = 0;
};

}  // namespace

std::vector<ScheduledItem> export_schedule(const AugmentationCache& cache, const ScheduleSpec& spec,
                                           Rng& rng) {
  ScheduleSpec fixed = spec;
  fixed.plateau.reset();
  std::vector<ScheduledItem> items;
  RecordingTrainer recorder(items);
  run(cache, fixed, recorder, rng);
  return items;
}

}  // namespace curaug
