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

#include "curaug/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curaug/baseline.hpp"
#include "curaug/curriculum.hpp"
#include "curaug/demo.hpp"
#include "curaug/error.hpp"
#include "curaug/generator.hpp"
#include "curaug/jsonl.hpp"
#include "curaug/metrics.hpp"
#include "curaug/ngram.hpp"
#include "curaug/sampling.hpp"
#include "curaug/scoring.hpp"
#include "curaug/text.hpp"

namespace curaug::cli {
namespace {

namespace fs = std::filesystem;

// Options that do not influence output bytes stay out of provenance.
const std::set<std::string> kUnrecorded = {"help", "threads"};

Json provenance_for(const CLI::App& sub) {
  Json config = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (kUnrecorded.count(name)) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      config[name] = opt->get_type_size() == 0 && joined.empty() ? "true" : joined;
    } else {
      config[name] = opt->get_default_str();
    }
  }
  Json p;
  p["tool"] = "curaug";
  p["version"] = kVersion;
  p["command"] = sub.get_name();
  p["config"] = std::move(config);
  return p;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ParameterError("not a non-negative integer: '" + text + "'");
  }
  if (used != text.size()) throw ParameterError("not a non-negative integer: '" + text + "'");
  return v;
}

// "0..4", "1,3,7" or a mix such as "0..2,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split_list(text)) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_u64(part));
      continue;
    }
    const std::uint64_t lo = parse_u64(part.substr(0, dots));
    const std::uint64_t hi = parse_u64(part.substr(dots + 2));
    if (hi < lo) throw ParameterError("empty seed range '" + part + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ParameterError("no seeds given");
  return seeds;
}

// The hard-regime sampler inherits the fallback sampler unless it names one.
GenerationPlan make_plan(const std::string& sampler, const std::string& fallback,
                         std::size_t candidates, double hard_fraction, std::size_t max_len) {
  GenerationPlan plan;
  plan.easy = parse_sampler_spec(fallback);
  if (plan.easy.strategy == Strategy::bottom_k) {
    throw ParameterError("--fallback-sampler cannot be a bottom-k policy");
  }
  plan.hard = parse_sampler_spec(sampler);
  if (plan.hard.strategy == Strategy::bottom_k && sampler.find("fallback=") == std::string::npos) {
    plan.hard.fallback = std::make_shared<const SamplerSpec>(plan.easy);
  }
  plan.candidates = candidates;
  plan.hard_fraction = hard_fraction;
  plan.max_len = max_len;
  plan.easy.validate();
  plan.hard.validate();
  (void)plan.hard_count();
  return plan;
}

void print_histogram(std::ostream& out, const std::vector<std::size_t>& hist) {
  out << "level\tcount\n";
  for (std::size_t d = 0; d < hist.size(); ++d) out << d << '\t' << hist[d] << '\n';
}

// ---------------------------------------------------------------------------

struct TrainLmArgs {
  std::string corpus;
  std::string format = "auto";
  std::size_t order = kDefaultOrder;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
  std::string out;
};

// Plain text holds one sentence per line; JSONL holds {"id", "text"} records.
std::vector<std::vector<std::string>> read_sentences(const std::string& path, std::string format) {
  if (format == "auto") {
    const auto ext = fs::path(path).extension().string();
    format = (ext == ".jsonl" || ext == ".json") ? "jsonl" : "text";
  }
  std::vector<std::vector<std::string>> sentences;
  if (format == "jsonl") {
    for (const auto& inst : load_corpus(path)) sentences.push_back(tokenize(inst.text));
  } else if (format == "text") {
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      auto toks = tokenize(line);
      if (!toks.empty()) sentences.push_back(std::move(toks));
    }
  } else {
    throw ParameterError("unknown corpus format '" + format + "'");
  }
  sentences.erase(std::remove_if(sentences.begin(), sentences.end(),
                                 [](const auto& s) { return s.empty(); }),
                  sentences.end());
  if (sentences.empty()) throw DataError("corpus " + path + " has no sentences");
  return sentences;
}

int cmd_train_lm(const CLI::App& sub, const TrainLmArgs& a, std::ostream& out) {
  const auto sentences = read_sentences(a.corpus, a.format);
  const NGramModel model = train_ngram(sentences, a.order, a.alpha);
  write_text_file(a.out, model.serialize(provenance_for(sub)));
  out << "vocabulary\t" << model.vocabulary().size() << '\n';
  out << "contexts\t" << model.context_count() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string data;
  std::string generator = "builtin";
  std::string model;
  std::string candidates_file;
  std::size_t candidates = kDefaultCandidateCount;
  std::string sampler = "bottom:k=2,n=1";
  std::string fallback_sampler = "top:k=120,p=0.95";
  double hard_fraction = 0.5;
  std::size_t max_len = kDefaultMaxLength;
  double copy_weight = SourceConditionedModel::Options{}.copy_weight;
  double align_weight = SourceConditionedModel::Options{}.align_weight;
  double beta = kDefaultBeta;
  int levels = kDefaultLevels;
  std::string mi = "heuristic";
  std::string sim = "lexical";
  std::string scores;
  double tau = kDefaultMIThreshold;
  double max_ratio = kDefaultMaxRatio;
  std::size_t per_level = 4;
  std::string ops = "swap,remove,insert";
  std::string lexicon;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out;
};

PerturbationSpec parse_operations(const AugmentArgs& a) {
  PerturbationSpec spec;
  spec.swap = spec.remove = spec.insert_duplicate = spec.synonym_replace = false;
  for (const auto& op : split_list(a.ops)) {
    if (op == "swap") spec.swap = true;
    else if (op == "remove") spec.remove = true;
    else if (op == "insert") spec.insert_duplicate = true;
    else if (op == "synonym") spec.synonym_replace = true;
    else throw ParameterError("unknown perturbation '" + op + "'");
  }
  if (!a.lexicon.empty()) {
    spec.lexicon = std::make_shared<const Lexicon>(load_lexicon(a.lexicon));
  } else if (spec.synonym_replace) {
    throw ParameterError("the synonym perturbation needs --lexicon");
  }
  return spec;
}

int cmd_augment(const CLI::App& sub, const AugmentArgs& a, std::ostream& out, std::ostream& err) {
  if (a.levels < 1) throw ParameterError("--levels must be at least 1");
  const auto dataset = load_corpus(a.data);
  const Json provenance = provenance_for(sub);

  if (a.generator == "eda") {
    PerturbationCachePlan plan;
    plan.levels = a.levels;
    plan.max_ratio = a.max_ratio;
    plan.per_level = a.per_level;
    plan.operations = parse_operations(a);
    const auto cache = build_perturbation_cache(dataset, plan, a.seed, provenance);
    write_text_file(a.out, cache.serialize());
    print_histogram(out, cache.bucket_histogram());
    return kExitOk;
  }

  ScoringConfig scoring;
  scoring.beta = a.beta;
  scoring.levels = a.levels;

  std::unique_ptr<PrecomputedScores> file_scores;
  if (a.mi == "file" || a.sim == "file") {
    if (a.scores.empty()) throw ParameterError("--mi file and --sim file need --scores");
    file_scores = std::make_unique<PrecomputedScores>(PrecomputedScores::load(a.scores));
  }
  if (a.mi != "file" && a.mi != "heuristic") throw ParameterError("unknown --mi '" + a.mi + "'");
  if (a.sim != "file" && a.sim != "lexical") throw ParameterError("unknown --sim '" + a.sim + "'");
  const HeuristicMIClassifier heuristic(a.tau);
  const LexicalSimilarity lexical;
  const MIClassifier& classifier =
      a.mi == "file" ? static_cast<const MIClassifier&>(*file_scores) : heuristic;
  const SimilarityScorer& scorer =
      a.sim == "file" ? static_cast<const SimilarityScorer&>(*file_scores) : lexical;

  std::unique_ptr<NGramModel::Loaded> loaded;
  std::unique_ptr<SourceConditionedModel> conditioned;
  CandidateProvider provider;
  if (a.generator == "builtin") {
    if (a.model.empty()) throw ParameterError("--generator builtin needs --model");
    const GenerationPlan plan =
        make_plan(a.sampler, a.fallback_sampler, a.candidates, a.hard_fraction, a.max_len);
    loaded = std::make_unique<NGramModel::Loaded>(NGramModel::load(a.model));
    conditioned = std::make_unique<SourceConditionedModel>(
        loaded->model, SourceConditionedModel::Options{a.copy_weight, a.align_weight});
    provider = builtin_provider(*conditioned, plan, a.seed);
  } else if (a.generator == "file") {
    if (a.candidates_file.empty()) throw ParameterError("--generator file needs --candidates-file");
    provider = external_provider(load_external_candidates(a.candidates_file));
  } else {
    throw ParameterError("unknown --generator '" + a.generator + "'");
  }

  if (file_scores) {
    // Materialize every bag up front so coverage gaps surface before any work.
    CandidateBags bags;
    std::map<std::string, std::string> failures;
    for (const auto& inst : dataset) {
      try {
        bags[inst.id] = provider(inst);
      } catch (const DataError& e) {
        failures[inst.id] = e.what();
      }
    }
    const auto missing = file_scores->missing(bags);
    if (!missing.empty()) {
      err << "error: score file " << a.scores << " lacks " << missing.size()
          << " (source_id, index) pairs:\n";
      for (const auto& [id, index] : missing) err << "  " << id << '\t' << index << '\n';
      return kExitValidation;
    }
    provider = [bags = std::move(bags), failures = std::move(failures)](const TrainingInstance& inst) {
      if (auto it = failures.find(inst.id); it != failures.end()) throw DataError(it->second);
      auto it = bags.find(inst.id);
      return it == bags.end() ? std::vector<std::string>{} : it->second;
    };
  }

  const auto cache =
      build_cache(dataset, provider, scorer, classifier, scoring, provenance, a.threads);
  write_text_file(a.out, cache.serialize());
  print_histogram(out, cache.bucket_histogram());
  std::size_t failed = 0;
  for (const auto& e : cache.entries()) failed += e.error.empty() ? 0 : 1;
  if (failed > 0) err << "warning: " << failed << " instances failed and keep only their original\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ScheduleArgs {
  std::string cache;
  std::string mode = "cyclic";
  int levels = -1;
  int cycles = 2;
  std::size_t steps_per_level = 10;
  std::size_t batch = 8;
  int two_stage_level = -1;
  bool no_repeat_boundary = false;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_schedule(const CLI::App& sub, const ScheduleArgs& a, std::ostream& out) {
  const auto cache = AugmentationCache::load(a.cache);
  if (a.levels >= 0 && a.levels != cache.levels()) {
    throw ValidationError("--levels " + std::to_string(a.levels) + " does not match the cache (" +
                          std::to_string(cache.levels()) + " levels)");
  }
  ScheduleSpec spec;
  spec.mode = parse_schedule_mode(a.mode);
  spec.levels = cache.levels();
  spec.cycles = a.cycles;
  spec.steps_per_level = a.steps_per_level;
  spec.batch_size = a.batch;
  spec.two_stage_level = a.two_stage_level;
  spec.repeat_boundary = !a.no_repeat_boundary;
  spec.order_seed = derive_seed(a.seed, "order");
  spec.validate();
  Rng rng(derive_seed(a.seed, "schedule"));
  const auto items = export_schedule(cache, spec, rng);

  std::string file = a.out.empty() ? "" : to_jsonl_line(provenance_for(sub));
  for (const auto& item : items) {
    out << item.step << '\t' << item.source_id << '\t' << item.level << '\t' << item.text << '\n';
    if (!a.out.empty()) {
      Json r;
      r["step"] = item.step;
      r["source_id"] = item.source_id;
      r["level"] = item.level;
      r["text"] = item.text;
      file += to_jsonl_line(r);
    }
  }
  if (!a.out.empty()) write_text_file(a.out, file);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_stats(const std::string& path, int bins, std::ostream& out) {
  if (bins < 1) throw ParameterError("--bins must be at least 1");
  const auto cache = AugmentationCache::load(path);
  std::size_t candidates = 0, kept = 0, failed = 0;
  std::vector<std::size_t> kept_bins(bins, 0), dropped_bins(bins, 0);
  for (const auto& e : cache.entries()) {
    failed += e.error.empty() ? 0 : 1;
    for (const auto& r : e.records) {
      ++candidates;
      kept += r.kept ? 1 : 0;
      const double t = (std::clamp(r.similarity, -1.0, 1.0) + 1.0) / 2.0;
      const int b = std::min(bins - 1, static_cast<int>(std::floor(t * bins)));
      (r.kept ? kept_bins : dropped_bins)[b]++;
    }
  }
  out << "instances\t" << cache.size() << '\n';
  out << "failed\t" << failed << '\n';
  out << "candidates\t" << candidates << '\n';
  out << "kept\t" << kept << '\n';
  out << '\n';
  print_histogram(out, cache.bucket_histogram());
  out << '\n' << "similarity\tkept\tdiscarded\n";
  char buf[64];
  for (int b = 0; b < bins; ++b) {
    const double lo = -1.0 + 2.0 * b / bins;
    const double hi = -1.0 + 2.0 * (b + 1) / bins;
    std::snprintf(buf, sizeof(buf), "[%.2f,%.2f%c", lo, hi, b + 1 == bins ? ']' : ')');
    out << buf << '\t' << kept_bins[b] << '\t' << dropped_bins[b] << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DistinctArgs {
  std::string input;
  std::string format = "auto";
  std::vector<std::size_t> ns = {1, 2};
};

// Text files hold one generation per line. JSONL records contribute their
// "candidate_text" or "text" field; a cache contributes its kept candidates.
std::vector<TokenSequence> read_generations(const DistinctArgs& a) {
  std::string format = a.format;
  if (format == "auto") {
    format = fs::path(a.input).extension() == ".jsonl" ? "jsonl" : "text";
  }
  std::vector<TokenSequence> texts;
  if (format == "text") {
    std::istringstream in(read_file(a.input));
    std::string line;
    while (std::getline(in, line)) {
      auto toks = tokenize(line);
      if (!toks.empty()) texts.push_back(std::move(toks));
    }
  } else if (format == "jsonl") {
    read_jsonl(a.input, [&](const Json& r, std::size_t line) {
      if (r.contains("kind")) return;  // header records
      const char* key = r.contains("candidate_text") ? "candidate_text" : "text";
      texts.push_back(tokenize(require_string(r, key, line)));
    });
  } else if (format == "cache") {
    const auto cache = AugmentationCache::load(a.input);
    for (const auto& e : cache.entries()) {
      for (std::size_t d = 1; d < e.buckets.size(); ++d) {
        for (const auto& t : e.buckets[d]) texts.push_back(tokenize(t));
      }
    }
  } else {
    throw ParameterError("unknown --format '" + format + "'");
  }
  return texts;
}

int cmd_distinct(const DistinctArgs& a, std::ostream& out) {
  const std::set<std::size_t> ns(a.ns.begin(), a.ns.end());
  out << format_report(diversity_report(read_generations(a), ns));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DemoArgs {
  std::string modes = "none,cyclic,gradual,random,inverse";
  std::string seeds = "0..4";
  DemoConfig config;
  std::string sampler = "bottom:k=2,n=1";
  std::string fallback_sampler = "top:k=120,p=0.95";
  std::string out;
  std::string log;
};

int cmd_demo(const CLI::App& sub, DemoArgs a, std::ostream& out) {
  DemoConfig& cfg = a.config;
  cfg.modes = split_list(a.modes);
  cfg.seeds = parse_seed_list(a.seeds);
  cfg.plan = make_plan(a.sampler, a.fallback_sampler, cfg.plan.candidates, cfg.plan.hard_fraction,
                       cfg.plan.max_len);
  cfg.scoring.levels = cfg.schedule.levels;
  cfg.validate();
  const auto runs = run_demo(cfg);
  out << format_demo_table(cfg, runs);

  const Json provenance = provenance_for(sub);
  if (!a.out.empty()) {
    std::string file = to_jsonl_line(provenance);
    for (const auto& r : runs) {
      Json j;
      j["seed"] = r.seed;
      j["mode"] = r.mode;
      j["accuracy"] = r.accuracy;
      file += to_jsonl_line(j);
    }
    write_text_file(a.out, file);
  }
  if (!a.log.empty()) {
    std::string file = to_jsonl_line(provenance);
    for (const auto& r : runs) {
      for (const auto& e : r.log) {
        Json j;
        j["seed"] = r.seed;
        j["mode"] = r.mode;
        j["step"] = e.step;
        j["cycle"] = e.cycle;
        j["level"] = e.level;
        j["loss"] = e.loss;
        file += to_jsonl_line(j);
      }
    }
    write_text_file(a.log, file);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curriculum data augmentation toolkit", "curaug"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  TrainLmArgs lm;
  auto* train_lm = app.add_subcommand("train-lm", "Train the builtin n-gram generator");
  train_lm->add_option("--corpus", lm.corpus, "Text (one sentence per line) or JSONL corpus")->required();
  train_lm->add_option("--format", lm.format, "auto, text or jsonl");
  train_lm->add_option("--order", lm.order, "N-gram order");
  train_lm->add_option("--alpha", lm.alpha, "Add-alpha smoothing constant");
  train_lm->add_option("--seed", lm.seed, "Global seed");
  train_lm->add_option("--out", lm.out, "Model file")->required();

  AugmentArgs ag;
  auto* augment = app.add_subcommand("augment", "Generate, filter and bucket paraphrases");
  augment->add_option("--data", ag.data, "Dataset JSONL {id, text, label?}")->required();
  augment->add_option("--generator", ag.generator, "builtin, file or eda");
  augment->add_option("--model", ag.model, "Model file from train-lm");
  augment->add_option("--candidates-file", ag.candidates_file, "JSONL {source_id, candidate_text}");
  augment->add_option("--candidates", ag.candidates, "Candidates per instance");
  augment->add_option("--sampler", ag.sampler, "Hard-regime sampler spec");
  augment->add_option("--fallback-sampler", ag.fallback_sampler,
                      "Easy-regime sampler, also used after the bottom-k steps");
  augment->add_option("--hard-fraction", ag.hard_fraction, "Share of candidates from --sampler");
  augment->add_option("--max-len", ag.max_len, "Maximum generated tokens");
  augment->add_option("--copy-weight", ag.copy_weight, "Builtin generator copy mass");
  augment->add_option("--align-weight", ag.align_weight, "Aligned share of the copy mass");
  augment->add_option("--beta", ag.beta, "Similarity threshold of the keep rule");
  augment->add_option("--levels", ag.levels, "Difficulty levels");
  augment->add_option("--mi", ag.mi, "heuristic or file");
  augment->add_option("--sim", ag.sim, "lexical or file");
  augment->add_option("--scores", ag.scores, "JSONL {source_id, candidate_index, similarity, mi}");
  augment->add_option("--tau", ag.tau, "Content coverage threshold of the heuristic MI");
  augment->add_option("--max-ratio", ag.max_ratio, "eda: perturbation ratio at the top level");
  augment->add_option("--per-level", ag.per_level, "eda: perturbations per level");
  augment->add_option("--ops", ag.ops, "eda: comma list of swap, remove, insert, synonym");
  augment->add_option("--lexicon", ag.lexicon, "eda: JSONL {word, synonym}");
  augment->add_option("--threads", ag.threads, "Worker threads");
  augment->add_option("--seed", ag.seed, "Global seed");
  augment->add_option("--out", ag.out, "Cache file")->required();

  ScheduleArgs sc;
  auto* schedule = app.add_subcommand("schedule", "Export the ordered training stream");
  schedule->add_option("--cache", sc.cache, "Cache file from augment")->required();
  schedule->add_option("--mode", sc.mode, "cyclic, gradual, two_stage, random, inverse, inverse_cyclic");
  schedule->add_option("--levels", sc.levels, "Expected level count (default: the cache's)");
  schedule->add_option("--cycles", sc.cycles, "Cycles (cyclic mode)");
  schedule->add_option("--steps-per-level", sc.steps_per_level, "Steps per stage");
  schedule->add_option("--batch", sc.batch, "Items per step");
  schedule->add_option("--two-stage-level", sc.two_stage_level, "Augmented level of two_stage");
  schedule->add_flag("--no-repeat-boundary", sc.no_repeat_boundary,
                     "inverse_cyclic: do not repeat the top level");
  schedule->add_option("--seed", sc.seed, "Global seed");
  schedule->add_option("--out", sc.out, "Also write JSONL records");

  std::string stats_cache;
  int stats_bins = 10;
  auto* stats = app.add_subcommand("stats", "Bucket and similarity histograms of a cache");
  stats->add_option("--cache", stats_cache, "Cache file")->required();
  stats->add_option("--bins", stats_bins, "Similarity bins over [-1, 1]");

  DistinctArgs di;
  auto* distinct = app.add_subcommand("distinct", "Distinct-N report of generations");
  distinct->add_option("input", di.input, "Generations file")->required();
  distinct->add_option("--format", di.format, "auto, text, jsonl or cache");
  distinct->add_option("--n", di.ns, "N values")->delimiter(',');

  DemoArgs dm;
  auto* demo = app.add_subcommand("demo-classify", "Few-shot classification demo");
  demo->add_option("--modes", dm.modes, "Comma list of schedule modes; none = originals only");
  demo->add_option("--seeds", dm.seeds, "Seeds, e.g. 0..4 or 1,3,5");
  demo->add_option("--levels", dm.config.schedule.levels, "Difficulty levels");
  demo->add_option("--cycles", dm.config.schedule.cycles, "Cycles (cyclic mode)");
  demo->add_option("--steps-per-level", dm.config.schedule.steps_per_level, "Steps per stage");
  demo->add_option("--batch", dm.config.schedule.batch_size, "Anchors per step");
  demo->add_option("--candidates", dm.config.plan.candidates, "Candidates per instance");
  demo->add_option("--sampler", dm.sampler, "Hard-regime sampler spec");
  demo->add_option("--fallback-sampler", dm.fallback_sampler, "Easy-regime sampler spec");
  demo->add_option("--beta", dm.config.scoring.beta, "Similarity threshold of the keep rule");
  demo->add_option("--tau", dm.config.mi_threshold, "Content coverage threshold");
  demo->add_option("--copy-weight", dm.config.generator.copy_weight, "Builtin generator copy mass");
  demo->add_option("--margin", dm.config.triplet.margin, "Triplet margin");
  demo->add_option("--learning-rate", dm.config.triplet.learning_rate, "SGD step size");
  demo->add_option("--weight-decay", dm.config.triplet.weight_decay, "L2 decay per step");
  demo->add_option("--threads", dm.config.threads, "Worker threads for cache building");
  demo->add_option("--out", dm.out, "JSONL accuracy records");
  demo->add_option("--log", dm.log, "JSONL per-step loss records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (train_lm->parsed()) return cmd_train_lm(*train_lm, lm, out);
    if (augment->parsed()) return cmd_augment(*augment, ag, out, err);
    if (schedule->parsed()) return cmd_schedule(*schedule, sc, out);
    if (stats->parsed()) return cmd_stats(stats_cache, stats_bins, out);
    if (distinct->parsed()) return cmd_distinct(di, out);
    if (demo->parsed()) return cmd_demo(*demo, dm, out);
    throw InternalError("no subcommand dispatched");
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace curaug::cli
