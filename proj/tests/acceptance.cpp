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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "curaug/cli.hpp"
#include "curaug/curriculum.hpp"
#include "curaug/demo.hpp"
#include "curaug/generator.hpp"
#include "curaug/metrics.hpp"
#include "curaug/ngram.hpp"
#include "curaug/sampling.hpp"
#include "curaug/scoring.hpp"
#include "curaug/text.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace curaug;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = o.detail;
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    detail += "; over the time budget";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s (%s) [%.2fs, budget %.0fs]\n", id, o.pass ? "PASS" : "FAIL",
              title.c_str(), detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome keep_rule() {
  const struct {
    int mi;
    double sim;
    int want;
  } table[] = {{1, 0.9, 1}, {1, -0.9, 1}, {0, 0.9, 1}, {0, 0.2, 0}};
  for (const auto& row : table) {
    if (filter_candidate(row.mi, row.sim, 0.5) != row.want) return {false, "truth table row differs"};
  }
  Rng rng(101);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const int mi = static_cast<int>(rng.uniform_index(2));
    const double sim = 2.0 * rng.uniform01() - 1.0;
    const double beta = 2.0 * rng.uniform01() - 1.0;
    mismatches += filter_candidate(mi, sim, beta) != oracle::keep(mi, sim, beta);
  }
  return {mismatches == 0, "4 cases + 10000 random triples, mismatches=" + std::to_string(mismatches)};
}

Outcome bucketing() {
  const std::vector<double> table = {0.888, 0.619, 0.371, -0.038, -0.265, -0.506};
  if (assign_difficulty(table, 5) != std::vector<int>{1, 2, 3, 4, 5, 5}) {
    return {false, "table scores do not give [1,2,3,4,5,5]"};
  }
  Rng rng(102);
  int bad = 0, small_bags = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(100));
    const int c = 1 + static_cast<int>(rng.uniform_index(10));
    std::vector<double> sims(static_cast<std::size_t>(n));
    for (double& s : sims) s = 2.0 * rng.uniform01() - 1.0;
    const auto d = assign_difficulty(sims, c);
    const auto order = oracle::rank_ids(sims);
    bad += d != oracle::difficulties(sims, c);
    bad += d[order.back()] != c;
    // With fewer candidates than levels the top rank sits at ceil(C/|X|) > 1,
    // as in the single-candidate case; everywhere else it is 1.
    if (n >= c) {
      bad += d[order.front()] != 1;
    } else {
      ++small_bags;
      bad += d[order.front()] != (c + n - 1) / n;
    }
  }
  return {bad == 0, "table -> [1,2,3,4,5,5]; 1000 random bags, violations=" + std::to_string(bad) +
                        " (" + std::to_string(small_bags) + " bags with |X|<C checked at ceil(C/|X|))"};
}

Outcome monotone_invariance() {
  Rng rng(103);
  const LexicalSimilarity unused;
  (void)unused;
  int changed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(80);
    const int c = 1 + static_cast<int>(rng.uniform_index(10));
    std::vector<double> kept;
    for (std::size_t i = 0; i < n; ++i) {
      const int mi = static_cast<int>(rng.uniform_index(2));
      const double sim = 2.0 * rng.uniform01() - 1.0;
      if (filter_candidate(mi, sim, 0.5)) kept.push_back(sim);
    }
    if (kept.empty()) kept.push_back(0.0);
    std::vector<double> mapped;
    for (double x : kept) mapped.push_back(x * x * x + 2.0 * x);
    changed += assign_difficulty(kept, c) != assign_difficulty(mapped, c);
  }
  return {changed == 0, "1000 random post-filter bags, changed=" + std::to_string(changed)};
}

Outcome sampling_correctness() {
  Rng rng(104);
  double worst = 0.0;
  int overlaps = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> logits(10);
    for (double& v : logits) v = 2.0 * rng.normal();
    const auto d = TokenDistribution::from_logits(logits);
    const auto ref = oracle::softmax(logits);
    const std::size_t k = 1 + rng.uniform_index(9);
    const double p = 0.05 + 0.95 * rng.uniform01();
    const auto cmp = [&](const TokenDistribution& got, const std::vector<double>& want) {
      for (std::size_t i = 0; i < want.size(); ++i) {
        worst = std::max(worst, std::abs(got.probabilities()[i] - want[i]));
      }
    };
    const auto top = top_k_filter(d, k);
    const auto bottom = bottom_k_filter(d, k);
    cmp(top, oracle::top_k(ref, k));
    cmp(bottom, oracle::bottom_k(ref, k));
    cmp(top_p_filter(d, p), oracle::top_p(ref, p));
    for (TokenId id = 0; id < 10; ++id) overlaps += top.in_support(id) == bottom.in_support(id);
  }
  return {worst <= 1e-9 && overlaps == 0,
          fmt("1000 random logit vectors, max |diff|=%.2e", worst) +
              ", partition violations=" + std::to_string(overlaps)};
}

Outcome sampling_statistics() {
  const auto d = bottom_k_filter(
      TokenDistribution::from_logits({1.5, 0.2, -0.3, 2.0, 0.9, 0.0, -1.0, 1.1, 0.4, -0.6}), 3);
  Rng rng(105);
  const int draws = 100000;
  std::vector<double> counts(d.vocab_size(), 0.0);
  for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(sample_token(d, rng))] += 1.0;
  double chi2 = 0.0, excluded = 0.0;
  int cells = 0;
  for (TokenId id = 0; id < static_cast<TokenId>(d.vocab_size()); ++id) {
    if (!d.in_support(id)) {
      excluded += counts[id];
      continue;
    }
    const double e = draws * d.probability(id);
    chi2 += (counts[id] - e) * (counts[id] - e) / e;
    ++cells;
  }
  const boost::math::chi_squared dist(cells - 1);
  const double pvalue = boost::math::cdf(boost::math::complement(dist, chi2));
  return {pvalue > 0.001 && excluded == 0.0,
          fmt("100000 draws, chi2=%.3f", chi2) + fmt(", p=%.4f", pvalue) +
              ", excluded-token draws=" + std::to_string(static_cast<long>(excluded))};
}

Outcome diversity_ordering() {
  const auto corpus = load_corpus(std::string(CURAUG_DATA_DIR) + "/corpus.jsonl");
  std::vector<std::vector<std::string>> toks;
  for (const auto& c : corpus) toks.push_back(tokenize(c.text));
  const NGramModel base = train_ngram(toks, kDefaultOrder, kDefaultAlpha);
  const SourceConditionedModel model(base);
  const char* specs[] = {"bottom:k=10,n=15", "bottom:k=2,n=1", "top:k=120,p=0.95", "top:k=80,p=0.8"};
  const std::size_t per_seed = 500;
  double d1[4] = {}, d2[4] = {}, sim[4] = {};
  for (int s = 0; s < 4; ++s) {
    const auto spec = parse_sampler_spec(specs[s]);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Rng rng(seed * 7 + 1);
      std::vector<TokenSequence> gens;
      double total = 0.0;
      for (std::size_t i = 0; gens.size() < per_seed; ++i) {
        const auto& src = toks[(i * 2 + seed) % toks.size()];
        auto g = generate_candidates(src, model, spec, 1, kDefaultMaxLength, rng).front();
        if (g.empty()) continue;
        total += lexical_similarity(join_tokens(src), join_tokens(g));
        gens.push_back(std::move(g));
      }
      d1[s] += distinct_n(gens, 1) / 3.0;
      d2[s] += distinct_n(gens, 2) / 3.0;
      sim[s] += total / static_cast<double>(gens.size()) / 3.0;
    }
  }
  bool ok = sim[1] < sim[2];
  for (int s = 0; s + 1 < 4; ++s) ok = ok && d1[s] > d1[s + 1] && d2[s] > d2[s + 1];
  std::string detail = "3 seeds x 500 generations; D1";
  for (double v : d1) detail += fmt(" %.4f", v);
  detail += "; D2";
  for (double v : d2) detail += fmt(" %.4f", v);
  detail += fmt("; sim bottom(2,1) %.4f", sim[1]) + fmt(" vs top(120,0.95) %.4f", sim[2]);
  return {ok, detail};
}

Outcome schedule_traces() {
  int bad = 0, checked = 0;
  for (int c = 1; c <= 10; ++c) {
    for (int k = 1; k <= 4; ++k) {
      ScheduleSpec spec;
      spec.levels = c;
      spec.cycles = k;
      const auto seq = [&](ScheduleMode m) {
        spec.mode = m;
        return level_sequence(spec);
      };
      auto inv_cyc = oracle::cyclic(c, 1);
      for (int l : oracle::inverse(c)) inv_cyc.push_back(l);
      auto rnd = seq(ScheduleMode::random);
      std::sort(rnd.begin(), rnd.end());
      bad += seq(ScheduleMode::cyclic) != oracle::cyclic(c, k);
      bad += seq(ScheduleMode::gradual) != oracle::cyclic(c, 1);
      bad += seq(ScheduleMode::inverse) != oracle::inverse(c);
      bad += seq(ScheduleMode::two_stage) != std::vector<int>{0, c};
      bad += seq(ScheduleMode::inverse_cyclic) != inv_cyc;
      bad += rnd != oracle::cyclic(c, 1);
      checked += 6;
    }
  }
  ScheduleSpec spec;
  const bool example = level_sequence(spec) == std::vector<int>{0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5};
  return {bad == 0 && example, std::to_string(checked) + " (mode, C, cycles) traces, mismatches=" +
                                   std::to_string(bad) + (example ? "; C=5 x2 example ok" : "; example wrong")};
}

// Mean loss of the first (or last) n steps of a (cycle, level) stage.
double stage_mean(const std::vector<LogEntry>& log, int cycle, int level, std::size_t n, bool first) {
  std::vector<double> v;
  for (const auto& e : log) {
    if (e.cycle == cycle && e.level == level) v.push_back(e.loss);
  }
  if (v.size() < n) throw std::runtime_error("stage shorter than the window");
  const auto begin = first ? v.begin() : v.end() - static_cast<long>(n);
  return std::accumulate(begin, begin + static_cast<long>(n), 0.0) / static_cast<double>(n);
}

Outcome cycle_spike(const DemoConfig& cfg, const std::vector<DemoRun>& runs) {
  int spikes = 0, seeds = 0;
  std::string detail;
  for (const auto& r : runs) {
    if (r.mode != "cyclic") continue;
    const int c = cfg.schedule.levels;
    const double after = stage_mean(r.log, 1, 1, 10, true);
    const double before = stage_mean(r.log, 0, c, 10, false);
    spikes += after > before;
    ++seeds;
    detail += fmt(" %+.4f", after - before);
  }
  return {spikes >= 4, std::to_string(spikes) + "/" + std::to_string(seeds) +
                           " seeds spike; cycle-2 level-1 first10 minus cycle-1 level-C last10:" + detail};
}

Outcome gradient_check() {
  const auto emb = gradcheck::embedding_check(106, 100);
  const auto w_plain = gradcheck::weight_check(107, 50, false);
  const auto w_norm = gradcheck::weight_check(108, 50, true);
  const double worst = std::max({emb.max_rel_error, w_plain.max_rel_error, w_norm.max_rel_error});
  const bool ok = worst < 1e-5 && emb.active > 0 && emb.inactive > 0;
  return {ok, "100 embedding triplets (" + std::to_string(emb.active) + " active, " +
                  std::to_string(emb.inactive) + " clamped) + 100 weight checks" +
                  fmt(", max relative error %.2e", worst)};
}

Outcome demo_accuracy(const std::vector<DemoRun>& runs) {
  const double none = mean_accuracy(runs, kNoAugmentation);
  const double cyclic = mean_accuracy(runs, "cyclic");
  const double inverse = mean_accuracy(runs, "inverse");
  const bool ok = cyclic >= none + 0.03 && cyclic >= inverse;
  return {ok, fmt("5 seeds: cyclic %.3f", cyclic) + fmt(", none %.3f", none) + fmt(", inverse %.3f", inverse) +
                  fmt("; gain %+.3f", cyclic - none)};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curaug");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
  testing_util::TempDir dir;
  const std::string corpus = std::string(CURAUG_DATA_DIR) + "/corpus.jsonl";
  const std::string model = (dir / "lm.jsonl").string();
  const std::string cache = (dir / "cache.jsonl").string();
  std::string data;
  {
    std::istringstream in(testing_util::read_file(corpus));
    std::string line;
    for (int i = 0; i < 60 && std::getline(in, line); ++i) data += line + "\n";
  }
  testing_util::write_file(dir / "data.jsonl", data);
  std::vector<std::string> lm_bytes, cache_bytes;
  for (int rep = 0; rep < 2; ++rep) {
    if (run_cli({"train-lm", "--corpus", corpus, "--seed", "11", "--out", model}) != 0) {
      return {false, "train-lm failed"};
    }
    lm_bytes.push_back(testing_util::read_file(model));
    if (run_cli({"augment", "--data", (dir / "data.jsonl").string(), "--model", model, "--seed", "11",
                 "--threads", rep == 0 ? "1" : "4", "--out", cache}) != 0) {
      return {false, "augment failed"};
    }
    cache_bytes.push_back(testing_util::read_file(cache));
  }
  const bool ok = lm_bytes[0] == lm_bytes[1] && cache_bytes[0] == cache_bytes[1] && !cache_bytes[0].empty();
  return {ok, "train-lm x2 " + std::string(lm_bytes[0] == lm_bytes[1] ? "identical" : "DIFFER") +
                  " (" + std::to_string(lm_bytes[0].size()) + " bytes); augment x2 " +
                  (cache_bytes[0] == cache_bytes[1] ? "identical" : "DIFFER") + " (" +
                  std::to_string(cache_bytes[0].size()) + " bytes)"};
}

Outcome distinct_exact() {
  bool ok = distinct_n({{"a", "b", "a", "b"}}, 1) == 0.5;
  ok = ok && distinct_n({{"a", "b", "c", "d"}}, 1) == 1.0;
  ok = ok && distinct_n({{"a", "b"}, {"a", "b"}}, 2) == 0.5;
  ok = ok && format_report(diversity_report({{"a", "b", "a", "b"}}, {1})) == "n\tdistinct\ttotal\tratio\n1\t2\t4\t0.500\n";
  return {ok, "\"a b a b\" N=1 -> 0.5; unique -> 1.0; [\"a b\",\"a b\"] N=2 -> 0.5; report prints 0.500"};
}

}  // namespace

int main() {
  std::printf("curaug %s acceptance suite\n", curaug::kVersion);
  report(1, "keep rule truth table and random oracle", 1, keep_rule);
  report(2, "rank bucketing", 1, bucketing);
  report(3, "difficulty invariance under x^3+2x", 0, monotone_invariance);
  report(4, "filters against brute-force oracle", 0, sampling_correctness);
  report(5, "sampling chi-square and bottom-k exclusion", 10, sampling_statistics);
  report(6, "diversity ordering on the bundled corpus", 120, diversity_ordering);
  report(7, "schedule traces", 0, schedule_traces);

  // Criteria 8 and 10 share one demo run over seeds 0..4.
  DemoConfig cfg;
  cfg.modes = {kNoAugmentation, "cyclic", "inverse"};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<DemoRun> runs;
  std::string demo_error;
  try {
    runs = run_demo(cfg);
  } catch (const std::exception& e) {
    demo_error = e.what();
  }
  const double demo_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("demo: %zu runs in %.1fs\n", runs.size(), demo_s);
  if (!runs.empty()) std::printf("%s", format_demo_table(cfg, runs).c_str());
  const auto demo_budget = [&](double budget, Outcome o) {
    if (!demo_error.empty()) return Outcome{false, "demo failed: " + demo_error};
    if (demo_s > budget) {
      o.pass = false;
      o.detail += fmt("; demo took %.1fs", demo_s);
    }
    return o;
  };
  report(8, "cycle-boundary loss spike", 0, [&] { return demo_budget(120, cycle_spike(cfg, runs)); });
  report(9, "triplet gradient check", 5, gradient_check);
  report(10, "end-to-end demo accuracy", 0, [&] { return demo_budget(300, demo_accuracy(runs)); });
  report(11, "byte-identical reruns", 0, determinism);
  report(12, "distinct-n exactness", 0, distinct_exact);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
