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
#include "curaug/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "curaug/error.hpp"

namespace curaug {

NGramModel train_ngram(const std::vector<std::vector<std::string>>& corpus, std::size_t order,
                       double alpha) {
  if (order < 1) throw ParameterError("n-gram order must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
  const bool any_tokens = std::any_of(corpus.begin(), corpus.end(),
                                      [](const auto& seq) { return !seq.empty(); });
  if (!any_tokens) throw DataError("cannot train an n-gram model on an empty corpus");

  NGramModel m;
  m.order_ = order;
  m.alpha_ = alpha;
  m.table_[{}];
  for (const auto& sentence : corpus) {
    std::vector<TokenId> seq;
    seq.reserve(sentence.size() + 2);
    seq.push_back(Vocabulary::kBos);
    for (const auto& tok : sentence) seq.push_back(m.vocab_.add(tok));
    seq.push_back(Vocabulary::kEos);
    for (std::size_t j = 1; j < seq.size(); ++j) {
      const std::size_t max_h = std::min(order - 1, j);
      for (std::size_t h = 0; h <= max_h; ++h) {
        std::vector<TokenId> ctx(seq.begin() + static_cast<std::ptrdiff_t>(j - h),
                                 seq.begin() + static_cast<std::ptrdiff_t>(j));
        auto& counts = m.table_[std::move(ctx)];
        ++counts.total;
        ++counts.next[seq[j]];
      }
    }
  }
  m.unigram_ = m.next_probabilities({});
  return m;
}

std::vector<TokenId> NGramModel::effective_context(std::span<const TokenId> context) const {
  const std::size_t h = std::min(order_ - 1, context.size());
  std::vector<TokenId> ctx(context.end() - static_cast<std::ptrdiff_t>(h), context.end());
  while (!ctx.empty() && !table_.contains(ctx)) ctx.erase(ctx.begin());
  return ctx;
}

std::vector<double> NGramModel::next_probabilities(std::span<const TokenId> context) const {
  const std::vector<TokenId> ctx = effective_context(context);
  if (ctx.empty() && !unigram_.empty()) return unigram_;
  const ContextCounts& counts = table_.at(ctx);
  const double denom = static_cast<double>(counts.total) + alpha_ * static_cast<double>(emittable_count());
  std::vector<double> probs(vocab_.size(), 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (Vocabulary::is_emittable(static_cast<TokenId>(i))) probs[i] = alpha_ / denom;
  }
  for (const auto& [tok, c] : counts.next) {
    probs[static_cast<std::size_t>(tok)] = (static_cast<double>(c) + alpha_) / denom;
  }
  return probs;
}

TokenDistribution NGramModel::next_distribution(std::span<const TokenId> context) const {
  return TokenDistribution::from_probabilities(next_probabilities(context));
}

double NGramModel::backoff_score(TokenId token, std::span<const TokenId> context) const {
  const std::size_t wanted = std::min(order_ - 1, context.size());
  const std::vector<TokenId> ctx = effective_context(context);
  const double p = next_probabilities(context).at(static_cast<std::size_t>(token));
  return std::pow(kStupidBackoffFactor, static_cast<double>(wanted - ctx.size())) * p;
}

std::string NGramModel::serialize(const Json& provenance) const {
  std::string out;
  Json header;
  header["kind"] = "header";
  header["format"] = "curaug-ngram";
  header["format_version"] = kNGramFormatVersion;
  header["order"] = order_;
  header["alpha"] = alpha_;
  header["vocab_size"] = vocab_.size();
  header["contexts"] = table_.size();
  header["provenance"] = provenance;
  out += to_jsonl_line(header);

  Json vocab;
  vocab["kind"] = "vocab";
  vocab["tokens"] = vocab_.tokens();
  out += to_jsonl_line(vocab);

  for (const auto& [ctx, counts] : table_) {
    Json rec;
    rec["kind"] = "context";
    rec["context"] = ctx;
    rec["total"] = counts.total;
    Json next = Json::array();
    for (const auto& [tok, c] : counts.next) next.push_back(Json::array({tok, c}));
    rec["next"] = std::move(next);
    out += to_jsonl_line(rec);
  }
  return out;
}

NGramModel::Loaded NGramModel::deserialize(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) -> DataError {
    return DataError(origin + ": line " + std::to_string(line_no) + ": " + msg);
  };

  Loaded loaded{NGramModel{}, Json::object()};
  NGramModel& m = loaded.model;
  std::size_t expected_contexts = 0;
  bool have_header = false, have_vocab = false;
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
        if (kind != "header" || rec.at("format").get<std::string>() != "curaug-ngram") {
          throw fail("not an n-gram model file");
        }
        if (rec.at("format_version").get<int>() != kNGramFormatVersion) {
          throw fail("unsupported format version " + rec.at("format_version").dump());
        }
        m.order_ = rec.at("order").get<std::size_t>();
        m.alpha_ = rec.at("alpha").get<double>();
        expected_contexts = rec.at("contexts").get<std::size_t>();
        loaded.provenance = rec.at("provenance");
        have_header = true;
      } else if (!have_vocab) {
        if (kind != "vocab") throw fail("expected vocabulary record");
        m.vocab_ = Vocabulary::from_tokens(rec.at("tokens").get<std::vector<std::string>>());
        have_vocab = true;
      } else {
        if (kind != "context") throw fail("expected context record");
        ContextCounts counts;
        counts.total = rec.at("total").get<std::uint64_t>();
        for (const auto& pair : rec.at("next")) {
          const auto tok = pair.at(0).get<TokenId>();
          if (tok < 0 || static_cast<std::size_t>(tok) >= m.vocab_.size()) {
            throw fail("token id out of range");
          }
          counts.next[tok] = pair.at(1).get<std::uint64_t>();
        }
        m.table_[rec.at("context").get<std::vector<TokenId>>()] = std::move(counts);
      }
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("bad field: ") + e.what());
    }
  }
  if (!have_header || !have_vocab) throw DataError(origin + ": truncated n-gram model file");
  if (m.table_.size() != expected_contexts || !m.table_.contains({})) {
    throw DataError(origin + ": context table does not match its header");
  }
  if (m.order_ < 1 || !(m.alpha_ > 0.0)) throw DataError(origin + ": invalid order or alpha");
  m.unigram_ = m.next_probabilities({});
  return loaded;
}

NGramModel::Loaded NGramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str(), path.string());
}

// ---------------------------------------------------------------------------

SourceConditionedModel::SourceConditionedModel(const NGramModel& base, Options options)
    : base_(base), options_(options) {
  if (!(options_.copy_weight >= 0.0 && options_.copy_weight <= 1.0) ||
      !(options_.align_weight >= 0.0 && options_.align_weight <= 1.0)) {
    throw ParameterError("copy and alignment weights must lie in [0, 1]");
  }
}

TokenDistribution SourceConditionedModel::next_distribution(std::span<const TokenId> context) const {
  const auto sep = std::find(context.rbegin(), context.rend(), Vocabulary::kSep);
  if (sep == context.rend() || options_.copy_weight == 0.0) return base_.next_distribution(context);

  const auto sep_pos = context.rend() - sep - 1;
  const std::span<const TokenId> generated = context.subspan(static_cast<std::size_t>(sep_pos) + 1);
  std::vector<TokenId> source;
  for (std::ptrdiff_t i = 0; i < sep_pos; ++i) {
    const TokenId t = context[static_cast<std::size_t>(i)];
    if (!Vocabulary::is_reserved(t)) source.push_back(t);
  }

  std::vector<TokenId> history{Vocabulary::kBos};
  history.insert(history.end(), generated.begin(), generated.end());
  std::vector<double> probs = base_.next_probabilities(history);
  if (source.empty()) return TokenDistribution::from_probabilities(probs);

  const std::size_t n = probs.size();
  std::vector<double> align(n, 0.0), bag(n, 0.0);
  for (TokenId t : source) bag[static_cast<std::size_t>(t)] += 1.0 / static_cast<double>(source.size());

  std::vector<TokenId> followers;
  if (generated.empty()) {
    followers.push_back(source.front());
  } else {
    for (std::size_t i = 0; i < source.size(); ++i) {
      if (source[i] == generated.back()) {
        followers.push_back(i + 1 < source.size() ? source[i + 1] : Vocabulary::kEos);
      }
    }
  }
  double align_weight = options_.align_weight;
  if (followers.empty()) {
    align_weight = 0.0;
  } else {
    for (TokenId t : followers) align[static_cast<std::size_t>(t)] += 1.0 / static_cast<double>(followers.size());
  }

  const double lambda = options_.copy_weight;
  for (std::size_t i = 0; i < n; ++i) {
    const double copy = align_weight * align[i] + (1.0 - align_weight) * bag[i];
    probs[i] = (1.0 - lambda) * probs[i] + lambda * copy;
  }
  return TokenDistribution::from_probabilities(probs);
}

}  // namespace curaug
