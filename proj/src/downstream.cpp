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
#include "curaug/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "curaug/error.hpp"
#include "curaug/text.hpp"

namespace curaug {

void TripletConfig::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) throw ParameterError("triplet margin must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be positive");
  }
  if (!(weight_decay >= 0.0) || learning_rate * weight_decay >= 1.0) {
    throw ParameterError("weight decay must be non-negative and below 1 / learning rate");
  }
}

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ParameterError("embedding dimensions differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// d D(x, y) / d x.
Embedding distance_gradient(std::span<const double> x, std::span<const double> y, Distance d) {
  Embedding g(x.size());
  if (d == Distance::squared_euclidean) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * (x[i] - y[i]);
    return g;
  }
  const double norm = std::sqrt(squared_distance(x, y));
  if (norm == 0.0) return Embedding(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = (x[i] - y[i]) / norm;
  return g;
}

}  // namespace

double embedding_distance(std::span<const double> a, std::span<const double> b, Distance d) {
  check_dims(a, b);
  const double sq = squared_distance(a, b);
  return d == Distance::squared_euclidean ? sq : std::sqrt(sq);
}

double triplet_loss(std::span<const double> a, std::span<const double> p, std::span<const double> n,
                    const TripletConfig& cfg) {
  check_dims(a, p);
  check_dims(a, n);
  const double raw = embedding_distance(a, p, cfg.distance) - embedding_distance(a, n, cfg.distance) + cfg.margin;
  return cfg.clamp ? std::max(0.0, raw) : raw;
}

TripletGradient triplet_gradient(std::span<const double> a, std::span<const double> p,
                                 std::span<const double> n, const TripletConfig& cfg) {
  TripletGradient g;
  g.loss = triplet_loss(a, p, n, cfg);
  const std::size_t e = a.size();
  g.active = !cfg.clamp || g.loss > 0.0;
  if (!g.active) {
    g.da.assign(e, 0.0);
    g.dp.assign(e, 0.0);
    g.dn.assign(e, 0.0);
    return g;
  }
  const Embedding dap = distance_gradient(a, p, cfg.distance);
  const Embedding dan = distance_gradient(a, n, cfg.distance);
  g.da.resize(e);
  g.dp.resize(e);
  g.dn.resize(e);
  for (std::size_t i = 0; i < e; ++i) {
    g.da[i] = dap[i] - dan[i];
    g.dp[i] = -dap[i];
    g.dn[i] = dan[i];
  }
  return g;
}

// ---------------------------------------------------------------------------

EmbeddingModel::EmbeddingModel(const Options& options, Rng& rng)
    : features_(options.features),
      dims_(options.dims),
      hash_seed_(options.hash_seed),
      normalize_(options.normalize) {
  if (features_ < 1 || dims_ < 1) throw ParameterError("embedding dimensions must be positive");
  weights_.resize(features_ * dims_);
  for (double& w : weights_) w = (2.0 * rng.uniform01() - 1.0) * options.init_scale;
}

SparseFeatures EmbeddingModel::featurize(std::string_view text) const {
  const auto tokens = tokenize(text);
  const std::uint64_t basis = splitmix64(hash_seed_);
  std::map<std::uint32_t, double> counts;
  const auto bump = [&](const std::string& key) {
    counts[static_cast<std::uint32_t>(fnv1a64(key, basis) % features_)] += 1.0;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bump("u:" + tokens[i]);
    if (i + 1 < tokens.size()) bump("b:" + tokens[i] + " " + tokens[i + 1]);
  }
  double norm = 0.0;
  for (const auto& [idx, c] : counts) norm += c * c;
  norm = std::sqrt(norm);
  SparseFeatures x;
  x.entries.reserve(counts.size());
  for (const auto& [idx, c] : counts) x.entries.emplace_back(idx, c / norm);
  return x;
}

Embedding EmbeddingModel::project(const SparseFeatures& x) const {
  Embedding e(dims_, 0.0);
  for (const auto& [f, v] : x.entries) {
    const double* row = &weights_[static_cast<std::size_t>(f) * dims_];
    for (std::size_t j = 0; j < dims_; ++j) e[j] += v * row[j];
  }
  return e;
}

Embedding EmbeddingModel::embed(const SparseFeatures& x) const {
  Embedding e = project(x);
  if (!normalize_) return e;
  const double norm = std::sqrt(std::inner_product(e.begin(), e.end(), e.begin(), 0.0));
  if (norm > 0.0) {
    for (double& v : e) v /= norm;
  }
  return e;
}

Embedding EmbeddingModel::backward(std::span<const double> projected, std::span<const double> grad) const {
  Embedding g(grad.begin(), grad.end());
  if (!normalize_) return g;
  const double norm = std::sqrt(std::inner_product(projected.begin(), projected.end(), projected.begin(), 0.0));
  if (norm == 0.0) return Embedding(grad.size(), 0.0);
  // d(r/|r|)/dr = (I - u u^T) / |r| with u = r/|r|.
  double dot = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) dot += projected[j] / norm * grad[j];
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = (grad[j] - dot * projected[j] / norm) / norm;
  return g;
}

void EmbeddingModel::add_outer(const SparseFeatures& x, std::span<const double> direction, double scale) {
  if (direction.size() != dims_) throw ParameterError("gradient dimension mismatch");
  for (const auto& [f, v] : x.entries) {
    double* row = &weights_[static_cast<std::size_t>(f) * dims_];
    for (std::size_t j = 0; j < dims_; ++j) row[j] += scale * v * direction[j];
  }
}

std::string EmbeddingModel::serialize(const Json& provenance) const {
  std::string out;
  Json header;
  header["kind"] = "header";
  header["format"] = "curaug-embedding";
  header["format_version"] = kEmbeddingFormatVersion;
  header["features"] = features_;
  header["dims"] = dims_;
  header["hash_seed"] = hash_seed_;
  header["normalize"] = normalize_;
  header["provenance"] = provenance;
  out += to_jsonl_line(header);
  for (std::size_t f = 0; f < features_; ++f) {
    Json row;
    row["kind"] = "row";
    row["feature"] = f;
    row["weights"] = std::vector<double>(weights_.begin() + static_cast<std::ptrdiff_t>(f * dims_),
                                         weights_.begin() + static_cast<std::ptrdiff_t>((f + 1) * dims_));
    out += to_jsonl_line(row);
  }
  return out;
}

EmbeddingModel EmbeddingModel::deserialize(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  EmbeddingModel m;
  bool have_header = false;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json rec = Json::parse(line);
      if (!have_header) {
        if (rec.at("format").get<std::string>() != "curaug-embedding" ||
            rec.at("format_version").get<int>() != kEmbeddingFormatVersion) {
          throw DataError("unsupported embedding model format");
        }
        m.features_ = rec.at("features").get<std::size_t>();
        m.dims_ = rec.at("dims").get<std::size_t>();
        m.hash_seed_ = rec.at("hash_seed").get<std::uint64_t>();
        m.normalize_ = rec.at("normalize").get<bool>();
        m.weights_.assign(m.features_ * m.dims_, 0.0);
        have_header = true;
        continue;
      }
      const auto f = rec.at("feature").get<std::size_t>();
      const auto w = rec.at("weights").get<std::vector<double>>();
      if (f != rows || w.size() != m.dims_) throw DataError("row out of order or wrong width");
      std::copy(w.begin(), w.end(), m.weights_.begin() + static_cast<std::ptrdiff_t>(f * m.dims_));
      ++rows;
    } catch (const std::exception& e) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header || rows != m.features_) throw DataError(origin + ": truncated embedding model");
  return m;
}

std::vector<double> triplet_weight_gradient(const EmbeddingModel& model, const SparseFeatures& a,
                                            const SparseFeatures& p, const SparseFeatures& n,
                                            const TripletConfig& cfg) {
  const auto g = triplet_gradient(model.embed(a), model.embed(p), model.embed(n), cfg);
  std::vector<double> grad(model.features() * model.dims(), 0.0);
  const auto accumulate = [&](const SparseFeatures& x, const Embedding& d_embed) {
    const Embedding d = model.backward(model.project(x), d_embed);
    for (const auto& [f, v] : x.entries) {
      for (std::size_t j = 0; j < model.dims(); ++j) grad[f * model.dims() + j] += v * d[j];
    }
  };
  accumulate(a, g.da);
  accumulate(p, g.dp);
  accumulate(n, g.dn);
  return grad;
}

// ---------------------------------------------------------------------------

TripletTrainer::TripletTrainer(EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                               const AugmentationCache* cache, TripletConfig cfg, std::uint64_t seed)
    : model_(model), train_(train), cache_(cache), cfg_(cfg), rng_(seed) {
  cfg_.validate();
  for (const auto& inst : train_) {
    if (!inst.label) throw DataError("training instance '" + inst.id + "' has no label");
  }
}

std::string TripletTrainer::pick_positive(const BatchItem& item) {
  std::vector<const TrainingInstance*> same;
  const TrainingInstance* own = nullptr;
  for (const auto& inst : train_) {
    if (inst.id == item.source_id) {
      own = &inst;
    } else if (inst.label == item.label) {
      same.push_back(&inst);
    }
  }
  if (!same.empty()) return same[rng_.uniform_index(same.size())]->text;
  if (own && own->text != item.text) return own->text;
  if (cache_ && cache_->contains(item.source_id)) {
    std::vector<const std::string*> pool;
    const auto& e = cache_->entry(item.source_id);
    for (std::size_t l = 1; l < e.buckets.size(); ++l) {
      for (const auto& t : e.buckets[l]) {
        if (t != item.text) pool.push_back(&t);
      }
    }
    if (!pool.empty()) return *pool[rng_.uniform_index(pool.size())];
  }
  throw TrainingError("cannot form a triplet for '" + item.source_id + "': class '" +
                      item.label.value_or("") +
                      "' has no other instance and the instance has no augmentation");
}

double TripletTrainer::train_batch(std::span<const BatchItem> batch) {
  if (batch.empty()) throw ParameterError("empty batch");
  struct Encoded {
    SparseFeatures x;
    Embedding raw;  // before normalization
    Embedding e;
  };
  const auto encode = [&](const std::string& text) {
    Encoded out;
    out.x = model_.featurize(text);
    out.raw = model_.project(out.x);
    out.e = model_.embed(out.x);
    return out;
  };
  std::vector<Encoded> anchors;
  anchors.reserve(batch.size());
  for (const auto& item : batch) {
    if (!item.label) throw TrainingError("batch item '" + item.source_id + "' has no label");
    anchors.push_back(encode(item.text));
  }

  struct Update {
    const SparseFeatures* x;
    Embedding direction;
  };
  std::vector<Encoded> extra;  // positives and fallback negatives
  extra.reserve(2 * batch.size());
  std::vector<Update> updates;
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& item = batch[i];
    const Encoded& a = anchors[i];
    const Encoded& pos = extra.emplace_back(encode(pick_positive(item)));

    // Hardest negative: in-batch first, originals as the fallback pool.
    double best = std::numeric_limits<double>::infinity();
    const Encoded* neg = nullptr;
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (batch[j].label == item.label) continue;
      const double d = embedding_distance(a.e, anchors[j].e, cfg_.distance);
      if (d < best) {
        best = d;
        neg = &anchors[j];
      }
    }
    if (!neg) {
      std::optional<Encoded> closest;
      for (const auto& inst : train_) {
        if (inst.label == item.label) continue;
        Encoded cand = encode(inst.text);
        const double d = embedding_distance(a.e, cand.e, cfg_.distance);
        if (d < best) {
          best = d;
          closest = std::move(cand);
        }
      }
      if (!closest) {
        throw TrainingError("cannot form a triplet for '" + item.source_id + "': no instance of another class");
      }
      neg = &extra.emplace_back(std::move(*closest));
    }

    const TripletGradient g = triplet_gradient(a.e, pos.e, neg->e, cfg_);
    total += g.loss;
    if (g.active) {
      updates.push_back({&a.x, model_.backward(a.raw, g.da)});
      updates.push_back({&pos.x, model_.backward(pos.raw, g.dp)});
      updates.push_back({&neg->x, model_.backward(neg->raw, g.dn)});
    }
  }
  if (cfg_.weight_decay > 0.0) {
    const double keep = 1.0 - cfg_.learning_rate * cfg_.weight_decay;
    for (double& w : model_.weights()) w *= keep;
  }
  const double scale = -cfg_.learning_rate / static_cast<double>(batch.size());
  for (const auto& u : updates) model_.add_outer(*u.x, u.direction, scale);
  return total / static_cast<double>(batch.size());
}

TrainedClassifier train_classifier(const std::vector<TrainingInstance>& train,
                                   const AugmentationCache& cache, const ScheduleSpec& schedule,
                                   const TripletConfig& cfg, const EmbeddingModel::Options& options,
                                   std::uint64_t seed) {
  if (train.empty()) throw DataError("empty training set");
  Rng init(derive_seed(seed, "init"));
  TrainedClassifier out{EmbeddingModel(options, init), {}};
  TripletTrainer trainer(out.model, train, &cache, cfg, derive_seed(seed, "triplets"));
  Rng schedule_rng(derive_seed(seed, "schedule"));
  out.log = run(cache, schedule, trainer, schedule_rng);
  return out;
}

std::vector<double> fit_epochs(EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                               const TripletConfig& cfg, std::size_t batch_size, std::uint64_t seed) {
  if (train.empty()) throw DataError("empty training set");
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
  TripletTrainer trainer(model, train, nullptr, cfg, derive_seed(seed, "triplets"));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "order"));
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);

  std::vector<double> epoch_loss;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<BatchItem> batch;
      for (std::size_t k = start; k < std::min(order.size(), start + batch_size); ++k) {
        const auto& inst = train[order[k]];
        batch.push_back({inst.id, inst.text, inst.label, 0, 0});
      }
      sum += trainer.train_batch(batch);
      ++steps;
    }
    epoch_loss.push_back(sum / static_cast<double>(steps));
  }
  return epoch_loss;
}

NearestNeighborClassifier::NearestNeighborClassifier(const EmbeddingModel& model,
                                                     const std::vector<TrainingInstance>& train)
    : model_(model) {
  if (train.empty()) throw DataError("cannot classify against an empty training set");
  for (const auto& inst : train) {
    if (!inst.label) throw DataError("training instance '" + inst.id + "' has no label");
    instances_.push_back(&inst);
  }
  std::sort(instances_.begin(), instances_.end(),
            [](const TrainingInstance* a, const TrainingInstance* b) { return a->id < b->id; });
  for (const auto* inst : instances_) embeddings_.push_back(model_.embed(inst->text));
}

std::string NearestNeighborClassifier::classify(std::string_view text) const {
  const Embedding q = model_.embed(text);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    const double d = squared_distance(q, embeddings_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return *instances_[best]->label;
}

std::string classify(const EmbeddingModel& model, std::string_view text,
                     const std::vector<TrainingInstance>& train) {
  return NearestNeighborClassifier(model, train).classify(text);
}

double accuracy(const EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                const std::vector<TrainingInstance>& test) {
  if (test.empty()) throw DataError("empty test set");
  const NearestNeighborClassifier nn(model, train);
  std::size_t correct = 0;
  for (const auto& inst : test) {
    if (!inst.label) throw DataError("test instance '" + inst.id + "' has no label");
    if (nn.classify(inst.text) == *inst.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace curaug
