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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curaug/curriculum.hpp"
#include "curaug/jsonl.hpp"
#include "curaug/random.hpp"

namespace curaug {

enum class Distance { euclidean, squared_euclidean };

// Loss = D(a, p) - D(a, n) + margin, clamped at zero unless clamp is off.
struct TripletConfig {
  double margin = 1.0;
  Distance distance = Distance::squared_euclidean;
  bool clamp = true;
  double learning_rate = 0.5;
  double weight_decay = 0.0;  // L2 penalty, applied to every weight each step
  std::size_t epochs = 10;  // fit_epochs only

  void validate() const;
};

using Embedding = std::vector<double>;

double embedding_distance(std::span<const double> a, std::span<const double> b, Distance d);

double triplet_loss(std::span<const double> a, std::span<const double> p, std::span<const double> n,
                    const TripletConfig& cfg);

struct TripletGradient {
  double loss = 0.0;
  bool active = false;  // false when clamped to zero
  Embedding da, dp, dn;
};

// Loss and its gradient w.r.t. the three embeddings. At a zero Euclidean
// distance the subgradient 0 is used.
TripletGradient triplet_gradient(std::span<const double> a, std::span<const double> p,
                                 std::span<const double> n, const TripletConfig& cfg);

// Sparse hashed bag of unigrams and bigrams, L2-normalized.
struct SparseFeatures {
  std::vector<std::pair<std::uint32_t, double>> entries;  // sorted by index
};

inline constexpr int kEmbeddingFormatVersion = 1;

// Linear map from hashed features (dimension F) to embeddings (dimension E).
class EmbeddingModel {
 public:
  struct Options {
    std::size_t features = 4096;
    std::size_t dims = 64;
    std::uint64_t hash_seed = 0x5eed;
    double init_scale = 0.1;
    bool normalize = true;  // project embeddings onto the unit sphere
  };

  // Weights drawn uniformly from [-init_scale, init_scale].
  EmbeddingModel(const Options& options, Rng& rng);

  std::size_t features() const { return features_; }
  std::size_t dims() const { return dims_; }
  std::uint64_t hash_seed() const { return hash_seed_; }
  bool normalize() const { return normalize_; }

  SparseFeatures featurize(std::string_view text) const;
  // x W, before any normalization.
  Embedding project(const SparseFeatures& x) const;
  Embedding embed(const SparseFeatures& x) const;
  Embedding embed(std::string_view text) const { return embed(featurize(text)); }

  // Maps a loss gradient w.r.t. embed(x) to one w.r.t. project(x).
  Embedding backward(std::span<const double> projected, std::span<const double> grad) const;

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }

  // W[f, :] += scale * x_f * direction for every feature f in x.
  void add_outer(const SparseFeatures& x, std::span<const double> direction, double scale);

  std::string serialize(const Json& provenance = Json::object()) const;
  static EmbeddingModel deserialize(const std::string& text, const std::string& origin = "<memory>");

 private:
  EmbeddingModel() = default;

  std::size_t features_ = 0;
  std::size_t dims_ = 0;
  std::uint64_t hash_seed_ = 0;
  bool normalize_ = false;
  std::vector<double> weights_;  // row-major F x E
};

// Gradient of the triplet loss w.r.t. every weight, dense F x E.
std::vector<double> triplet_weight_gradient(const EmbeddingModel& model, const SparseFeatures& a,
                                            const SparseFeatures& p, const SparseFeatures& n,
                                            const TripletConfig& cfg);

// Curriculum trainer hook. Per item: anchor = the retrieved text; positive =
// another original of the same class (or, for single-instance classes, the
// item's original or one of its cached paraphrases); negative = the
// different-class batch item closest to the anchor, or the closest
// different-class original when the batch has none. One SGD step per batch.
class TripletTrainer final : public TrainerHook {
 public:
  TripletTrainer(EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                 const AugmentationCache* cache, TripletConfig cfg, std::uint64_t seed);

  double train_batch(std::span<const BatchItem> batch) override;

 private:
  std::string pick_positive(const BatchItem& item);

  EmbeddingModel& model_;
  const std::vector<TrainingInstance>& train_;
  const AugmentationCache* cache_;
  TripletConfig cfg_;
  Rng rng_;
};

struct TrainedClassifier {
  EmbeddingModel model;
  std::vector<LogEntry> log;
};

TrainedClassifier train_classifier(const std::vector<TrainingInstance>& train,
                                   const AugmentationCache& cache, const ScheduleSpec& schedule,
                                   const TripletConfig& cfg, const EmbeddingModel::Options& options,
                                   std::uint64_t seed);

// Plain training on the originals: cfg.epochs passes over a fixed-order
// shuffle, batch_size items per step. Returns the mean loss of each epoch.
std::vector<double> fit_epochs(EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                               const TripletConfig& cfg, std::size_t batch_size, std::uint64_t seed);

// Label of the nearest training instance (Euclidean distance between
// embeddings; ties go to the lexicographically smaller id).
class NearestNeighborClassifier {
 public:
  NearestNeighborClassifier(const EmbeddingModel& model, const std::vector<TrainingInstance>& train);
  std::string classify(std::string_view text) const;

 private:
  const EmbeddingModel& model_;
  std::vector<const TrainingInstance*> instances_;
  std::vector<Embedding> embeddings_;
};

std::string classify(const EmbeddingModel& model, std::string_view text,
                     const std::vector<TrainingInstance>& train);

// Fraction of test instances whose predicted label matches.
double accuracy(const EmbeddingModel& model, const std::vector<TrainingInstance>& train,
                const std::vector<TrainingInstance>& test);

}  // namespace curaug
