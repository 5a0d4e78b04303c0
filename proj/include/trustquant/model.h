/*
 * Copyright 2026 The TrustQuant Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Fully-connected credit-default classifier: ReLU hidden layers, softmax
// output, mean cross-entropy loss, Adam training and JSON persistence.

#ifndef TRUSTQUANT_MODEL_H_
#define TRUSTQUANT_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustquant/dataset.h"
#include "trustquant/prediction.h"

namespace trustquant {

// Input, four hidden layers of 10 units, two-way softmax output.
inline constexpr std::array<std::size_t, 6> kCreditLayerDims = {
    kNumFeatures, 10, 10, 10, 10, 2};

std::vector<std::size_t> CreditLayerDims();

// Weights are row-major with shape (out, in).
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& weight(std::size_t row, std::size_t col) {
    return weights[row * in + col];
  }
  double weight(std::size_t row, std::size_t col) const {
    return weights[row * in + col];
  }
  bool operator==(const DenseLayer&) const = default;
};

// Zero-filled layers with the shapes implied by layer_dims.
std::vector<DenseLayer> ZeroLayers(std::span<const std::size_t> layer_dims);

class Mlp {
 public:
  // All weights and biases zero. Needs at least an input and an output size.
  explicit Mlp(std::vector<std::size_t> layer_dims);

  // Fan-balanced uniform weights in [-sqrt(6/(in+out)), +sqrt(6/(in+out))],
  // zero biases.
  static Mlp Initialize(std::vector<std::size_t> layer_dims,
                        std::uint64_t seed);

  const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }
  std::size_t input_dim() const { return layer_dims_.front(); }
  std::size_t output_dim() const { return layer_dims_.back(); }
  std::size_t num_parameters() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // Class probabilities. Throws NumericError on non-finite activations.
  std::vector<double> Forward(std::span<const double> features) const;

  // Throws NumericError if any parameter is not finite.
  void CheckFinite() const;

  bool operator==(const Mlp&) const = default;

 private:
  std::vector<std::size_t> layer_dims_;
  std::vector<DenseLayer> layers_;
};

// Max-subtracted softmax.
std::vector<double> Softmax(std::span<const double> logits);

struct Example {
  std::span<const double> features;
  int label = 0;
};

struct Gradients {
  std::vector<DenseLayer> layers;
};

struct LossAndGrad {
  double loss = 0.0;
  Gradients gradients;
};

// Mean cross-entropy over the batch.
double MeanCrossEntropy(const Mlp& model, std::span<const Example> batch);

// Mean cross-entropy and its exact gradient by backpropagation.
LossAndGrad LossAndGradients(const Mlp& model, std::span<const Example> batch);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  std::int64_t step = 0;

  static AdamState ZerosLike(const Mlp& model);
};

// One bias-corrected Adam update.
void AdamStep(Mlp& model, AdamState& state, const Gradients& gradients,
              double learning_rate, const AdamConfig& config);

struct TrainConfig {
  int epochs = 20;
  double lr0 = 1e-3;
  // Per-epoch multiplier on the learning rate.
  double decay = 0.96;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  AdamConfig adam;

  void Validate() const;
  // lr0 * decay^epoch, epoch counted from 0.
  double LearningRate(int epoch) const;
  bool operator==(const TrainConfig&) const = default;
};

struct EpochStats {
  int epoch = 0;
  double learning_rate = 0.0;
  // Mean per-sample loss over the epoch's minibatches.
  double loss = 0.0;
  // Training-set accuracy after the epoch.
  double accuracy = 0.0;
};

struct TrainResult {
  Mlp model;
  std::vector<EpochStats> history;
};

// Minibatch Adam on the credit architecture. Bitwise deterministic for a
// fixed config.
TrainResult Train(std::span<const FeatureVector> features,
                  std::span<const int> labels, const TrainConfig& config,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

// argmax with ties toward the lower class index.
int ArgMax(std::span<const double> probabilities);

PredictionRecord PredictionFromProbabilities(
    std::int64_t id, int true_label, std::span<const double> probabilities,
    const DemographicProfile& demographics);

PredictionRecord Predict(const Mlp& model, const ClientRecord& record,
                         const StandardizationParams& params);

// Same results as calling Predict on every record; work is split across
// num_threads workers when num_threads > 1.
std::vector<PredictionRecord> PredictBatch(
    const Mlp& model, std::span<const ClientRecord> records,
    const StandardizationParams& params, unsigned num_threads = 1);

// Everything persisted in a model file.
struct ModelBundle {
  Mlp model{CreditLayerDims()};
  StandardizationParams params;
  TrainConfig config;
};

std::string SerializeModel(const ModelBundle& bundle);
// Throws ValidationError on malformed JSON and DimensionError when the
// weight shapes disagree with layer_dims or with expected_dims.
ModelBundle ParseModel(const std::string& text,
                       const std::optional<std::vector<std::size_t>>&
                           expected_dims = CreditLayerDims());
void SaveModel(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle LoadModel(const std::filesystem::path& path,
                      const std::optional<std::vector<std::size_t>>&
                          expected_dims = CreditLayerDims());

}  // namespace trustquant

#endif  // TRUSTQUANT_MODEL_H_
