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

#include "trustquant/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

using Json = nlohmann::ordered_json;

// Seed streams derived from TrainConfig::seed.
constexpr std::uint64_t kInitStream = 3;
constexpr std::uint64_t kShuffleStream = 4;

constexpr int kModelFormatVersion = 1;

// Pre-activations and activations of every layer for one input.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // activations[0] = input
  std::vector<std::vector<double>> pre_activations;
};

ForwardTrace Trace(const Mlp& model, std::span<const double> features) {
  if (features.size() != model.input_dim()) {
    throw DimensionError("expected " + std::to_string(model.input_dim()) +
                         " features, got " + std::to_string(features.size()));
  }
  ForwardTrace trace;
  trace.activations.emplace_back(features.begin(), features.end());
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    const std::vector<double>& input = trace.activations.back();
    std::vector<double> z(layer.out);
    for (std::size_t r = 0; r < layer.out; ++r) {
      double acc = layer.biases[r];
      const double* row = &layer.weights[r * layer.in];
      for (std::size_t c = 0; c < layer.in; ++c) acc += row[c] * input[c];
      if (!std::isfinite(acc)) {
        throw NumericError("non-finite pre-activation in layer " +
                           std::to_string(l + 1));
      }
      z[r] = acc;
    }
    std::vector<double> a = z;
    if (l + 1 < layers.size()) {
      for (double& v : a) v = std::max(v, 0.0);
    }
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

// -log softmax(logits)[label], computed from the logits directly.
double CrossEntropyFromLogits(std::span<const double> logits, int label) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - max_logit);
  return std::log(sum) - (logits[static_cast<std::size_t>(label)] - max_logit);
}

void CheckLabel(const Mlp& model, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.output_dim()) {
    throw ValidationError("label " + std::to_string(label) +
                          " outside the model's class range");
  }
}

Json LayerWeightsToJson(const DenseLayer& layer) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < layer.out; ++r) {
    rows.push_back(std::vector<double>(
        layer.weights.begin() + static_cast<std::ptrdiff_t>(r * layer.in),
        layer.weights.begin() + static_cast<std::ptrdiff_t>((r + 1) * layer.in)));
  }
  return rows;
}

std::vector<double> ReadVector(const Json& node, std::size_t expected,
                               const std::string& what) {
  if (!node.is_array()) throw ValidationError(what + " is not an array");
  if (node.size() != expected) {
    throw DimensionError(what + " has " + std::to_string(node.size()) +
                         " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const Json& v : node) {
    if (!v.is_number()) throw ValidationError(what + " holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<std::size_t> CreditLayerDims() {
  return {kCreditLayerDims.begin(), kCreditLayerDims.end()};
}

std::vector<DenseLayer> ZeroLayers(std::span<const std::size_t> layer_dims) {
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    DenseLayer layer;
    layer.in = layer_dims[l];
    layer.out = layer_dims[l + 1];
    layer.weights.assign(layer.in * layer.out, 0.0);
    layer.biases.assign(layer.out, 0.0);
    layers.push_back(std::move(layer));
  }
  return layers;
}

Mlp::Mlp(std::vector<std::size_t> layer_dims)
    : layer_dims_(std::move(layer_dims)) {
  if (layer_dims_.size() < 2) {
    throw DimensionError("an MLP needs at least an input and an output size");
  }
  for (std::size_t d : layer_dims_) {
    if (d == 0) throw DimensionError("layer sizes must be positive");
  }
  layers_ = ZeroLayers(layer_dims_);
}

Mlp Mlp::Initialize(std::vector<std::size_t> layer_dims, std::uint64_t seed) {
  Mlp model(std::move(layer_dims));
  Rng rng(seed);
  for (DenseLayer& layer : model.layers_) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (double& w : layer.weights) w = rng.Uniform(-limit, limit);
  }
  return model;
}

std::size_t Mlp::num_parameters() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) {
    n += layer.weights.size() + layer.biases.size();
  }
  return n;
}

std::vector<double> Mlp::Forward(std::span<const double> features) const {
  ForwardTrace trace = Trace(*this, features);
  return Softmax(trace.activations.back());
}

void Mlp::CheckFinite() const {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
        !std::all_of(layer.biases.begin(), layer.biases.end(), finite)) {
      throw NumericError("non-finite parameter in layer " +
                         std::to_string(l + 1));
    }
  }
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double MeanCrossEntropy(const Mlp& model, std::span<const Example> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  double total = 0.0;
  for (const Example& example : batch) {
    CheckLabel(model, example.label);
    const ForwardTrace trace = Trace(model, example.features);
    total += CrossEntropyFromLogits(trace.activations.back(), example.label);
  }
  return total / static_cast<double>(batch.size());
}

LossAndGrad LossAndGradients(const Mlp& model, std::span<const Example> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  const auto& layers = model.layers();
  LossAndGrad result;
  result.gradients.layers = ZeroLayers(model.layer_dims());
  auto& grads = result.gradients.layers;
  const double scale = 1.0 / static_cast<double>(batch.size());

  double total_loss = 0.0;
  for (const Example& example : batch) {
    CheckLabel(model, example.label);
    const ForwardTrace trace = Trace(model, example.features);
    const std::vector<double>& logits = trace.activations.back();
    total_loss += CrossEntropyFromLogits(logits, example.label);

    // d(loss)/d(logits) = softmax - one_hot.
    std::vector<double> delta = Softmax(logits);
    delta[static_cast<std::size_t>(example.label)] -= 1.0;
    for (double& d : delta) d *= scale;

    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& layer = layers[l];
      DenseLayer& grad = grads[l];
      const std::vector<double>& input = trace.activations[l];
      for (std::size_t r = 0; r < layer.out; ++r) {
        grad.biases[r] += delta[r];
        double* row = &grad.weights[r * layer.in];
        for (std::size_t c = 0; c < layer.in; ++c) row[c] += delta[r] * input[c];
      }
      if (l == 0) break;
      std::vector<double> previous(layer.in, 0.0);
      const std::vector<double>& z_prev = trace.pre_activations[l - 1];
      for (std::size_t c = 0; c < layer.in; ++c) {
        if (z_prev[c] <= 0.0) continue;  // ReLU gate
        double acc = 0.0;
        for (std::size_t r = 0; r < layer.out; ++r) {
          acc += layer.weight(r, c) * delta[r];
        }
        previous[c] = acc;
      }
      delta = std::move(previous);
    }
  }
  result.loss = total_loss * scale;
  return result;
}

AdamState AdamState::ZerosLike(const Mlp& model) {
  AdamState state;
  state.first_moment = ZeroLayers(model.layer_dims());
  state.second_moment = ZeroLayers(model.layer_dims());
  return state;
}

void AdamStep(Mlp& model, AdamState& state, const Gradients& gradients,
              double learning_rate, const AdamConfig& config) {
  auto& layers = model.layers();
  if (state.first_moment.size() != layers.size() ||
      state.second_moment.size() != layers.size() ||
      gradients.layers.size() != layers.size()) {
    throw DimensionError("optimizer state does not match the model");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);

  const auto update = [&](std::vector<double>& params,
                          const std::vector<double>& grad,
                          std::vector<double>& m, std::vector<double>& v) {
    if (params.size() != grad.size() || params.size() != m.size() ||
        params.size() != v.size()) {
      throw DimensionError("optimizer state does not match the model");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  };

  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weights, gradients.layers[l].weights,
           state.first_moment[l].weights, state.second_moment[l].weights);
    update(layers[l].biases, gradients.layers[l].biases,
           state.first_moment[l].biases, state.second_moment[l].biases);
  }
}

void TrainConfig::Validate() const {
  if (epochs < 1) {
    throw ValidationError("epochs must be >= 1, got " + std::to_string(epochs));
  }
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) {
    throw ValidationError("learning rate must be > 0, got " + FormatDouble(lr0));
  }
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw ValidationError("decay must lie in (0, 1], got " + FormatDouble(decay));
  }
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.epsilon > 0.0)) {
    throw ValidationError("invalid Adam hyperparameters");
  }
}

double TrainConfig::LearningRate(int epoch) const {
  return lr0 * std::pow(decay, static_cast<double>(epoch));
}

int ArgMax(std::span<const double> probabilities) {
  // max_element returns the first maximum, which is the tie rule.
  return static_cast<int>(std::distance(
      probabilities.begin(),
      std::max_element(probabilities.begin(), probabilities.end())));
}

TrainResult Train(std::span<const FeatureVector> features,
                  std::span<const int> labels, const TrainConfig& config,
                  const std::function<void(const EpochStats&)>& on_epoch) {
  config.Validate();
  if (features.empty()) throw ValidationError("empty training set");
  if (features.size() != labels.size()) {
    throw DimensionError("feature and label counts differ");
  }

  TrainResult result{Mlp::Initialize(CreditLayerDims(),
                                     MixSeed(config.seed, kInitStream)),
                     {}};
  Mlp& model = result.model;
  AdamState state = AdamState::ZerosLike(model);
  Rng shuffle_rng(MixSeed(config.seed, kShuffleStream));

  std::vector<Example> examples;
  examples.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    examples.push_back({std::span<const double>(features[i]), labels[i]});
  }
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<Example> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.LearningRate(epoch);
    shuffle_rng.Shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);
      const LossAndGrad step = LossAndGradients(model, batch);
      loss_sum += step.loss * static_cast<double>(batch.size());
      AdamStep(model, state, step.gradients, lr, config.adam);
    }
    model.CheckFinite();

    std::size_t correct = 0;
    for (const Example& example : examples) {
      if (ArgMax(model.Forward(example.features)) == example.label) ++correct;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.learning_rate = lr;
    stats.loss = loss_sum / static_cast<double>(examples.size());
    stats.accuracy =
        static_cast<double>(correct) / static_cast<double>(examples.size());
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

PredictionRecord PredictionFromProbabilities(
    std::int64_t id, int true_label, std::span<const double> probabilities,
    const DemographicProfile& demographics) {
  PredictionRecord prediction;
  prediction.id = id;
  prediction.true_label = true_label;
  prediction.predicted_label = ArgMax(probabilities);
  prediction.confidence =
      probabilities[static_cast<std::size_t>(prediction.predicted_label)];
  prediction.demographics = demographics;
  return prediction;
}

PredictionRecord Predict(const Mlp& model, const ClientRecord& record,
                         const StandardizationParams& params) {
  if (model.input_dim() != kNumFeatures) {
    throw DimensionError("model expects " + std::to_string(model.input_dim()) +
                         " features, records carry " +
                         std::to_string(kNumFeatures));
  }
  const FeatureVector x = params.Apply(record.features);
  const std::vector<double> probabilities = model.Forward(x);
  return PredictionFromProbabilities(record.id, record.label, probabilities,
                                     DeriveDemographics(record));
}

std::vector<PredictionRecord> PredictBatch(const Mlp& model,
                                           std::span<const ClientRecord> records,
                                           const StandardizationParams& params,
                                           unsigned num_threads) {
  std::vector<PredictionRecord> out(records.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = Predict(model, records[i], params);
    }
  };
  if (num_threads <= 1 || records.size() < 2) {
    work(0, records.size());
    return out;
  }
  const std::size_t chunk = (records.size() + num_threads - 1) / num_threads;
  std::vector<std::jthread> workers;
  std::vector<std::exception_ptr> errors(num_threads);
  for (unsigned t = 0; t < num_threads; ++t) {
    const std::size_t begin = std::min(records.size(), t * chunk);
    const std::size_t end = std::min(records.size(), begin + chunk);
    workers.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  workers.clear();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return out;
}

std::string SerializeModel(const ModelBundle& bundle) {
  bundle.model.CheckFinite();
  Json root;
  root["format"] = "trustquant-mlp";
  root["version"] = kModelFormatVersion;
  root["layer_dims"] = bundle.model.layer_dims();
  root["activation"] = {{"hidden", "relu"}, {"output", "softmax"}};
  Json weights = Json::array();
  Json biases = Json::array();
  for (const DenseLayer& layer : bundle.model.layers()) {
    weights.push_back(LayerWeightsToJson(layer));
    biases.push_back(layer.biases);
  }
  root["weights"] = std::move(weights);
  root["biases"] = std::move(biases);
  root["standardization"] = {
      {"mean", bundle.params.mean},
      {"sd", bundle.params.sd},
      {"sd_kind", "population"},
  };
  const TrainConfig& c = bundle.config;
  root["train_config"] = {
      {"epochs", c.epochs},
      {"lr0", c.lr0},
      {"decay", c.decay},
      {"batch_size", c.batch_size},
      {"seed", c.seed},
      {"adam_beta1", c.adam.beta1},
      {"adam_beta2", c.adam.beta2},
      {"adam_epsilon", c.adam.epsilon},
  };
  root["seed"] = c.seed;
  return root.dump(1) + "\n";
}

ModelBundle ParseModel(
    const std::string& text,
    const std::optional<std::vector<std::size_t>>& expected_dims) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") +
                          e.what());
  }
  try {
    if (!root.is_object() || root.value("format", "") != "trustquant-mlp") {
      throw ValidationError("not a trustquant model file");
    }
    if (root.at("version").get<int>() != kModelFormatVersion) {
      throw ValidationError("unsupported model file version");
    }
    const auto dims = root.at("layer_dims").get<std::vector<std::size_t>>();
    if (expected_dims && dims.size() != expected_dims->size()) {
      throw DimensionError("layer_dims has " + std::to_string(dims.size()) +
                           " entries, expected " +
                           std::to_string(expected_dims->size()));
    }
    if (expected_dims) {
      for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] != (*expected_dims)[i]) {
          throw DimensionError("layer " + std::to_string(i) + " has width " +
                               std::to_string(dims[i]) + ", expected " +
                               std::to_string((*expected_dims)[i]));
        }
      }
    }
    ModelBundle bundle{Mlp(dims), {}, {}};
    auto& layers = bundle.model.layers();
    const Json& weights = root.at("weights");
    const Json& biases = root.at("biases");
    if (!weights.is_array() || weights.size() != layers.size() ||
        !biases.is_array() || biases.size() != layers.size()) {
      throw DimensionError("expected " + std::to_string(layers.size()) +
                           " weight and bias arrays");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
      DenseLayer& layer = layers[l];
      const std::string name = "layer " + std::to_string(l + 1);
      const Json& rows = weights[l];
      if (!rows.is_array() || rows.size() != layer.out) {
        throw DimensionError(name + " weights: expected " +
                             std::to_string(layer.out) + " rows");
      }
      for (std::size_t r = 0; r < layer.out; ++r) {
        const auto row = ReadVector(rows[r], layer.in,
                                    name + " weight row " + std::to_string(r));
        std::copy(row.begin(), row.end(),
                  layer.weights.begin() + static_cast<std::ptrdiff_t>(r * layer.in));
      }
      layer.biases = ReadVector(biases[l], layer.out, name + " biases");
    }
    bundle.model.CheckFinite();

    const Json& standardization = root.at("standardization");
    const auto mean = ReadVector(standardization.at("mean"), kNumFeatures,
                                 "standardization mean");
    const auto sd = ReadVector(standardization.at("sd"), kNumFeatures,
                               "standardization sd");
    std::copy(mean.begin(), mean.end(), bundle.params.mean.begin());
    std::copy(sd.begin(), sd.end(), bundle.params.sd.begin());

    const Json& c = root.at("train_config");
    bundle.config.epochs = c.at("epochs").get<int>();
    bundle.config.lr0 = c.at("lr0").get<double>();
    bundle.config.decay = c.at("decay").get<double>();
    bundle.config.batch_size = c.at("batch_size").get<std::size_t>();
    bundle.config.seed = c.at("seed").get<std::uint64_t>();
    bundle.config.adam.beta1 = c.at("adam_beta1").get<double>();
    bundle.config.adam.beta2 = c.at("adam_beta2").get<double>();
    bundle.config.adam.epsilon = c.at("adam_epsilon").get<double>();
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  } catch (const NumericError& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const ModelBundle& bundle, const std::filesystem::path& path) {
  const std::string text = SerializeModel(bundle);
  std::ofstream output(path, std::ios::binary);
  if (!output) throw IoError("cannot write " + path.string());
  output << text;
  if (!output) throw IoError("write failed for " + path.string());
}

ModelBundle LoadModel(
    const std::filesystem::path& path,
    const std::optional<std::vector<std::size_t>>& expected_dims) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return ParseModel(buffer.str(), expected_dims);
}

}  // namespace trustquant
