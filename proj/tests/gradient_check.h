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

#ifndef TRUSTQUANT_TESTS_GRADIENT_CHECK_H_
#define TRUSTQUANT_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "trustquant/model.h"
#include "trustquant/numeric.h"

namespace trustquant::testing {

inline std::vector<double> RandomVector(std::size_t n, Rng& rng,
                                        double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-scale, scale);
  return v;
}

// Mlp with random weights and biases, so that no ReLU sits exactly at zero.
inline Mlp RandomMlp(std::vector<std::size_t> dims, Rng& rng) {
  Mlp model(std::move(dims));
  for (DenseLayer& layer : model.layers()) {
    for (double& w : layer.weights) w = rng.Uniform(-1.0, 1.0);
    for (double& b : layer.biases) b = rng.Uniform(-0.5, 0.5);
  }
  return model;
}

// Central differences of the forward-only loss.
inline double MaxRelativeGradientError(Mlp model, std::span<const Example> batch) {
  const LossAndGrad analytic = LossAndGradients(model, batch);
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  auto check = [&](double& param, double analytic_value) {
    const double saved = param;
    param = saved + kStep;
    const double up = MeanCrossEntropy(model, batch);
    param = saved - kStep;
    const double down = MeanCrossEntropy(model, batch);
    param = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double scale =
        std::max({std::abs(numeric), std::abs(analytic_value), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic_value) / scale);
  };
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    DenseLayer& layer = model.layers()[l];
    const DenseLayer& grad = analytic.gradients.layers[l];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      check(layer.weights[i], grad.weights[i]);
    }
    for (std::size_t i = 0; i < layer.biases.size(); ++i) {
      check(layer.biases[i], grad.biases[i]);
    }
  }
  return worst;
}

}  // namespace trustquant::testing

#endif  // TRUSTQUANT_TESTS_GRADIENT_CHECK_H_
