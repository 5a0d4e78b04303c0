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

// Naive reference implementations used as test oracles. They are written
// from the metric definitions with plain loops and share no code with the
// library implementations they check.

#ifndef TRUSTQUANT_TESTS_ORACLES_H_
#define TRUSTQUANT_TESTS_ORACLES_H_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustquant/prediction.h"

namespace trustquant::oracle {

inline double QaTrust(const PredictionRecord& p, double alpha, double beta) {
  return p.true_label == p.predicted_label ? std::pow(p.confidence, alpha)
                                           : std::pow(1.0 - p.confidence, beta);
}

// Mean q over records selected by keep, or nullopt when none match.
template <typename Keep>
std::optional<double> MeanWhere(std::span<const PredictionRecord> records,
                                double alpha, double beta, Keep keep) {
  double sum = 0.0;
  int count = 0;
  for (const PredictionRecord& p : records) {
    if (!keep(p)) continue;
    sum += QaTrust(p, alpha, beta);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

inline std::optional<double> MatrixCell(std::span<const PredictionRecord> r,
                                        int z, int y, double alpha = 1.0,
                                        double beta = 1.0) {
  return MeanWhere(r, alpha, beta, [&](const PredictionRecord& p) {
    return p.true_label == z && p.predicted_label == y;
  });
}

inline std::optional<double> ScenarioCoefficient(
    std::span<const PredictionRecord> r, int z, double alpha = 1.0,
    double beta = 1.0) {
  return MeanWhere(r, alpha, beta,
                   [&](const PredictionRecord& p) { return p.true_label == z; });
}

template <typename GroupFn>
std::optional<double> GroupCoefficient(std::span<const PredictionRecord> r,
                                       const std::string& group, GroupFn fn,
                                       double alpha = 1.0, double beta = 1.0) {
  return MeanWhere(r, alpha, beta,
                   [&](const PredictionRecord& p) { return fn(p) == group; });
}

inline double GrandMean(std::span<const PredictionRecord> r, double alpha = 1.0,
                        double beta = 1.0) {
  return *MeanWhere(r, alpha, beta, [](const PredictionRecord&) { return true; });
}

inline double GaussianPdf(double x, double sd) {
  const double pi = 3.14159265358979323846;
  return std::exp(-(x * x) / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * pi));
}

// Reflected kernel sum written out term by term.
inline double ReflectedKde(std::span<const double> samples, double weight,
                           double h, double g) {
  double total = 0.0;
  for (double q : samples) {
    const double direct = GaussianPdf(g - q, h);
    const double mirrored_at_zero = GaussianPdf(g - (-q), h);
    const double mirrored_at_one = GaussianPdf(g - (2.0 - q), h);
    total += direct + mirrored_at_zero + mirrored_at_one;
  }
  return weight * total / static_cast<double>(samples.size());
}

}  // namespace trustquant::oracle

#endif  // TRUSTQUANT_TESTS_ORACLES_H_
