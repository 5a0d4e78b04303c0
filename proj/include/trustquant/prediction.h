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

#ifndef TRUSTQUANT_PREDICTION_H_
#define TRUSTQUANT_PREDICTION_H_

#include <cstdint>

#include "trustquant/dataset.h"

namespace trustquant {

// One audited prediction. confidence is the softmax value of the predicted
// class, C(y|x).
struct PredictionRecord {
  std::int64_t id = 0;
  int true_label = 0;
  int predicted_label = 0;
  double confidence = 0.0;
  DemographicProfile demographics;

  bool correct() const { return true_label == predicted_label; }
  bool operator==(const PredictionRecord&) const = default;
};

}  // namespace trustquant

#endif  // TRUSTQUANT_PREDICTION_H_
