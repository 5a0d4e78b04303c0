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

// Predictions CSV: the contract between the model and the audit path.
//
//   id,true_label,predicted_label,confidence,gender,education,age_group
//
// Confidence is written in shortest round-trip form, so a write/read cycle
// reproduces every value exactly.

#ifndef TRUSTQUANT_PREDICTIONS_IO_H_
#define TRUSTQUANT_PREDICTIONS_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "trustquant/prediction.h"

namespace trustquant {

inline constexpr std::string_view kPredictionsHeader =
    "id,true_label,predicted_label,confidence,gender,education,age_group";

enum class ConfidenceRange {
  // [0.5, 1]: confidence of a two-class softmax argmax.
  kArgmax,
  // [0, 1]: files written by other tools.
  kAny,
};

void WritePredictions(std::ostream& output,
                      std::span<const PredictionRecord> predictions);
void SavePredictions(const std::filesystem::path& path,
                     std::span<const PredictionRecord> predictions);

// Throws SchemaError on a header mismatch and ParseError (with the line
// number) on malformed rows.
std::vector<PredictionRecord> ReadPredictions(
    std::istream& input, ConfidenceRange range = ConfidenceRange::kAny);
std::vector<PredictionRecord> LoadPredictions(
    const std::filesystem::path& path,
    ConfidenceRange range = ConfidenceRange::kAny);

}  // namespace trustquant

#endif  // TRUSTQUANT_PREDICTIONS_IO_H_
