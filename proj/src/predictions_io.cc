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

#include "trustquant/predictions_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "csv_util.h"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

constexpr std::size_t kNumColumns = 7;

int ParseBinary(std::string_view cell, std::size_t line, const char* what) {
  const auto value = internal::ParseInt(cell);
  if (!value) {
    throw ParseError(line, std::string("non-integer ") + what + " \"" +
                               std::string(cell) + "\"");
  }
  if (*value != 0 && *value != 1) {
    throw ParseError(line, std::string(what) + " " + std::to_string(*value) +
                               " outside {0, 1}");
  }
  return static_cast<int>(*value);
}

}  // namespace

void WritePredictions(std::ostream& output,
                      std::span<const PredictionRecord> predictions) {
  output << kPredictionsHeader << '\n';
  for (const PredictionRecord& p : predictions) {
    output << p.id << ',' << p.true_label << ',' << p.predicted_label << ','
           << FormatDouble(p.confidence) << ','
           << ToString(p.demographics.gender) << ','
           << ToString(p.demographics.education) << ','
           << ToString(p.demographics.age_group) << '\n';
  }
}

void SavePredictions(const std::filesystem::path& path,
                     std::span<const PredictionRecord> predictions) {
  std::ofstream output(path, std::ios::binary);
  if (!output) throw IoError("cannot write " + path.string());
  WritePredictions(output, predictions);
  if (!output) throw IoError("write failed for " + path.string());
}

std::vector<PredictionRecord> ReadPredictions(std::istream& input,
                                              ConfidenceRange range) {
  std::string line;
  if (!internal::ReadLine(input, line)) {
    throw SchemaError("empty predictions file: missing header row");
  }
  {
    const auto expected = internal::SplitCsvLine(kPredictionsHeader);
    const auto found = internal::SplitCsvLine(line);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i >= found.size() || internal::Trim(found[i]) != expected[i]) {
        throw SchemaError("predictions header: missing column \"" +
                          std::string(expected[i]) + "\"");
      }
    }
    if (found.size() != expected.size()) {
      throw SchemaError("predictions header: unexpected extra columns");
    }
  }

  const double low = range == ConfidenceRange::kArgmax ? 0.5 : 0.0;
  std::vector<PredictionRecord> predictions;
  std::size_t line_number = 1;
  while (internal::ReadLine(input, line)) {
    ++line_number;
    if (internal::Trim(line).empty()) continue;
    const auto cells = internal::SplitCsvLine(line);
    if (cells.size() != kNumColumns) {
      throw ParseError(line_number, "expected 7 cells, found " +
                                        std::to_string(cells.size()));
    }
    PredictionRecord p;
    const auto id = internal::ParseInt(cells[0]);
    if (!id) {
      throw ParseError(line_number,
                       "non-integer id \"" + std::string(cells[0]) + "\"");
    }
    p.id = *id;
    p.true_label = ParseBinary(cells[1], line_number, "true_label");
    p.predicted_label = ParseBinary(cells[2], line_number, "predicted_label");
    const auto confidence = internal::ParseDouble(cells[3]);
    if (!confidence) {
      throw ParseError(line_number, "non-numeric confidence \"" +
                                        std::string(cells[3]) + "\"");
    }
    if (!(*confidence >= low && *confidence <= 1.0)) {
      throw ParseError(line_number, "confidence " + FormatDouble(*confidence) +
                                        " outside [" + FormatDouble(low) +
                                        ", 1]");
    }
    p.confidence = *confidence;
    try {
      p.demographics.gender = ParseGender(internal::Trim(cells[4]));
      p.demographics.education = ParseEducation(internal::Trim(cells[5]));
      p.demographics.age_group = ParseAgeGroup(internal::Trim(cells[6]));
    } catch (const ValidationError& e) {
      throw ParseError(line_number, e.what());
    }
    predictions.push_back(p);
  }
  return predictions;
}

std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path& path,
                                              ConfidenceRange range) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw IoError("cannot open " + path.string());
  return ReadPredictions(input, range);
}

}  // namespace trustquant
