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

#include "trustquant/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "csv_util.h"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

constexpr std::size_t kLabelColumn = kNumFeatures + 1;

void CheckHeader(std::string_view header) {
  const auto cells = internal::SplitCsvLine(header);
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i >= cells.size()) {
      throw SchemaError("missing column \"" + std::string(kCsvColumns[i]) +
                        "\"");
    }
    std::string_view cell = internal::Trim(cells[i]);
    // Tolerate a UTF-8 byte order mark on the first column.
    if (i == 0 && cell.starts_with("\xEF\xBB\xBF")) cell.remove_prefix(3);
    if (cell != kCsvColumns[i]) {
      throw SchemaError("missing column \"" + std::string(kCsvColumns[i]) +
                        "\" at position " + std::to_string(i + 1) +
                        " (found \"" + std::string(cell) + "\")");
    }
  }
  if (cells.size() > kCsvColumns.size()) {
    throw SchemaError("unexpected extra column \"" +
                      std::string(cells[kCsvColumns.size()]) + "\"");
  }
}

}  // namespace

std::string_view ToString(Gender gender) {
  switch (gender) {
    case Gender::kMale:
      return "male";
    case Gender::kFemale:
      return "female";
  }
  return "unknown";
}

std::string_view ToString(Education education) {
  switch (education) {
    case Education::kGraduateSchool:
      return "graduate_school";
    case Education::kUniversity:
      return "university";
    case Education::kHighSchool:
      return "high_school";
    case Education::kOthers:
      return "others";
  }
  return "unknown";
}

std::string_view ToString(AgeGroup age_group) {
  switch (age_group) {
    case AgeGroup::k20To29:
      return "20-29";
    case AgeGroup::k30To39:
      return "30-39";
    case AgeGroup::k40To49:
      return "40-49";
    case AgeGroup::k50Plus:
      return "50+";
  }
  return "unknown";
}

Gender ParseGender(std::string_view name) {
  for (Gender g : kAllGenders) {
    if (ToString(g) == name) return g;
  }
  throw ValidationError("unknown gender \"" + std::string(name) + "\"");
}

Education ParseEducation(std::string_view name) {
  for (Education e : kAllEducations) {
    if (ToString(e) == name) return e;
  }
  throw ValidationError("unknown education \"" + std::string(name) + "\"");
}

AgeGroup ParseAgeGroup(std::string_view name) {
  for (AgeGroup a : kAllAgeGroups) {
    if (ToString(a) == name) return a;
  }
  throw ValidationError("unknown age group \"" + std::string(name) + "\"");
}

DemographicProfile DeriveDemographics(const ClientRecord& record) {
  DemographicProfile profile;
  const double sex = record.features[kSex];
  if (sex == 1.0) {
    profile.gender = Gender::kMale;
  } else if (sex == 2.0) {
    profile.gender = Gender::kFemale;
  } else {
    throw ValidationError("record " + std::to_string(record.id) +
                          ": SEX code " + FormatDouble(sex) +
                          " outside {1, 2}");
  }

  const double education = record.features[kEducation];
  if (education == 1.0) {
    profile.education = Education::kGraduateSchool;
  } else if (education == 2.0) {
    profile.education = Education::kUniversity;
  } else if (education == 3.0) {
    profile.education = Education::kHighSchool;
  } else {
    profile.education = Education::kOthers;
  }

  const double age = record.features[kAge];
  if (age < 30.0) {
    profile.age_group = AgeGroup::k20To29;
  } else if (age < 40.0) {
    profile.age_group = AgeGroup::k30To39;
  } else if (age < 50.0) {
    profile.age_group = AgeGroup::k40To49;
  } else {
    profile.age_group = AgeGroup::k50Plus;
  }
  return profile;
}

void ValidateRecord(const ClientRecord& record) {
  const std::string where = "record " + std::to_string(record.id) + ": ";
  if (record.label != 0 && record.label != 1) {
    throw ValidationError(where + "label " + std::to_string(record.label) +
                          " outside {0, 1}");
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!std::isfinite(record.features[i])) {
      throw ValidationError(where + "non-finite " +
                            std::string(kCsvColumns[i + 1]));
    }
  }
  if (record.features[kAge] < kMinimumAge) {
    throw ValidationError(where + "AGE " + FormatDouble(record.features[kAge]) +
                          " below " + FormatDouble(kMinimumAge));
  }
  const double sex = record.features[kSex];
  if (sex != 1.0 && sex != 2.0) {
    throw ValidationError(where + "SEX code " + FormatDouble(sex) +
                          " outside {1, 2}");
  }
}

std::vector<ClientRecord> ReadRecords(std::istream& input) {
  std::string line;
  if (!internal::ReadLine(input, line)) {
    throw SchemaError("empty file: missing header row");
  }
  CheckHeader(line);

  std::vector<ClientRecord> records;
  std::size_t line_number = 1;
  while (internal::ReadLine(input, line)) {
    ++line_number;
    if (internal::Trim(line).empty()) continue;
    const auto cells = internal::SplitCsvLine(line);
    if (cells.size() != kCsvColumns.size()) {
      throw ParseError(line_number,
                       "expected " + std::to_string(kCsvColumns.size()) +
                           " cells, found " + std::to_string(cells.size()));
    }
    ClientRecord record;
    // Some exports write integral columns as "1.0", so the ID goes through
    // the floating-point parser too.
    const auto id = internal::ParseDouble(cells[0]);
    if (!id || *id != std::floor(*id)) {
      throw ParseError(line_number, "non-integer ID \"" +
                                        std::string(cells[0]) + "\"");
    }
    record.id = static_cast<std::int64_t>(*id);
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      const auto value = internal::ParseDouble(cells[i + 1]);
      if (!value) {
        throw ParseError(line_number,
                         "non-numeric " + std::string(kCsvColumns[i + 1]) +
                             " \"" + std::string(cells[i + 1]) + "\"");
      }
      record.features[i] = *value;
    }
    const auto label = internal::ParseDouble(cells[kLabelColumn]);
    if (!label) {
      throw ParseError(line_number, "non-numeric label \"" +
                                        std::string(cells[kLabelColumn]) +
                                        "\"");
    }
    if (*label != 0.0 && *label != 1.0) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": label " + FormatDouble(*label) +
                            " outside {0, 1}");
    }
    record.label = static_cast<int>(*label);
    try {
      ValidateRecord(record);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    records.push_back(record);
  }
  return records;
}

std::vector<ClientRecord> LoadRecords(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw IoError("cannot open " + path.string());
  return ReadRecords(input);
}

void WriteRecords(std::ostream& output,
                  std::span<const ClientRecord> records) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i > 0) output << ',';
    output << kCsvColumns[i];
  }
  output << '\n';
  for (const ClientRecord& record : records) {
    output << record.id;
    for (double value : record.features) output << ',' << FormatDouble(value);
    output << ',' << record.label << '\n';
  }
}

void SaveRecords(const std::filesystem::path& path,
                 std::span<const ClientRecord> records) {
  std::ofstream output(path, std::ios::binary);
  if (!output) throw IoError("cannot write " + path.string());
  WriteRecords(output, records);
  if (!output) throw IoError("write failed for " + path.string());
}

std::vector<ClientRecord> Balance(std::span<const ClientRecord> records,
                                  std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int label = records[i].label;
    if (label != 0 && label != 1) {
      throw ValidationError("Balance: label outside {0, 1}");
    }
    by_class[label].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw ValidationError("cannot balance: class " +
                          std::to_string(by_class[0].empty() ? 0 : 1) +
                          " is absent");
  }
  const std::size_t per_class =
      std::min(by_class[0].size(), by_class[1].size());

  Rng rng(seed);
  std::vector<ClientRecord> balanced;
  balanced.reserve(2 * per_class);
  for (auto& indices : by_class) {
    // Partial Fisher-Yates picks per_class indices without replacement.
    for (std::size_t i = 0; i < per_class && indices.size() > per_class; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(
                                    rng.Below(indices.size() - i));
      std::swap(indices[i], indices[j]);
    }
    for (std::size_t i = 0; i < per_class; ++i) {
      balanced.push_back(records[indices[i]]);
    }
  }
  rng.Shuffle(balanced);
  return balanced;
}

std::string_view ToString(BalanceMode mode) {
  return mode == BalanceMode::kUndersample ? "undersample" : "none";
}

BalanceMode ParseBalanceMode(std::string_view name) {
  if (name == "undersample") return BalanceMode::kUndersample;
  if (name == "none") return BalanceMode::kNone;
  throw ValidationError("unknown balance mode \"" + std::string(name) + "\"");
}

void SplitSpec::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train_fraction must lie strictly inside (0, 1), got " +
                          FormatDouble(train_fraction));
  }
}

SplitResult Split(std::span<const ClientRecord> records, const SplitSpec& spec) {
  spec.Validate();
  std::vector<ClientRecord> strata[2];
  for (const ClientRecord& record : records) {
    if (record.label != 0 && record.label != 1) {
      throw ValidationError("Split: label outside {0, 1}");
    }
    strata[record.label].push_back(record);
  }

  Rng rng(spec.seed);
  SplitResult result;
  for (int label = 0; label < 2; ++label) {
    auto& stratum = strata[label];
    if (stratum.size() < 2) {
      throw ValidationError("Split: class " + std::to_string(label) +
                            " has fewer than 2 records");
    }
    const auto n_train = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(stratum.size())));
    if (n_train == 0 || n_train == stratum.size()) {
      throw ValidationError(
          "Split: train_fraction " + FormatDouble(spec.train_fraction) +
          " leaves an empty stratum for class " + std::to_string(label));
    }
    rng.Shuffle(stratum);
    result.train.insert(result.train.end(), stratum.begin(),
                        stratum.begin() + static_cast<std::ptrdiff_t>(n_train));
    result.test.insert(result.test.end(),
                       stratum.begin() + static_cast<std::ptrdiff_t>(n_train),
                       stratum.end());
  }
  rng.Shuffle(result.train);
  rng.Shuffle(result.test);
  return result;
}

FeatureVector StandardizationParams::Apply(const FeatureVector& features) const {
  FeatureVector out;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    const double centered = features[j] - mean[j];
    out[j] = sd[j] > 0.0 ? centered / sd[j] : centered;
  }
  return out;
}

StandardizationParams FitStandardization(std::span<const ClientRecord> train) {
  if (train.empty()) {
    throw ValidationError("standardization needs a non-empty training set");
  }
  StandardizationParams params;
  const double n = static_cast<double>(train.size());
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    CompensatedSum sum;
    for (const ClientRecord& record : train) sum.Add(record.features[j]);
    const double mean = sum.Value() / n;
    CompensatedSum squares;
    for (const ClientRecord& record : train) {
      const double d = record.features[j] - mean;
      squares.Add(d * d);
    }
    params.mean[j] = mean;
    params.sd[j] = std::sqrt(squares.Value() / n);
  }
  return params;
}

StandardizedData Standardize(std::span<const ClientRecord> train,
                             std::span<const ClientRecord> test) {
  StandardizedData data;
  data.params = FitStandardization(train);
  data.train.reserve(train.size());
  for (const ClientRecord& r : train) data.train.push_back(data.params.Apply(r.features));
  data.test.reserve(test.size());
  for (const ClientRecord& r : test) data.test.push_back(data.params.Apply(r.features));
  return data;
}

}  // namespace trustquant
