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

// Ingestion and preparation of the Taiwan credit-card default dataset:
// CSV loading, demographic binning, class balancing, stratified splitting
// and z-score standardization.

#ifndef TRUSTQUANT_DATASET_H_
#define TRUSTQUANT_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace trustquant {

inline constexpr std::size_t kNumFeatures = 23;

// Exact header of the input CSV: ID, the 23 explanatory variables, label.
inline constexpr std::array<std::string_view, kNumFeatures + 2> kCsvColumns = {
    "ID",        "LIMIT_BAL", "SEX",       "EDUCATION", "MARRIAGE",
    "AGE",       "PAY_0",     "PAY_2",     "PAY_3",     "PAY_4",
    "PAY_5",     "PAY_6",     "BILL_AMT1", "BILL_AMT2", "BILL_AMT3",
    "BILL_AMT4", "BILL_AMT5", "BILL_AMT6", "PAY_AMT1",  "PAY_AMT2",
    "PAY_AMT3",  "PAY_AMT4",  "PAY_AMT5",  "PAY_AMT6",
    "default.payment.next.month"};

// Positions of the demographic columns inside ClientRecord::features.
enum FeatureIndex : std::size_t {
  kLimitBal = 0,
  kSex = 1,
  kEducation = 2,
  kMarriage = 3,
  kAge = 4,
};

inline constexpr double kMinimumAge = 18.0;

using FeatureVector = std::array<double, kNumFeatures>;

struct ClientRecord {
  std::int64_t id = 0;
  FeatureVector features{};
  // 1 = payment default, 0 = no default.
  int label = 0;

  bool operator==(const ClientRecord&) const = default;
};

enum class Gender { kMale, kFemale };
enum class Education { kGraduateSchool, kUniversity, kHighSchool, kOthers };
enum class AgeGroup { k20To29, k30To39, k40To49, k50Plus };

inline constexpr std::array<Gender, 2> kAllGenders = {Gender::kMale,
                                                      Gender::kFemale};
inline constexpr std::array<Education, 4> kAllEducations = {
    Education::kGraduateSchool, Education::kUniversity, Education::kHighSchool,
    Education::kOthers};
inline constexpr std::array<AgeGroup, 4> kAllAgeGroups = {
    AgeGroup::k20To29, AgeGroup::k30To39, AgeGroup::k40To49,
    AgeGroup::k50Plus};

std::string_view ToString(Gender gender);
std::string_view ToString(Education education);
std::string_view ToString(AgeGroup age_group);
// Inverse of ToString. Throws ValidationError on unknown names.
Gender ParseGender(std::string_view name);
Education ParseEducation(std::string_view name);
AgeGroup ParseAgeGroup(std::string_view name);

struct DemographicProfile {
  Gender gender = Gender::kMale;
  Education education = Education::kOthers;
  AgeGroup age_group = AgeGroup::k20To29;

  bool operator==(const DemographicProfile&) const = default;
};

// SEX 1/2 -> male/female, EDUCATION 1/2/3 -> graduate school / university /
// high school with every other code in "others", AGE binned by decade with
// everything under 30 in 20-29 and 50 and over in 50+.
DemographicProfile DeriveDemographics(const ClientRecord& record);

// Checks label, age bound, SEX code and finiteness. Throws ValidationError.
void ValidateRecord(const ClientRecord& record);

std::vector<ClientRecord> ReadRecords(std::istream& input);
std::vector<ClientRecord> LoadRecords(const std::filesystem::path& path);
void WriteRecords(std::ostream& output, std::span<const ClientRecord> records);
void SaveRecords(const std::filesystem::path& path,
                 std::span<const ClientRecord> records);

// Random undersampling of the majority class without replacement, followed
// by a seeded shuffle of the result. Throws if a class is absent.
std::vector<ClientRecord> Balance(std::span<const ClientRecord> records,
                                  std::uint64_t seed);

enum class BalanceMode { kUndersample, kNone };
std::string_view ToString(BalanceMode mode);
BalanceMode ParseBalanceMode(std::string_view name);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  BalanceMode balance_mode = BalanceMode::kUndersample;

  void Validate() const;
};

struct SplitResult {
  std::vector<ClientRecord> train;
  std::vector<ClientRecord> test;
};

// Stratified split: each label stratum contributes
// round(train_fraction * stratum size) records to train. Both sides are
// shuffled with spec.seed.
SplitResult Split(std::span<const ClientRecord> records, const SplitSpec& spec);

// Per-feature mean and population standard deviation of the training set.
struct StandardizationParams {
  FeatureVector mean{};
  FeatureVector sd{};

  // (x - mean) / sd, or x - mean where sd == 0.
  FeatureVector Apply(const FeatureVector& features) const;
  bool operator==(const StandardizationParams&) const = default;
};

StandardizationParams FitStandardization(std::span<const ClientRecord> train);

struct StandardizedData {
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
  StandardizationParams params;
};

StandardizedData Standardize(std::span<const ClientRecord> train,
                             std::span<const ClientRecord> test);

}  // namespace trustquant

#endif  // TRUSTQUANT_DATASET_H_
