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

// Trust metrics over a set of predictions: question-answer trust, the trust
// matrix, trust spectra over answer scenarios and demographic groups, and
// NetTrustScore with its correct/incorrect decomposition.
//
// All population integrals are realized as empirical means. In particular
// the coefficient of an answer scenario z is the mean question-answer trust
// of the records whose oracle answer is z, so that weighting the spectrum by
// the scenario frequencies gives back the grand mean.

#ifndef TRUSTQUANT_TRUST_H_
#define TRUSTQUANT_TRUST_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustquant/prediction.h"

namespace trustquant {

// Reward (alpha) and penalty (beta) relaxation exponents.
struct TrustConfig {
  double alpha = 1.0;
  double beta = 1.0;

  void Validate() const;
  bool operator==(const TrustConfig&) const = default;
};

// confidence^alpha when correct, (1 - confidence)^beta otherwise. Throws
// DomainError when confidence is outside [0, 1].
double QuestionAnswerTrust(bool correct, double confidence,
                           const TrustConfig& config);

struct ScoredPrediction {
  PredictionRecord prediction;
  double qa_trust = 0.0;

  bool correct() const { return prediction.correct(); }
};

std::vector<ScoredPrediction> ScoreAll(
    std::span<const PredictionRecord> predictions, const TrustConfig& config);

inline constexpr std::size_t kNumScenarios = 2;

// "no_default" for 0, "payment_default" for 1, the decimal label otherwise.
std::string ScenarioName(int label);

// Mean question-answer trust per (oracle z, predicted y) cell. Cells without
// records hold std::nullopt.
struct TrustMatrix {
  std::size_t num_classes = kNumScenarios;
  std::vector<std::optional<double>> cells;  // row-major (z, y)
  std::vector<std::size_t> counts;

  const std::optional<double>& cell(int oracle, int predicted) const {
    return cells[Index(oracle, predicted)];
  }
  std::size_t count(int oracle, int predicted) const {
    return counts[Index(oracle, predicted)];
  }
  std::size_t Index(int oracle, int predicted) const {
    return static_cast<std::size_t>(oracle) * num_classes +
           static_cast<std::size_t>(predicted);
  }
  bool operator==(const TrustMatrix&) const = default;
};

TrustMatrix ComputeTrustMatrix(std::span<const ScoredPrediction> scored,
                               std::size_t num_classes = kNumScenarios);

struct SpectrumEntry {
  std::string group;
  double coefficient = 0.0;
  std::size_t count = 0;
  // Fraction of the records in the spectrum that fall in this group.
  double weight = 0.0;

  bool operator==(const SpectrumEntry&) const = default;
};

// Entries for the non-empty groups in canonical order; empty groups are
// listed by name in absent.
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  std::vector<std::string> absent;

  const SpectrumEntry* Find(std::string_view group) const;
  bool operator==(const Spectrum&) const = default;
};

// One entry per oracle answer.
Spectrum TrustSpectrum(std::span<const ScoredPrediction> scored);

enum class DemographicAxis { kGender, kEducation, kAge };

inline constexpr DemographicAxis kAllAxes[] = {
    DemographicAxis::kGender, DemographicAxis::kEducation,
    DemographicAxis::kAge};

std::string_view ToString(DemographicAxis axis);
// Throws ValidationError for unknown axis names.
DemographicAxis ParseDemographicAxis(std::string_view name);

// Group names of an axis in canonical order.
std::vector<std::string> AxisGroups(DemographicAxis axis);
std::string GroupOf(const DemographicProfile& profile, DemographicAxis axis);

Spectrum DemographicTrustSpectrum(std::span<const ScoredPrediction> scored,
                                  DemographicAxis axis);

// Sum over scenarios of P(z) * T(z). Throws ValidationError when empty.
double NetTrustScore(std::span<const ScoredPrediction> scored);
// Weighted sum of the entries of an already computed spectrum.
double WeightedSpectrumScore(const Spectrum& spectrum);

struct ConditionalTrust {
  std::optional<double> correct;
  std::optional<double> incorrect;
  double accuracy = 0.0;
  std::size_t n_correct = 0;
  std::size_t n_incorrect = 0;

  bool operator==(const ConditionalTrust&) const = default;
};

ConditionalTrust ConditionalNetTrustScores(
    std::span<const ScoredPrediction> scored);

}  // namespace trustquant

#endif  // TRUSTQUANT_TRUST_H_
