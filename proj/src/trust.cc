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

#include "trustquant/trust.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

// Groups are accumulated in canonical order; the order of the input records
// only affects the compensated sums at the ulp level.
Spectrum BuildSpectrum(std::span<const ScoredPrediction> scored,
                       const std::vector<std::string>& groups,
                       const auto& group_of) {
  std::vector<CompensatedSum> sums(groups.size());
  std::vector<std::size_t> counts(groups.size(), 0);
  for (const ScoredPrediction& s : scored) {
    const std::size_t g = group_of(s);
    sums[g].Add(s.qa_trust);
    ++counts[g];
  }
  Spectrum spectrum;
  const double n = static_cast<double>(scored.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (counts[g] == 0) {
      spectrum.absent.push_back(groups[g]);
      continue;
    }
    SpectrumEntry entry;
    entry.group = groups[g];
    entry.count = counts[g];
    entry.coefficient = sums[g].Value() / static_cast<double>(counts[g]);
    entry.weight = static_cast<double>(counts[g]) / n;
    spectrum.entries.push_back(std::move(entry));
  }
  return spectrum;
}

template <typename Enum, std::size_t N>
std::size_t IndexIn(const std::array<Enum, N>& all, Enum value) {
  return static_cast<std::size_t>(
      std::find(all.begin(), all.end(), value) - all.begin());
}

void CheckLabel(int label, const char* what) {
  if (label < 0 || static_cast<std::size_t>(label) >= kNumScenarios) {
    throw ValidationError(std::string(what) + " " + std::to_string(label) +
                          " outside {0, 1}");
  }
}

}  // namespace

void TrustConfig::Validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("alpha must be >= 0, got " + FormatDouble(alpha));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError("beta must be >= 0, got " + FormatDouble(beta));
  }
}

double QuestionAnswerTrust(bool correct, double confidence,
                           const TrustConfig& config) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw DomainError("confidence " + FormatDouble(confidence) +
                      " outside [0, 1]");
  }
  const double q = correct ? std::pow(confidence, config.alpha)
                           : std::pow(1.0 - confidence, config.beta);
  return std::clamp(q, 0.0, 1.0);
}

std::vector<ScoredPrediction> ScoreAll(
    std::span<const PredictionRecord> predictions, const TrustConfig& config) {
  config.Validate();
  std::vector<ScoredPrediction> scored;
  scored.reserve(predictions.size());
  for (const PredictionRecord& p : predictions) {
    try {
      CheckLabel(p.true_label, "true label");
      CheckLabel(p.predicted_label, "predicted label");
      scored.push_back(
          {p, QuestionAnswerTrust(p.correct(), p.confidence, config)});
    } catch (const ValidationError& e) {
      throw DomainError("prediction " + std::to_string(p.id) + ": " +
                        e.what());
    }
  }
  return scored;
}

std::string ScenarioName(int label) {
  switch (label) {
    case 0:
      return "no_default";
    case 1:
      return "payment_default";
    default:
      return std::to_string(label);
  }
}

TrustMatrix ComputeTrustMatrix(std::span<const ScoredPrediction> scored,
                               std::size_t num_classes) {
  TrustMatrix matrix;
  matrix.num_classes = num_classes;
  matrix.cells.assign(num_classes * num_classes, std::nullopt);
  matrix.counts.assign(num_classes * num_classes, 0);
  std::vector<CompensatedSum> sums(num_classes * num_classes);
  for (const ScoredPrediction& s : scored) {
    const int z = s.prediction.true_label;
    const int y = s.prediction.predicted_label;
    if (z < 0 || y < 0 || static_cast<std::size_t>(z) >= num_classes ||
        static_cast<std::size_t>(y) >= num_classes) {
      throw ValidationError("label outside the trust matrix");
    }
    const std::size_t index = matrix.Index(z, y);
    sums[index].Add(s.qa_trust);
    ++matrix.counts[index];
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (matrix.counts[i] > 0) {
      matrix.cells[i] =
          sums[i].Value() / static_cast<double>(matrix.counts[i]);
    }
  }
  return matrix;
}

const SpectrumEntry* Spectrum::Find(std::string_view group) const {
  for (const SpectrumEntry& entry : entries) {
    if (entry.group == group) return &entry;
  }
  return nullptr;
}

Spectrum TrustSpectrum(std::span<const ScoredPrediction> scored) {
  std::vector<std::string> groups;
  for (std::size_t z = 0; z < kNumScenarios; ++z) {
    groups.push_back(ScenarioName(static_cast<int>(z)));
  }
  return BuildSpectrum(scored, groups, [](const ScoredPrediction& s) {
    CheckLabel(s.prediction.true_label, "true label");
    return static_cast<std::size_t>(s.prediction.true_label);
  });
}

std::string_view ToString(DemographicAxis axis) {
  switch (axis) {
    case DemographicAxis::kGender:
      return "gender";
    case DemographicAxis::kEducation:
      return "education";
    case DemographicAxis::kAge:
      return "age";
  }
  return "unknown";
}

DemographicAxis ParseDemographicAxis(std::string_view name) {
  for (DemographicAxis axis : kAllAxes) {
    if (ToString(axis) == name) return axis;
  }
  throw ValidationError("unknown demographic axis \"" + std::string(name) +
                        "\"");
}

std::vector<std::string> AxisGroups(DemographicAxis axis) {
  std::vector<std::string> groups;
  switch (axis) {
    case DemographicAxis::kGender:
      for (Gender g : kAllGenders) groups.emplace_back(ToString(g));
      break;
    case DemographicAxis::kEducation:
      for (Education e : kAllEducations) groups.emplace_back(ToString(e));
      break;
    case DemographicAxis::kAge:
      for (AgeGroup a : kAllAgeGroups) groups.emplace_back(ToString(a));
      break;
  }
  return groups;
}

std::string GroupOf(const DemographicProfile& profile, DemographicAxis axis) {
  switch (axis) {
    case DemographicAxis::kGender:
      return std::string(ToString(profile.gender));
    case DemographicAxis::kEducation:
      return std::string(ToString(profile.education));
    case DemographicAxis::kAge:
      return std::string(ToString(profile.age_group));
  }
  throw ValidationError("unknown demographic axis");
}

Spectrum DemographicTrustSpectrum(std::span<const ScoredPrediction> scored,
                                  DemographicAxis axis) {
  const auto groups = AxisGroups(axis);
  return BuildSpectrum(scored, groups, [axis](const ScoredPrediction& s) {
    const DemographicProfile& d = s.prediction.demographics;
    switch (axis) {
      case DemographicAxis::kGender:
        return IndexIn(kAllGenders, d.gender);
      case DemographicAxis::kEducation:
        return IndexIn(kAllEducations, d.education);
      case DemographicAxis::kAge:
        return IndexIn(kAllAgeGroups, d.age_group);
    }
    return std::size_t{0};
  });
}

double WeightedSpectrumScore(const Spectrum& spectrum) {
  CompensatedSum total;
  for (const SpectrumEntry& entry : spectrum.entries) {
    total.Add(entry.weight * entry.coefficient);
  }
  return total.Value();
}

double NetTrustScore(std::span<const ScoredPrediction> scored) {
  if (scored.empty()) {
    throw ValidationError("NetTrustScore of an empty prediction set");
  }
  return WeightedSpectrumScore(TrustSpectrum(scored));
}

ConditionalTrust ConditionalNetTrustScores(
    std::span<const ScoredPrediction> scored) {
  if (scored.empty()) {
    throw ValidationError("conditional scores of an empty prediction set");
  }
  CompensatedSum correct_sum;
  CompensatedSum incorrect_sum;
  ConditionalTrust result;
  for (const ScoredPrediction& s : scored) {
    if (s.correct()) {
      correct_sum.Add(s.qa_trust);
      ++result.n_correct;
    } else {
      incorrect_sum.Add(s.qa_trust);
      ++result.n_incorrect;
    }
  }
  if (result.n_correct > 0) {
    result.correct =
        correct_sum.Value() / static_cast<double>(result.n_correct);
  }
  if (result.n_incorrect > 0) {
    result.incorrect =
        incorrect_sum.Value() / static_cast<double>(result.n_incorrect);
  }
  result.accuracy = static_cast<double>(result.n_correct) /
                    static_cast<double>(scored.size());
  return result;
}

}  // namespace trustquant
