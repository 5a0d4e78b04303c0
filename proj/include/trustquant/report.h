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

// TrustReport: every trust metric of one prediction set plus the
// configuration that produced it, with a deterministic JSON encoding.
//
// Top-level JSON keys, in order:
//   accuracy, net_trust_score, conditional_trust {correct, incorrect, ...},
//   trust_matrix {labels, cells, counts}, trust_spectrum [...],
//   demographic_spectra {gender, education, age}, gaps, config, counts.
// Undefined values (empty cells, empty groups, missing conditionals) are
// written as null, never as 0.

#ifndef TRUSTQUANT_REPORT_H_
#define TRUSTQUANT_REPORT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trustquant/dataset.h"
#include "trustquant/density.h"
#include "trustquant/model.h"
#include "trustquant/trust.h"

namespace trustquant {

// Difference between two group coefficients, higher minus lower for the
// max-min gap and first minus second (canonical order) for pairwise gaps.
// percent is relative to the larger coefficient and undefined when that
// coefficient is 0.
struct GroupGap {
  std::string first;
  std::string second;
  double absolute = 0.0;
  std::optional<double> percent;

  bool operator==(const GroupGap&) const = default;
};

struct AxisGaps {
  // Highest versus lowest group; undefined with fewer than two groups.
  std::optional<GroupGap> max_min;
  std::vector<GroupGap> pairwise;

  bool operator==(const AxisGaps&) const = default;
};

// Training-side settings, present when the predictions came from the
// built-in pipeline.
struct PipelineEcho {
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  BalanceMode balance_mode = BalanceMode::kUndersample;
  TrainConfig train;

  bool operator==(const PipelineEcho&) const = default;
};

struct ReportConfig {
  TrustConfig trust;
  DensityConfig density;
  std::optional<PipelineEcho> pipeline;

  bool operator==(const ReportConfig&) const = default;
};

struct DatasetCounts {
  std::optional<std::size_t> raw;
  std::optional<std::size_t> balanced;
  std::optional<std::size_t> train;
  std::optional<std::size_t> test;
  std::size_t audited = 0;

  bool operator==(const DatasetCounts&) const = default;
};

inline constexpr std::size_t kNumAxes = 3;

struct TrustReport {
  double accuracy = 0.0;
  double net_trust_score = 0.0;
  ConditionalTrust conditional;
  TrustMatrix trust_matrix;
  Spectrum trust_spectrum;
  // Indexed like kAllAxes: gender, education, age.
  std::array<Spectrum, kNumAxes> demographic_spectra;
  std::array<AxisGaps, kNumAxes> gaps;
  ReportConfig config;
  DatasetCounts counts;

  bool operator==(const TrustReport&) const = default;
};

AxisGaps ComputeGaps(const Spectrum& spectrum);

// Runs every trust metric once over scored. counts.audited is overwritten
// with scored.size(). Throws ValidationError on an empty set.
TrustReport BuildReport(std::span<const ScoredPrediction> scored,
                        const ReportConfig& config, DatasetCounts counts = {});

// Descriptions of every internal identity that fails at tolerance: the
// accuracy/conditional decomposition, the spectrum-weighted score, spectrum
// weights summing to 1, gaps matching the spectra and coefficient ranges.
std::vector<std::string> ConsistencyViolations(const TrustReport& report,
                                               double tolerance = 1e-9);

std::string SerializeReport(const TrustReport& report);
TrustReport ParseReport(const std::string& text);
void WriteReport(const TrustReport& report, const std::filesystem::path& path);
TrustReport ReadReport(const std::filesystem::path& path);

}  // namespace trustquant

#endif  // TRUSTQUANT_REPORT_H_
