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

// End-to-end orchestration: prepare data, train, predict and audit. The CLI
// and the acceptance suite both drive the pipeline through these calls.

#ifndef TRUSTQUANT_PIPELINE_H_
#define TRUSTQUANT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trustquant/dataset.h"
#include "trustquant/density.h"
#include "trustquant/model.h"
#include "trustquant/report.h"
#include "trustquant/trust.h"

namespace trustquant {

struct PipelineConfig {
  // Drives balancing, splitting, initialization and batch order.
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  BalanceMode balance_mode = BalanceMode::kUndersample;
  // train.seed is replaced by seed.
  TrainConfig train;
  TrustConfig trust;
  DensityConfig density;

  void Validate() const;
  PipelineEcho Echo() const;
};

struct PreparedData {
  std::vector<ClientRecord> train;
  std::vector<ClientRecord> test;
  StandardizedData standardized;
  DatasetCounts counts;
};

// Balance (unless disabled), then stratified split, then standardization
// fitted on the training part.
PreparedData PrepareData(std::span<const ClientRecord> raw,
                         const PipelineConfig& config);

struct TrainedModel {
  ModelBundle bundle;
  std::vector<EpochStats> history;
  PreparedData data;
};

TrainedModel TrainOnRecords(
    std::span<const ClientRecord> raw, const PipelineConfig& config,
    const std::function<void(const EpochStats&)>& on_epoch = {});

struct AuditResult {
  std::vector<ScoredPrediction> scored;
  TrustReport report;
  // One curve per scenario that has records under config.density.group_by.
  std::vector<DensityCurve> densities;
  std::vector<int> missing_scenarios;
};

AuditResult Audit(std::span<const PredictionRecord> predictions,
                  const ReportConfig& config, DatasetCounts counts = {});

struct RunAllResult {
  TrainedModel trained;
  std::vector<PredictionRecord> predictions;
  AuditResult audit;
};

// Train on the training split, predict the test split and audit it.
RunAllResult RunAll(std::span<const ClientRecord> raw,
                    const PipelineConfig& config,
                    const std::function<void(const EpochStats&)>& on_epoch = {});

std::string DensityFileName(int scenario);

void WriteTrainingLog(std::ostream& output,
                      std::span<const EpochStats> history);

// Writes model.json, training_log.tsv, predictions.csv, report.json, the
// density TSVs and manifest.json into out_dir (created if needed). Returns
// the file names listed in the manifest.
std::vector<std::string> WriteRunArtifacts(const RunAllResult& result,
                                           const std::filesystem::path& out_dir);

}  // namespace trustquant

#endif  // TRUSTQUANT_PIPELINE_H_
