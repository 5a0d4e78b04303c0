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

#include "trustquant/pipeline.h"

#include <fstream>
#include <ostream>

#include "json.hpp"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"
#include "trustquant/predictions_io.h"

namespace trustquant {
namespace {

constexpr std::uint64_t kBalanceStream = 1;
constexpr std::uint64_t kSplitStream = 2;

}  // namespace

void PipelineConfig::Validate() const {
  SplitSpec{train_fraction, seed, balance_mode}.Validate();
  TrainConfig effective = train;
  effective.seed = seed;
  effective.Validate();
  trust.Validate();
  density.Validate();
}

PipelineEcho PipelineConfig::Echo() const {
  PipelineEcho echo;
  echo.seed = seed;
  echo.train_fraction = train_fraction;
  echo.balance_mode = balance_mode;
  echo.train = train;
  echo.train.seed = seed;
  return echo;
}

PreparedData PrepareData(std::span<const ClientRecord> raw,
                         const PipelineConfig& config) {
  PreparedData data;
  data.counts.raw = raw.size();
  std::vector<ClientRecord> pool;
  if (config.balance_mode == BalanceMode::kUndersample) {
    pool = Balance(raw, MixSeed(config.seed, kBalanceStream));
  } else {
    pool.assign(raw.begin(), raw.end());
  }
  data.counts.balanced = pool.size();
  SplitSpec spec{config.train_fraction, MixSeed(config.seed, kSplitStream),
                 config.balance_mode};
  SplitResult split = Split(pool, spec);
  data.train = std::move(split.train);
  data.test = std::move(split.test);
  data.counts.train = data.train.size();
  data.counts.test = data.test.size();
  data.standardized = Standardize(data.train, data.test);
  return data;
}

TrainedModel TrainOnRecords(
    std::span<const ClientRecord> raw, const PipelineConfig& config,
    const std::function<void(const EpochStats&)>& on_epoch) {
  config.Validate();
  TrainedModel trained;
  trained.data = PrepareData(raw, config);
  std::vector<int> labels;
  labels.reserve(trained.data.train.size());
  for (const ClientRecord& r : trained.data.train) labels.push_back(r.label);

  TrainConfig train_config = config.train;
  train_config.seed = config.seed;
  TrainResult result =
      Train(trained.data.standardized.train, labels, train_config, on_epoch);
  trained.bundle.model = std::move(result.model);
  trained.bundle.params = trained.data.standardized.params;
  trained.bundle.config = train_config;
  trained.history = std::move(result.history);
  return trained;
}

AuditResult Audit(std::span<const PredictionRecord> predictions,
                  const ReportConfig& config, DatasetCounts counts) {
  config.trust.Validate();
  config.density.Validate();
  AuditResult audit;
  audit.scored = ScoreAll(predictions, config.trust);
  audit.report = BuildReport(audit.scored, config, counts);
  for (std::size_t z = 0; z < kNumScenarios; ++z) {
    const int scenario = static_cast<int>(z);
    const bool present = std::any_of(
        audit.scored.begin(), audit.scored.end(),
        [&](const ScoredPrediction& s) {
          return (config.density.group_by == GroupBy::kPredicted
                      ? s.prediction.predicted_label
                      : s.prediction.true_label) == scenario;
        });
    if (!present) {
      audit.missing_scenarios.push_back(scenario);
      continue;
    }
    audit.densities.push_back(
        ScenarioDensities(audit.scored, scenario, config.density));
  }
  return audit;
}

RunAllResult RunAll(std::span<const ClientRecord> raw,
                    const PipelineConfig& config,
                    const std::function<void(const EpochStats&)>& on_epoch) {
  RunAllResult result;
  result.trained = TrainOnRecords(raw, config, on_epoch);
  result.predictions =
      PredictBatch(result.trained.bundle.model, result.trained.data.test,
                   result.trained.bundle.params);
  ReportConfig report_config{config.trust, config.density, config.Echo()};
  result.audit =
      Audit(result.predictions, report_config, result.trained.data.counts);
  return result;
}

std::string DensityFileName(int scenario) {
  return "density_" + ScenarioName(scenario) + ".tsv";
}

void WriteTrainingLog(std::ostream& output,
                      std::span<const EpochStats> history) {
  output << "epoch\tlearning_rate\tloss\taccuracy\n";
  for (const EpochStats& e : history) {
    output << e.epoch + 1 << '\t' << FormatDouble(e.learning_rate) << '\t'
           << FormatDouble(e.loss) << '\t' << FormatDouble(e.accuracy) << '\n';
  }
}

std::vector<std::string> WriteRunArtifacts(
    const RunAllResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  std::vector<std::string> names;
  const auto add = [&](const std::string& name, const std::string& kind) {
    names.push_back(name);
    files.push_back({{"path", name}, {"kind", kind}});
  };

  SaveModel(result.trained.bundle, out_dir / "model.json");
  add("model.json", "model");
  {
    std::ofstream log(out_dir / "training_log.tsv", std::ios::binary);
    if (!log) throw IoError("cannot write training_log.tsv");
    WriteTrainingLog(log, result.trained.history);
  }
  add("training_log.tsv", "training_log");
  SavePredictions(out_dir / "predictions.csv", result.predictions);
  add("predictions.csv", "predictions");
  WriteReport(result.audit.report, out_dir / "report.json");
  add("report.json", "report");
  for (const DensityCurve& curve : result.audit.densities) {
    const std::string name = DensityFileName(curve.scenario);
    SaveDensityTsv(out_dir / name, curve);
    add(name, "density");
  }

  nlohmann::ordered_json manifest;
  manifest["seed"] = result.trained.bundle.config.seed;
  manifest["files"] = std::move(files);
  std::ofstream output(out_dir / "manifest.json", std::ios::binary);
  if (!output) throw IoError("cannot write manifest.json");
  output << manifest.dump(2) << '\n';
  names.push_back("manifest.json");
  return names;
}

}  // namespace trustquant
