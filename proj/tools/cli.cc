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

#include "cli.h"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "trustquant/dataset.h"
#include "trustquant/density.h"
#include "trustquant/errors.h"
#include "trustquant/model.h"
#include "trustquant/numeric.h"
#include "trustquant/pipeline.h"
#include "trustquant/predictions_io.h"
#include "trustquant/report.h"

namespace trustquant::cli {
namespace {

struct TrainFlags {
  std::string data;
  std::uint64_t seed = 0;
  int epochs = 20;
  double lr = 1e-3;
  double decay = 0.96;
  std::size_t batch_size = 32;
  double train_fraction = 0.8;
  std::string balance = "undersample";
};

struct AuditFlags {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  std::size_t grid_points = 1000;
  std::string group_by = "predicted";
};

void AddTrainFlags(CLI::App& cmd, TrainFlags& f) {
  cmd.add_option("--data", f.data, "Credit-card default CSV")->required();
  cmd.add_option("--seed", f.seed, "Seed for balancing, split and training")
      ->capture_default_str();
  cmd.add_option("--epochs", f.epochs, "Training epochs")->capture_default_str();
  cmd.add_option("--lr", f.lr, "Initial learning rate")->capture_default_str();
  cmd.add_option("--decay", f.decay, "Per-epoch learning-rate multiplier")
      ->capture_default_str();
  cmd.add_option("--batch-size", f.batch_size, "Minibatch size")
      ->capture_default_str();
  cmd.add_option("--train-fraction", f.train_fraction,
                 "Stratified train fraction")
      ->capture_default_str();
  cmd.add_option("--balance", f.balance, "undersample or none")
      ->capture_default_str();
}

void AddAuditFlags(CLI::App& cmd, AuditFlags& f) {
  cmd.add_option("--alpha", f.alpha, "Reward exponent")->capture_default_str();
  cmd.add_option("--beta", f.beta, "Penalty exponent")->capture_default_str();
  cmd.add_option("--gamma", f.gamma, "KDE bandwidth constant")
      ->capture_default_str();
  cmd.add_option("--grid-points", f.grid_points, "Density grid size")
      ->capture_default_str();
  cmd.add_option("--group-by", f.group_by,
                 "Scenario label for densities: predicted or oracle")
      ->capture_default_str();
}

PipelineConfig ToPipelineConfig(const TrainFlags& t, const AuditFlags& a) {
  PipelineConfig config;
  config.seed = t.seed;
  config.train_fraction = t.train_fraction;
  config.balance_mode = ParseBalanceMode(t.balance);
  config.train.epochs = t.epochs;
  config.train.lr0 = t.lr;
  config.train.decay = t.decay;
  config.train.batch_size = t.batch_size;
  config.train.seed = t.seed;
  config.trust = {a.alpha, a.beta};
  config.density.gamma = a.gamma;
  config.density.grid_points = a.grid_points;
  config.density.group_by = ParseGroupBy(a.group_by);
  config.Validate();
  return config;
}

ReportConfig ToReportConfig(const AuditFlags& a) {
  ReportConfig config;
  config.trust = {a.alpha, a.beta};
  config.density.gamma = a.gamma;
  config.density.grid_points = a.grid_points;
  config.density.group_by = ParseGroupBy(a.group_by);
  config.trust.Validate();
  config.density.Validate();
  return config;
}

std::function<void(const EpochStats&)> EpochLogger(std::ostream& out,
                                                   int epochs) {
  return [&out, epochs](const EpochStats& e) {
    out << "epoch " << e.epoch + 1 << "/" << epochs
        << " lr=" << FormatDouble(e.learning_rate)
        << " loss=" << FormatDouble(e.loss)
        << " accuracy=" << FormatDouble(e.accuracy) << '\n';
  };
}

void PrintCounts(std::ostream& err, const DatasetCounts& c) {
  err << "records: raw=" << c.raw.value_or(0)
      << " balanced=" << c.balanced.value_or(0)
      << " train=" << c.train.value_or(0) << " test=" << c.test.value_or(0)
      << '\n';
}

int CmdTrain(const TrainFlags& flags, const std::string& model_out,
             const std::string& split_dir, std::ostream& out,
             std::ostream& err) {
  const PipelineConfig config = ToPipelineConfig(flags, AuditFlags{});
  const auto raw = LoadRecords(flags.data);
  const TrainedModel trained =
      TrainOnRecords(raw, config, EpochLogger(out, config.train.epochs));
  PrintCounts(err, trained.data.counts);
  SaveModel(trained.bundle, model_out);
  if (!split_dir.empty()) {
    std::filesystem::create_directories(split_dir);
    SaveRecords(std::filesystem::path(split_dir) / "train.csv",
                trained.data.train);
    SaveRecords(std::filesystem::path(split_dir) / "test.csv",
                trained.data.test);
  }
  err << "wrote " << model_out << '\n';
  return kExitOk;
}

int CmdPredict(const std::string& model_path, const std::string& data,
               const std::string& out_path, unsigned threads,
               std::ostream& err) {
  // Dimensions are checked against the records below, with both counts in
  // the message.
  const ModelBundle bundle = LoadModel(model_path, std::nullopt);
  if (bundle.model.input_dim() != kNumFeatures) {
    throw DimensionError("model expects " +
                         std::to_string(bundle.model.input_dim()) +
                         " input features, data has " +
                         std::to_string(kNumFeatures));
  }
  const auto records = LoadRecords(data);
  const auto predictions =
      PredictBatch(bundle.model, records, bundle.params, threads);
  SavePredictions(out_path, predictions);
  err << "wrote " << predictions.size() << " predictions to " << out_path
      << '\n';
  return kExitOk;
}

int CmdAudit(const std::string& predictions_path, const std::string& report_out,
             const std::string& density_dir, const AuditFlags& flags,
             std::ostream& err) {
  const ReportConfig config = ToReportConfig(flags);
  const auto predictions = LoadPredictions(predictions_path);
  const AuditResult audit = Audit(predictions, config);
  WriteReport(audit.report, report_out);
  for (int scenario : audit.missing_scenarios) {
    err << "warning: no records for scenario " << ScenarioName(scenario)
        << " (grouped by " << ToString(config.density.group_by)
        << "), density skipped\n";
  }
  if (!density_dir.empty()) {
    std::filesystem::create_directories(density_dir);
    for (const DensityCurve& curve : audit.densities) {
      SaveDensityTsv(std::filesystem::path(density_dir) /
                         DensityFileName(curve.scenario),
                     curve);
    }
  }
  err << "net_trust_score=" << FormatDouble(audit.report.net_trust_score)
      << " accuracy=" << FormatDouble(audit.report.accuracy) << '\n';
  return kExitOk;
}

int CmdRunAll(const TrainFlags& train, const AuditFlags& audit,
              const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  const PipelineConfig config = ToPipelineConfig(train, audit);
  const auto raw = LoadRecords(train.data);
  const RunAllResult result =
      RunAll(raw, config, EpochLogger(out, config.train.epochs));
  PrintCounts(err, result.trained.data.counts);
  for (int scenario : result.audit.missing_scenarios) {
    err << "warning: no records for scenario " << ScenarioName(scenario)
        << ", density skipped\n";
  }
  const auto files = WriteRunArtifacts(result, out_dir);
  const TrustReport& r = result.audit.report;
  out << "accuracy=" << FormatDouble(r.accuracy)
      << " net_trust_score=" << FormatDouble(r.net_trust_score)
      << " trust_correct="
      << (r.conditional.correct ? FormatDouble(*r.conditional.correct) : "null")
      << " trust_incorrect="
      << (r.conditional.incorrect ? FormatDouble(*r.conditional.incorrect)
                                  : "null")
      << '\n';
  for (const std::string& f : files) err << "wrote " << f << '\n';
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Trust quantification for credit-default classifiers"};
  app.name("trustquant");
  app.require_subcommand(1);

  TrainFlags train_flags;
  std::string model_out;
  std::string split_dir;
  CLI::App* train = app.add_subcommand("train", "Train the classifier");
  AddTrainFlags(*train, train_flags);
  train->add_option("--model-out", model_out, "Model JSON to write")->required();
  train->add_option("--split-dir", split_dir,
                    "Also write the train/test split as CSV here");

  std::string model_path;
  std::string predict_data;
  std::string predictions_out;
  unsigned threads = 1;
  CLI::App* predict = app.add_subcommand("predict", "Predict a CSV of records");
  predict->add_option("--model", model_path, "Model JSON")->required();
  predict->add_option("--data", predict_data, "Records CSV")->required();
  predict->add_option("--out", predictions_out, "Predictions CSV to write")
      ->required();
  predict->add_option("--threads", threads, "Inference threads")
      ->capture_default_str();

  AuditFlags audit_flags;
  std::string predictions_in;
  std::string report_out;
  std::string density_dir;
  CLI::App* audit = app.add_subcommand("audit", "Audit a predictions CSV");
  audit->add_option("--predictions", predictions_in, "Predictions CSV")
      ->required();
  audit->add_option("--report-out", report_out, "Report JSON to write")
      ->required();
  audit->add_option("--density-dir", density_dir,
                    "Directory for per-scenario density TSVs");
  AddAuditFlags(*audit, audit_flags);

  TrainFlags run_train_flags;
  AuditFlags run_audit_flags;
  std::string out_dir;
  CLI::App* run_all =
      app.add_subcommand("run-all", "Train, predict and audit in one go");
  AddTrainFlags(*run_all, run_train_flags);
  AddAuditFlags(*run_all, run_audit_flags);
  run_all->add_option("--out-dir", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (train->parsed()) {
      return CmdTrain(train_flags, model_out, split_dir, out, err);
    }
    if (predict->parsed()) {
      return CmdPredict(model_path, predict_data, predictions_out, threads,
                        err);
    }
    if (audit->parsed()) {
      return CmdAudit(predictions_in, report_out, density_dir, audit_flags,
                      err);
    }
    if (run_all->parsed()) {
      return CmdRunAll(run_train_flags, run_audit_flags, out_dir, out, err);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace trustquant::cli
