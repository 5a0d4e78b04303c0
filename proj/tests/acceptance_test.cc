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

// Acceptance suite. Prints one PASS, FAIL or BLOCKED line per criterion.
// Exit status: 0 when every selected criterion passes, 1 on any failure,
// 77 when nothing failed but a criterion could not run.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradient_check.h"
#include "oracles.h"
#include "test_util.h"
#include "trustquant/dataset.h"
#include "trustquant/density.h"
#include "trustquant/model.h"
#include "trustquant/numeric.h"
#include "trustquant/pipeline.h"
#include "trustquant/report.h"
#include "trustquant/trust.h"

#ifndef TRUSTQUANT_TAIWAN_CSV_DEFAULT
#define TRUSTQUANT_TAIWAN_CSV_DEFAULT ""
#endif

namespace trustquant::acceptance {
namespace {

enum class Status { kPass, kFail, kBlocked };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

struct Options {
  std::string binary;
  std::string data;
};

std::string Fmt(double v) { return FormatDouble(v); }

Outcome Verdict(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

std::vector<ScoredPrediction> ScoreUnit(
    std::span<const PredictionRecord> records) {
  return ScoreAll(records, TrustConfig{});
}

Outcome QuestionAnswerTrustSuite() {
  struct Case {
    bool correct;
    double confidence;
    double alpha;
    double beta;
    double expected;
  };
  const Case cases[] = {
      {true, 1.0, 1.0, 1.0, 1.0},  {false, 1.0, 1.0, 1.0, 0.0},
      {true, 0.0, 1.0, 1.0, 0.0},  {false, 0.0, 1.0, 1.0, 1.0},
      {true, 0.5, 1.0, 1.0, 0.5},  {false, 0.5, 1.0, 1.0, 0.5},
      {true, 0.9, 2.0, 1.0, std::pow(0.9, 2.0)},
      {false, 0.6, 1.0, 1.0, 1.0 - 0.6}};
  int exact_failures = 0;
  for (const Case& c : cases) {
    const double q =
        QuestionAnswerTrust(c.correct, c.confidence, {c.alpha, c.beta});
    if (q != c.expected) ++exact_failures;
  }
  Rng rng(MixSeed(2026, 1));
  int monotonic_failures = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const TrustConfig config{rng.Uniform(0.0, 5.0), rng.Uniform(0.0, 5.0)};
    const double a = rng.Uniform01();
    const double b = rng.Uniform01();
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double c_lo = QuestionAnswerTrust(true, lo, config);
    const double c_hi = QuestionAnswerTrust(true, hi, config);
    const double i_lo = QuestionAnswerTrust(false, lo, config);
    const double i_hi = QuestionAnswerTrust(false, hi, config);
    const bool ok = c_lo <= c_hi && i_lo >= i_hi && c_lo >= 0.0 &&
                    c_hi <= 1.0 && i_hi >= 0.0 && i_lo <= 1.0;
    if (!ok) ++monotonic_failures;
  }
  return Verdict(exact_failures == 0 && monotonic_failures == 0,
                 std::to_string(std::size(cases) - exact_failures) + "/" +
                     std::to_string(std::size(cases)) + " exact cases, " +
                     std::to_string(kDraws - monotonic_failures) + "/" +
                     std::to_string(kDraws) + " monotone draws");
}

Outcome DecompositionIdentity() {
  Rng rng(MixSeed(2026, 2));
  double worst_split = 0.0;
  double worst_spectrum = 0.0;
  for (int set = 0; set < 1000; ++set) {
    const auto records = testing::RandomPredictions(1 + rng.Below(500), rng);
    const auto scored = ScoreUnit(records);
    const double net = NetTrustScore(scored);
    const ConditionalTrust c = ConditionalNetTrustScores(scored);
    const double recomposed = c.accuracy * c.correct.value_or(0.0) +
                              (1.0 - c.accuracy) * c.incorrect.value_or(0.0);
    worst_split = std::max(worst_split, std::abs(net - recomposed));
    const double weighted = WeightedSpectrumScore(TrustSpectrum(scored));
    worst_spectrum = std::max(
        worst_spectrum, std::abs(weighted - oracle::GrandMean(records)));
  }
  return Verdict(worst_split <= 1e-12 && worst_spectrum <= 1e-12,
                 "1000 sets, max |T - split| = " + Fmt(worst_split) +
                     ", max |spectrum - mean q| = " + Fmt(worst_spectrum));
}

Outcome BruteForceEquivalence() {
  Rng rng(MixSeed(2026, 3));
  double worst = 0.0;
  int presence_mismatches = 0;
  const auto compare = [&](std::optional<double> got,
                           std::optional<double> want) {
    if (got.has_value() != want.has_value()) {
      ++presence_mismatches;
    } else if (got) {
      worst = std::max(worst, std::abs(*got - *want));
    }
  };
  const auto coefficient = [](const Spectrum& s, const std::string& group) {
    const SpectrumEntry* e = s.Find(group);
    return e ? std::optional<double>(e->coefficient) : std::nullopt;
  };
  using Namer = std::function<std::string(const PredictionRecord&)>;
  const std::pair<DemographicAxis, Namer> axes[] = {
      {DemographicAxis::kGender,
       [](const PredictionRecord& p) {
         return std::string(ToString(p.demographics.gender));
       }},
      {DemographicAxis::kEducation,
       [](const PredictionRecord& p) {
         return std::string(ToString(p.demographics.education));
       }},
      {DemographicAxis::kAge, [](const PredictionRecord& p) {
         return std::string(ToString(p.demographics.age_group));
       }}};
  constexpr int kSets = 500;
  for (int set = 0; set < kSets; ++set) {
    const auto records = testing::RandomPredictions(1 + rng.Below(200), rng);
    const auto scored = ScoreUnit(records);
    const TrustMatrix matrix = ComputeTrustMatrix(scored);
    for (int z = 0; z < 2; ++z) {
      for (int y = 0; y < 2; ++y) {
        compare(matrix.cell(z, y), oracle::MatrixCell(records, z, y));
      }
    }
    const Spectrum spectrum = TrustSpectrum(scored);
    for (int z = 0; z < 2; ++z) {
      compare(coefficient(spectrum, ScenarioName(z)),
              oracle::ScenarioCoefficient(records, z));
    }
    for (const auto& [axis, namer] : axes) {
      const Spectrum demographic = DemographicTrustSpectrum(scored, axis);
      for (const std::string& group : AxisGroups(axis)) {
        compare(coefficient(demographic, group),
                oracle::GroupCoefficient(records, group, namer));
      }
    }
  }
  return Verdict(worst <= 1e-12 && presence_mismatches == 0,
                 std::to_string(kSets) + " sets with N <= 200, max error " +
                     Fmt(worst) + ", " + std::to_string(presence_mismatches) +
                     " defined/undefined mismatches");
}

Outcome KernelDensity() {
  Rng rng(MixSeed(2026, 4));
  double worst_value = 0.0;
  double worst_mass = 0.0;
  double worst_sum = 0.0;
  constexpr int kSets = 100;
  for (int set = 0; set < kSets; ++set) {
    // Sets of at least three samples: with fewer, h = 0.5 / sqrt(N) is wide
    // enough that the mirrored tails leave more than 1e-3 of mass outside.
    const auto records = testing::RandomPredictions(6 + rng.Below(400), rng);
    const auto scored = ScoreUnit(records);
    for (int scenario = 0; scenario < 2; ++scenario) {
      std::vector<double> all;
      for (const auto& s : scored) {
        if (s.prediction.predicted_label == scenario) all.push_back(s.qa_trust);
      }
      if (all.size() < 3) continue;
      const DensityCurve curve = ScenarioDensities(scored, scenario, {});
      for (int k = 0; k < 10; ++k) {
        const std::size_t i = rng.Below(curve.grid.size());
        worst_value = std::max(
            worst_value,
            std::abs(curve.total[i] - oracle::ReflectedKde(
                                          all, 1.0, curve.bandwidth,
                                          curve.grid[i])));
        const double g = rng.Uniform01();
        const double point[] = {g};
        worst_value = std::max(
            worst_value,
            std::abs(EstimateDensity(all, 1.0, curve.bandwidth, point)[0] -
                     oracle::ReflectedKde(all, 1.0, curve.bandwidth, g)));
      }
      worst_mass = std::max(
          worst_mass, std::abs(TrapezoidIntegral(curve.grid, curve.total) - 1));
      for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        worst_sum = std::max(
            worst_sum, std::abs(curve.cond_correct[i] + curve.cond_incorrect[i] -
                                curve.total[i]));
      }
    }
  }
  return Verdict(worst_value <= 1e-9 && worst_mass <= 1e-3 && worst_sum <= 1e-9,
                 "max value error " + Fmt(worst_value) + ", max |mass - 1| " +
                     Fmt(worst_mass) + ", max |correct + incorrect - total| " +
                     Fmt(worst_sum));
}

Outcome GradientCheck() {
  Rng rng(MixSeed(2026, 5));
  double worst = 0.0;
  int networks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> dims = {2 + rng.Below(6)};
    const std::size_t hidden = 1 + rng.Below(3);
    for (std::size_t h = 0; h < hidden; ++h) dims.push_back(2 + rng.Below(7));
    dims.push_back(2 + rng.Below(2));
    const Mlp model = testing::RandomMlp(dims, rng);
    std::vector<std::vector<double>> inputs;
    std::vector<Example> batch;
    const std::size_t n = 1 + rng.Below(8);
    for (std::size_t i = 0; i < n; ++i) {
      inputs.push_back(testing::RandomVector(dims.front(), rng));
    }
    for (std::size_t i = 0; i < n; ++i) {
      batch.push_back({inputs[i], static_cast<int>(rng.Below(dims.back()))});
    }
    worst = std::max(worst, testing::MaxRelativeGradientError(model, batch));
    ++networks;
  }
  return Verdict(worst < 1e-4, std::to_string(networks) +
                                   " random networks, max relative error " +
                                   Fmt(worst));
}

// Trained runs on the credit-card file, shared by the two criteria that
// need them.
class TaiwanRuns {
 public:
  explicit TaiwanRuns(std::string path) : path_(std::move(path)) {}

  bool available() const {
    return !path_.empty() && std::filesystem::exists(path_);
  }
  const std::string& path() const { return path_; }

  const RunAllResult& Get(std::uint64_t seed) {
    auto it = runs_.find(seed);
    if (it != runs_.end()) return it->second;
    if (!records_) records_ = LoadRecords(path_);
    PipelineConfig config;
    config.seed = seed;
    return runs_.emplace(seed, RunAll(*records_, config)).first->second;
  }

 private:
  std::string path_;
  std::optional<std::vector<ClientRecord>> records_;
  std::map<std::uint64_t, RunAllResult> runs_;
};

Outcome Blocked(const TaiwanRuns& runs) {
  return {Status::kBlocked,
          "credit-card CSV not found at '" + runs.path() +
              "'; set TRUSTQUANT_TAIWAN_CSV or pass --data"};
}

Outcome TableReproduction(TaiwanRuns& runs) {
  if (!runs.available()) return Blocked(runs);
  constexpr std::uint64_t kSeeds[] = {0, 1, 2};
  int within = 0;
  double worst_identity = 0.0;
  std::ostringstream detail;
  for (std::uint64_t seed : kSeeds) {
    const TrustReport& r = runs.Get(seed).audit.report;
    const double tc = r.conditional.correct.value_or(NAN);
    const double ti = r.conditional.incorrect.value_or(NAN);
    const bool ok = std::abs(r.accuracy - 0.709) <= 0.04 &&
                    std::abs(r.net_trust_score - 0.618) <= 0.04 &&
                    std::abs(tc - 0.734) <= 0.05 && std::abs(ti - 0.335) <= 0.07;
    within += ok;
    worst_identity = std::max(
        worst_identity, std::abs(r.net_trust_score -
                                 (r.accuracy * tc + (1 - r.accuracy) * ti)));
    detail << "seed " << seed << ": acc=" << Fmt(r.accuracy)
           << " T=" << Fmt(r.net_trust_score) << " Tc=" << Fmt(tc)
           << " Ti=" << Fmt(ti) << (ok ? " in" : " out") << "; ";
  }
  detail << "identity error " << Fmt(worst_identity);
  const bool majority = 2 * within > static_cast<int>(std::size(kSeeds));
  return Verdict(majority && worst_identity <= 1e-9, detail.str());
}

Outcome ScenarioParity(TaiwanRuns& runs) {
  if (!runs.available()) return Blocked(runs);
  const Spectrum& spectrum = runs.Get(0).audit.report.trust_spectrum;
  const SpectrumEntry* no_default = spectrum.Find(ScenarioName(0));
  const SpectrumEntry* payment_default = spectrum.Find(ScenarioName(1));
  if (!no_default || !payment_default) {
    return {Status::kFail, "a scenario is missing from the test split"};
  }
  const double gap =
      std::abs(no_default->coefficient - payment_default->coefficient);
  return Verdict(gap < 0.10, "T(no_default)=" + Fmt(no_default->coefficient) +
                                 " T(payment_default)=" +
                                 Fmt(payment_default->coefficient) +
                                 " gap=" + Fmt(gap));
}

Outcome GapReporting() {
  Rng rng(MixSeed(2026, 8));
  int failures = 0;
  constexpr int kSets = 200;
  for (int set = 0; set < kSets; ++set) {
    const auto records = testing::RandomPredictions(20 + rng.Below(400), rng);
    const TrustReport report = BuildReport(ScoreUnit(records), {});
    const TrustReport parsed = ParseReport(SerializeReport(report));
    bool ok = parsed == report && ConsistencyViolations(parsed, 1e-9).empty();
    for (DemographicAxis axis :
         {DemographicAxis::kEducation, DemographicAxis::kAge}) {
      const auto a = static_cast<std::size_t>(axis);
      const Spectrum& spectrum = parsed.demographic_spectra[a];
      const AxisGaps& gaps = parsed.gaps[a];
      const std::size_t k = spectrum.entries.size();
      ok = ok && gaps.pairwise.size() == k * (k - 1) / 2 &&
           gaps.max_min.has_value() == (k >= 2);
      for (const GroupGap& gap : gaps.pairwise) {
        const double first = spectrum.Find(gap.first)->coefficient;
        const double second = spectrum.Find(gap.second)->coefficient;
        ok = ok && std::abs(gap.absolute - (first - second)) <= 1e-9;
        if (gap.percent) {
          ok = ok && std::abs(*gap.percent - 100.0 * (first - second) /
                                                 std::max(first, second)) <=
                         1e-9;
        }
      }
    }
    failures += !ok;
  }
  return Verdict(failures == 0,
                 std::to_string(kSets - failures) + "/" +
                     std::to_string(kSets) +
                     " reports carry consistent education and age gaps "
                     "after a JSON round trip");
}

std::string ShellQuote(const std::string& s) {
  std::string quoted = "'";
  for (char c : s) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  return quoted + "'";
}

Outcome Determinism(const Options& options) {
  if (options.binary.empty() || !std::filesystem::exists(options.binary)) {
    return {Status::kFail,
            "trustquant binary not found at '" + options.binary +
                "'; pass --binary"};
  }
  testing::TempDir dir("acceptance_determinism");
  SaveRecords(dir / "data.csv", testing::SyntheticCreditRecords(1500, 99));
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    const auto out_dir = dir / ("run" + std::to_string(run));
    const std::string command =
        ShellQuote(options.binary) + " run-all --data " +
        ShellQuote((dir / "data.csv").string()) + " --seed 7 --out-dir " +
        ShellQuote(out_dir.string()) + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    if (status != 0) {
      return {Status::kFail, "run-all exited with status " +
                                 std::to_string(status)};
    }
    reports[run] = testing::ReadFile(out_dir / "report.json");
  }
  return Verdict(!reports[0].empty() && reports[0] == reports[1],
                 "two run-all invocations with seed 7 wrote " +
                     std::string(reports[0] == reports[1] ? "identical"
                                                          : "different") +
                     " report.json (" + std::to_string(reports[0].size()) +
                     " bytes)");
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  Options options;
  const char* env = std::getenv("TRUSTQUANT_TAIWAN_CSV");
  options.data = env ? env : TRUSTQUANT_TAIWAN_CSV_DEFAULT;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")
      ->check(CLI::Range(1, 9));
  app.add_option("--binary", options.binary, "Path to the trustquant binary");
  app.add_option("--data", options.data, "Credit-card CSV");
  CLI11_PARSE(app, argc, argv);

  TaiwanRuns runs(options.data);
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria = {
          {"question-answer trust cases and monotonicity",
           QuestionAnswerTrustSuite},
          {"net trust decomposition identity", DecompositionIdentity},
          {"brute-force oracle equivalence", BruteForceEquivalence},
          {"reflected kernel density", KernelDensity},
          {"backprop versus finite differences", GradientCheck},
          {"credit-card reference metrics",
           [&] { return TableReproduction(runs); }},
          {"scenario trust parity", [&] { return ScenarioParity(runs); }},
          {"demographic gap reporting", GapReporting},
          {"run-all determinism", [&] { return Determinism(options); }},
      };

  bool failed = false;
  bool blocked = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (only != 0 && only != number) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* label = outcome.status == Status::kPass   ? "PASS"
                        : outcome.status == Status::kFail ? "FAIL"
                                                          : "BLOCKED";
    std::cout << "criterion " << number << ": " << label << "  "
              << criteria[i].first << " (" << outcome.detail << ")"
              << std::endl;
    failed |= outcome.status == Status::kFail;
    blocked |= outcome.status == Status::kBlocked;
  }
  if (failed) return 1;
  return blocked ? 77 : 0;
}

}  // namespace trustquant::acceptance

int main(int argc, char** argv) {
  return trustquant::acceptance::Main(argc, argv);
}
