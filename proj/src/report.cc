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

#include "trustquant/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

using Json = nlohmann::ordered_json;

std::optional<double> RelativePercent(double difference, double a, double b) {
  const double base = std::max(a, b);
  if (!(base > 0.0)) return std::nullopt;
  return 100.0 * difference / base;
}

template <typename T>
Json Nullable(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

template <typename T>
std::optional<T> ReadNullable(const Json& node) {
  if (node.is_null()) return std::nullopt;
  return node.get<T>();
}

Json SpectrumToJson(const Spectrum& spectrum,
                    const std::vector<std::string>& canonical) {
  Json out = Json::array();
  for (const std::string& group : canonical) {
    if (const SpectrumEntry* entry = spectrum.Find(group)) {
      out.push_back({{"group", entry->group},
                     {"coefficient", entry->coefficient},
                     {"count", entry->count},
                     {"weight", entry->weight}});
    } else {
      out.push_back({{"group", group},
                     {"coefficient", nullptr},
                     {"count", 0},
                     {"weight", 0.0}});
    }
  }
  return out;
}

Spectrum SpectrumFromJson(const Json& node) {
  Spectrum spectrum;
  for (const Json& item : node) {
    const std::string group = item.at("group").get<std::string>();
    if (item.at("coefficient").is_null()) {
      spectrum.absent.push_back(group);
      continue;
    }
    spectrum.entries.push_back({group, item.at("coefficient").get<double>(),
                                item.at("count").get<std::size_t>(),
                                item.at("weight").get<double>()});
  }
  return spectrum;
}

Json GapToJson(const GroupGap& gap) {
  return {{"first", gap.first},
          {"second", gap.second},
          {"absolute", gap.absolute},
          {"percent", Nullable(gap.percent)}};
}

GroupGap GapFromJson(const Json& node) {
  return {node.at("first").get<std::string>(),
          node.at("second").get<std::string>(),
          node.at("absolute").get<double>(),
          ReadNullable<double>(node.at("percent"))};
}

std::vector<std::string> ScenarioNames(std::size_t num_classes) {
  std::vector<std::string> names;
  for (std::size_t z = 0; z < num_classes; ++z) {
    names.push_back(ScenarioName(static_cast<int>(z)));
  }
  return names;
}

}  // namespace

AxisGaps ComputeGaps(const Spectrum& spectrum) {
  AxisGaps gaps;
  const auto& entries = spectrum.entries;
  if (entries.size() < 2) return gaps;
  const auto [lowest, highest] = std::minmax_element(
      entries.begin(), entries.end(),
      [](const SpectrumEntry& a, const SpectrumEntry& b) {
        return a.coefficient < b.coefficient;
      });
  const double spread = highest->coefficient - lowest->coefficient;
  gaps.max_min = GroupGap{
      highest->group, lowest->group, spread,
      RelativePercent(spread, highest->coefficient, lowest->coefficient)};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const double difference = entries[i].coefficient - entries[j].coefficient;
      gaps.pairwise.push_back(
          {entries[i].group, entries[j].group, difference,
           RelativePercent(difference, entries[i].coefficient,
                           entries[j].coefficient)});
    }
  }
  return gaps;
}

TrustReport BuildReport(std::span<const ScoredPrediction> scored,
                        const ReportConfig& config, DatasetCounts counts) {
  if (scored.empty()) {
    throw ValidationError("cannot build a report from an empty prediction set");
  }
  TrustReport report;
  report.conditional = ConditionalNetTrustScores(scored);
  report.accuracy = report.conditional.accuracy;
  report.trust_matrix = ComputeTrustMatrix(scored);
  report.trust_spectrum = TrustSpectrum(scored);
  report.net_trust_score = WeightedSpectrumScore(report.trust_spectrum);
  for (std::size_t a = 0; a < kNumAxes; ++a) {
    report.demographic_spectra[a] =
        DemographicTrustSpectrum(scored, kAllAxes[a]);
    report.gaps[a] = ComputeGaps(report.demographic_spectra[a]);
  }
  report.config = config;
  report.counts = counts;
  report.counts.audited = scored.size();
  return report;
}

std::vector<std::string> ConsistencyViolations(const TrustReport& report,
                                               double tolerance) {
  std::vector<std::string> violations;
  const auto check = [&](bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  };
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };

  const ConditionalTrust& c = report.conditional;
  const double recomposed = report.accuracy * c.correct.value_or(0.0) +
                            (1.0 - report.accuracy) * c.incorrect.value_or(0.0);
  check(std::abs(recomposed - report.net_trust_score) <= tolerance,
        "net_trust_score != accuracy*correct + (1-accuracy)*incorrect");
  check(std::abs(WeightedSpectrumScore(report.trust_spectrum) -
                 report.net_trust_score) <= tolerance,
        "net_trust_score != spectrum-weighted score");
  check(in_unit(report.accuracy), "accuracy outside [0, 1]");
  check(in_unit(report.net_trust_score), "net_trust_score outside [0, 1]");
  if (c.correct) check(in_unit(*c.correct), "conditional correct outside [0, 1]");
  if (c.incorrect) {
    check(in_unit(*c.incorrect), "conditional incorrect outside [0, 1]");
  }
  for (const auto& cell : report.trust_matrix.cells) {
    if (cell) check(in_unit(*cell), "trust matrix cell outside [0, 1]");
  }

  const auto check_spectrum = [&](const Spectrum& spectrum,
                                  const std::string& name) {
    CompensatedSum weights;
    for (const SpectrumEntry& e : spectrum.entries) {
      weights.Add(e.weight);
      check(in_unit(e.coefficient), name + "/" + e.group + " outside [0, 1]");
    }
    check(std::abs(weights.Value() - 1.0) <= tolerance,
          name + " weights do not sum to 1");
  };
  check_spectrum(report.trust_spectrum, "trust_spectrum");
  for (std::size_t a = 0; a < kNumAxes; ++a) {
    const std::string axis(ToString(kAllAxes[a]));
    const Spectrum& spectrum = report.demographic_spectra[a];
    check_spectrum(spectrum, axis);
    const AxisGaps& gaps = report.gaps[a];
    const auto coefficient = [&](const std::string& group) {
      const SpectrumEntry* e = spectrum.Find(group);
      return e ? std::optional<double>(e->coefficient) : std::nullopt;
    };
    for (const GroupGap& gap : gaps.pairwise) {
      const auto first = coefficient(gap.first);
      const auto second = coefficient(gap.second);
      check(first && second &&
                std::abs((*first - *second) - gap.absolute) <= tolerance,
            axis + " pairwise gap " + gap.first + "/" + gap.second +
                " disagrees with the spectrum");
    }
    if (gaps.max_min) {
      double max = -1.0;
      double min = 2.0;
      for (const SpectrumEntry& e : spectrum.entries) {
        max = std::max(max, e.coefficient);
        min = std::min(min, e.coefficient);
      }
      check(std::abs((max - min) - gaps.max_min->absolute) <= tolerance,
            axis + " max-min gap disagrees with the spectrum");
    } else {
      check(spectrum.entries.size() < 2, axis + " max-min gap missing");
    }
  }
  return violations;
}

std::string SerializeReport(const TrustReport& report) {
  Json root;
  root["accuracy"] = report.accuracy;
  root["net_trust_score"] = report.net_trust_score;
  root["conditional_trust"] = {
      {"correct", Nullable(report.conditional.correct)},
      {"incorrect", Nullable(report.conditional.incorrect)},
      {"n_correct", report.conditional.n_correct},
      {"n_incorrect", report.conditional.n_incorrect},
  };

  const TrustMatrix& m = report.trust_matrix;
  Json cells = Json::array();
  Json counts = Json::array();
  for (std::size_t z = 0; z < m.num_classes; ++z) {
    Json cell_row = Json::array();
    Json count_row = Json::array();
    for (std::size_t y = 0; y < m.num_classes; ++y) {
      const std::size_t index = z * m.num_classes + y;
      cell_row.push_back(Nullable(m.cells[index]));
      count_row.push_back(m.counts[index]);
    }
    cells.push_back(std::move(cell_row));
    counts.push_back(std::move(count_row));
  }
  root["trust_matrix"] = {
      {"labels", ScenarioNames(m.num_classes)},
      {"rows", "oracle"},
      {"columns", "predicted"},
      {"cells", std::move(cells)},
      {"counts", std::move(counts)},
  };
  root["trust_spectrum"] =
      SpectrumToJson(report.trust_spectrum, ScenarioNames(kNumScenarios));

  Json spectra = Json::object();
  Json gaps = Json::object();
  for (std::size_t a = 0; a < kNumAxes; ++a) {
    const std::string axis(ToString(kAllAxes[a]));
    spectra[axis] = SpectrumToJson(report.demographic_spectra[a],
                                   AxisGroups(kAllAxes[a]));
    Json pairwise = Json::array();
    for (const GroupGap& gap : report.gaps[a].pairwise) {
      pairwise.push_back(GapToJson(gap));
    }
    gaps[axis] = {
        {"max_min", report.gaps[a].max_min ? GapToJson(*report.gaps[a].max_min)
                                           : Json(nullptr)},
        {"pairwise", std::move(pairwise)},
    };
  }
  root["demographic_spectra"] = std::move(spectra);
  root["gaps"] = std::move(gaps);

  const ReportConfig& config = report.config;
  Json pipeline = nullptr;
  if (config.pipeline) {
    const PipelineEcho& p = *config.pipeline;
    pipeline = {
        {"seed", p.seed},
        {"train_fraction", p.train_fraction},
        {"balance_mode", std::string(ToString(p.balance_mode))},
        {"epochs", p.train.epochs},
        {"lr0", p.train.lr0},
        {"decay", p.train.decay},
        {"batch_size", p.train.batch_size},
        {"train_seed", p.train.seed},
        {"adam_beta1", p.train.adam.beta1},
        {"adam_beta2", p.train.adam.beta2},
        {"adam_epsilon", p.train.adam.epsilon},
    };
  }
  root["config"] = {
      {"alpha", config.trust.alpha},
      {"beta", config.trust.beta},
      {"gamma", config.density.gamma},
      {"grid_points", config.density.grid_points},
      {"group_by", std::string(ToString(config.density.group_by))},
      {"pipeline", std::move(pipeline)},
  };
  const DatasetCounts& c = report.counts;
  root["counts"] = {
      {"raw", Nullable(c.raw)},           {"balanced", Nullable(c.balanced)},
      {"train", Nullable(c.train)},       {"test", Nullable(c.test)},
      {"audited", c.audited},
  };
  return root.dump(2) + "\n";
}

TrustReport ParseReport(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    TrustReport report;
    report.accuracy = root.at("accuracy").get<double>();
    report.net_trust_score = root.at("net_trust_score").get<double>();
    const Json& c = root.at("conditional_trust");
    report.conditional.correct = ReadNullable<double>(c.at("correct"));
    report.conditional.incorrect = ReadNullable<double>(c.at("incorrect"));
    report.conditional.n_correct = c.at("n_correct").get<std::size_t>();
    report.conditional.n_incorrect = c.at("n_incorrect").get<std::size_t>();
    report.conditional.accuracy = report.accuracy;

    const Json& m = root.at("trust_matrix");
    const Json& cells = m.at("cells");
    const Json& counts = m.at("counts");
    TrustMatrix& matrix = report.trust_matrix;
    matrix.num_classes = cells.size();
    if (counts.size() != matrix.num_classes) {
      throw SchemaError("trust_matrix cells and counts differ in shape");
    }
    for (std::size_t z = 0; z < matrix.num_classes; ++z) {
      if (cells[z].size() != matrix.num_classes ||
          counts[z].size() != matrix.num_classes) {
        throw SchemaError("trust_matrix is not square");
      }
      for (std::size_t y = 0; y < matrix.num_classes; ++y) {
        matrix.cells.push_back(ReadNullable<double>(cells[z][y]));
        matrix.counts.push_back(counts[z][y].get<std::size_t>());
      }
    }
    report.trust_spectrum = SpectrumFromJson(root.at("trust_spectrum"));
    for (std::size_t a = 0; a < kNumAxes; ++a) {
      const std::string axis(ToString(kAllAxes[a]));
      report.demographic_spectra[a] =
          SpectrumFromJson(root.at("demographic_spectra").at(axis));
      const Json& gaps = root.at("gaps").at(axis);
      if (!gaps.at("max_min").is_null()) {
        report.gaps[a].max_min = GapFromJson(gaps.at("max_min"));
      }
      for (const Json& gap : gaps.at("pairwise")) {
        report.gaps[a].pairwise.push_back(GapFromJson(gap));
      }
    }

    const Json& config = root.at("config");
    report.config.trust.alpha = config.at("alpha").get<double>();
    report.config.trust.beta = config.at("beta").get<double>();
    report.config.density.gamma = config.at("gamma").get<double>();
    report.config.density.grid_points =
        config.at("grid_points").get<std::size_t>();
    report.config.density.group_by =
        ParseGroupBy(config.at("group_by").get<std::string>());
    if (const Json& p = config.at("pipeline"); !p.is_null()) {
      PipelineEcho echo;
      echo.seed = p.at("seed").get<std::uint64_t>();
      echo.train_fraction = p.at("train_fraction").get<double>();
      echo.balance_mode =
          ParseBalanceMode(p.at("balance_mode").get<std::string>());
      echo.train.epochs = p.at("epochs").get<int>();
      echo.train.lr0 = p.at("lr0").get<double>();
      echo.train.decay = p.at("decay").get<double>();
      echo.train.batch_size = p.at("batch_size").get<std::size_t>();
      echo.train.seed = p.at("train_seed").get<std::uint64_t>();
      echo.train.adam.beta1 = p.at("adam_beta1").get<double>();
      echo.train.adam.beta2 = p.at("adam_beta2").get<double>();
      echo.train.adam.epsilon = p.at("adam_epsilon").get<double>();
      report.config.pipeline = echo;
    }
    const Json& n = root.at("counts");
    report.counts.raw = ReadNullable<std::size_t>(n.at("raw"));
    report.counts.balanced = ReadNullable<std::size_t>(n.at("balanced"));
    report.counts.train = ReadNullable<std::size_t>(n.at("train"));
    report.counts.test = ReadNullable<std::size_t>(n.at("test"));
    report.counts.audited = n.at("audited").get<std::size_t>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  }
}

void WriteReport(const TrustReport& report, const std::filesystem::path& path) {
  const std::string text = SerializeReport(report);
  std::ofstream output(path, std::ios::binary);
  if (!output) throw IoError("cannot write " + path.string());
  output << text;
  if (!output) throw IoError("write failed for " + path.string());
}

TrustReport ReadReport(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return ParseReport(buffer.str());
}

}  // namespace trustquant
