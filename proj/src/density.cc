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

#include "trustquant/density.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>

#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {

std::string_view ToString(GroupBy group_by) {
  return group_by == GroupBy::kPredicted ? "predicted" : "oracle";
}

GroupBy ParseGroupBy(std::string_view name) {
  if (name == "predicted") return GroupBy::kPredicted;
  if (name == "oracle") return GroupBy::kOracle;
  throw ValidationError("unknown group-by \"" + std::string(name) +
                        "\" (expected predicted or oracle)");
}

void DensityConfig::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("gamma must be > 0, got " + FormatDouble(gamma));
  }
  if (grid_points < 2) {
    throw ValidationError("grid_points must be >= 2, got " +
                          std::to_string(grid_points));
  }
}

double Bandwidth(std::size_t n, double gamma) {
  if (n == 0) throw ValidationError("bandwidth of an empty sample");
  return gamma / std::sqrt(static_cast<double>(n));
}

std::vector<double> UniformGrid(std::size_t points) {
  if (points < 2) throw ValidationError("a grid needs at least 2 points");
  std::vector<double> grid(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / last;
  }
  return grid;
}

double GaussianKernel(double d, double h) {
  const double u = d / h;
  return std::exp(-0.5 * u * u) / (h * std::sqrt(2.0 * std::numbers::pi));
}

std::vector<double> EstimateDensity(std::span<const double> samples,
                                    double weight, double h,
                                    std::span<const double> grid) {
  if (samples.empty()) throw ValidationError("density of an empty sample");
  if (!(weight > 0.0 && weight <= 1.0)) {
    throw ValidationError("density weight must lie in (0, 1], got " +
                          FormatDouble(weight));
  }
  if (!(h > 0.0)) throw ValidationError("bandwidth must be positive");
  for (double q : samples) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw DomainError("trust sample " + FormatDouble(q) + " outside [0, 1]");
    }
  }
  const double scale = weight / static_cast<double>(samples.size());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i];
    double acc = 0.0;
    for (double q : samples) {
      acc += GaussianKernel(g - q, h) + GaussianKernel(g + q, h) +
             GaussianKernel(g - (2.0 - q), h);
    }
    values[i] = scale * acc;
  }
  return values;
}

DensityCurve ScenarioDensities(std::span<const ScoredPrediction> scored,
                               int scenario, const DensityConfig& config) {
  config.Validate();
  std::vector<double> all;
  std::vector<double> correct;
  std::vector<double> incorrect;
  for (const ScoredPrediction& s : scored) {
    const int label = config.group_by == GroupBy::kPredicted
                          ? s.prediction.predicted_label
                          : s.prediction.true_label;
    if (label != scenario) continue;
    all.push_back(s.qa_trust);
    (s.correct() ? correct : incorrect).push_back(s.qa_trust);
  }
  if (all.empty()) {
    throw ValidationError("scenario " + ScenarioName(scenario) +
                          " has no records (grouped by " +
                          std::string(ToString(config.group_by)) + " label)");
  }

  DensityCurve curve;
  curve.scenario = scenario;
  curve.group_by = config.group_by;
  curve.grid = UniformGrid(config.grid_points);
  curve.n_samples = all.size();
  curve.n_correct = correct.size();
  curve.bandwidth = Bandwidth(all.size(), config.gamma);

  const double n = static_cast<double>(all.size());
  curve.total = EstimateDensity(all, 1.0, curve.bandwidth, curve.grid);
  const auto component = [&](const std::vector<double>& subset) {
    if (subset.empty()) return std::vector<double>(curve.grid.size(), 0.0);
    return EstimateDensity(subset, static_cast<double>(subset.size()) / n,
                           curve.bandwidth, curve.grid);
  };
  curve.cond_correct = component(correct);
  curve.cond_incorrect = component(incorrect);
  return curve;
}

double TrapezoidIntegral(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("trapezoid: size mismatch");
  CompensatedSum total;
  for (std::size_t i = 1; i < x.size(); ++i) {
    total.Add(0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]));
  }
  return total.Value();
}

void WriteDensityTsv(std::ostream& output, const DensityCurve& curve) {
  output << "q\ttotal\tcond_correct\tcond_incorrect\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    output << FormatDouble(curve.grid[i]) << '\t'
           << FormatDouble(curve.total[i]) << '\t'
           << FormatDouble(curve.cond_correct[i]) << '\t'
           << FormatDouble(curve.cond_incorrect[i]) << '\n';
  }
}

void SaveDensityTsv(const std::filesystem::path& path,
                    const DensityCurve& curve) {
  std::ofstream output(path, std::ios::binary);
  if (!output) throw IoError("cannot write " + path.string());
  WriteDensityTsv(output, curve);
  if (!output) throw IoError("write failed for " + path.string());
}

}  // namespace trustquant
