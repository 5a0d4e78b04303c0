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

// Trust densities: Gaussian kernel density estimates of question-answer
// trust on [0, 1], with reflection at both boundaries, per answer scenario
// and split into correct/incorrect components.

#ifndef TRUSTQUANT_DENSITY_H_
#define TRUSTQUANT_DENSITY_H_

#include <cstddef>
#include <iosfwd>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "trustquant/trust.h"

namespace trustquant {

// Which label selects the records of a scenario.
enum class GroupBy { kPredicted, kOracle };

std::string_view ToString(GroupBy group_by);
GroupBy ParseGroupBy(std::string_view name);

struct DensityConfig {
  // Kernel constant; bandwidth is gamma / sqrt(N).
  double gamma = 0.5;
  std::size_t grid_points = 1000;
  GroupBy group_by = GroupBy::kPredicted;

  void Validate() const;
  bool operator==(const DensityConfig&) const = default;
};

// gamma / sqrt(n). Throws ValidationError for n == 0.
double Bandwidth(std::size_t n, double gamma);

// points values evenly spaced over [0, 1], both endpoints included.
std::vector<double> UniformGrid(std::size_t points);

// Normal density with standard deviation h evaluated at d.
double GaussianKernel(double d, double h);

// (weight / n) * sum_i [K(g - q_i) + K(g + q_i) + K(g - (2 - q_i))] at
// every grid point g. The second and third terms mirror each sample about
// 0 and 1.
std::vector<double> EstimateDensity(std::span<const double> samples,
                                    double weight, double h,
                                    std::span<const double> grid);

struct DensityCurve {
  int scenario = 0;
  GroupBy group_by = GroupBy::kPredicted;
  std::vector<double> grid;
  std::vector<double> total;
  // Correct-answer component, already weighted by the correct fraction.
  std::vector<double> cond_correct;
  std::vector<double> cond_incorrect;
  std::size_t n_samples = 0;
  std::size_t n_correct = 0;
  double bandwidth = 0.0;
};

// Density of question-answer trust over the records whose group_by label
// equals scenario. The conditional curves share the total's bandwidth, so
// cond_correct + cond_incorrect == total. Throws ValidationError if the
// scenario has no records.
DensityCurve ScenarioDensities(std::span<const ScoredPrediction> scored,
                               int scenario, const DensityConfig& config);

double TrapezoidIntegral(std::span<const double> x, std::span<const double> y);

// Tab-separated "q total cond_correct cond_incorrect", one row per grid
// point.
void WriteDensityTsv(std::ostream& output, const DensityCurve& curve);
void SaveDensityTsv(const std::filesystem::path& path,
                    const DensityCurve& curve);

}  // namespace trustquant

#endif  // TRUSTQUANT_DENSITY_H_
