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

#ifndef TRUSTQUANT_NUMERIC_H_
#define TRUSTQUANT_NUMERIC_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trustquant {

// Neumaier compensated summation. Results agree to ~1 ulp regardless of the
// order in which terms are added.
class CompensatedSum {
 public:
  void Add(double value);
  double Value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double Sum(std::span<const double> values);

// Shortest decimal representation that parses back to the same double,
// with integral values in plain notation.
std::string FormatDouble(double value);

// splitmix64 finalizer applied to (seed, stream). Used to derive independent
// seeds for the pipeline stages from one user seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Random source with a fully specified output sequence. The standard
// distributions are implementation-defined, so they are not used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double low, double high);
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trustquant

#endif  // TRUSTQUANT_NUMERIC_H_
