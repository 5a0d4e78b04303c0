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

#include "trustquant/predictions_io.h"

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.h"
#include "trustquant/errors.h"
#include "trustquant/numeric.h"

namespace trustquant {
namespace {

const std::string kHeader(kPredictionsHeader);

std::vector<PredictionRecord> Parse(const std::string& body,
                                    ConfidenceRange range =
                                        ConfidenceRange::kAny) {
  std::istringstream in(kHeader + "\n" + body);
  return ReadPredictions(in, range);
}

int ParseErrorLine(const std::string& body,
                   ConfidenceRange range = ConfidenceRange::kAny) {
  try {
    Parse(body, range);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(Predictions, ParsesHandWrittenRows) {
  const auto rows = Parse(
      "7,1,0,0.625,female,graduate_school,20-29\n"
      "9,0,0,0.9,male,others,50+\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].id, 7);
  EXPECT_EQ(rows[0].true_label, 1);
  EXPECT_EQ(rows[0].predicted_label, 0);
  EXPECT_EQ(rows[0].confidence, 0.625);
  EXPECT_FALSE(rows[0].correct());
  EXPECT_EQ(rows[0].demographics.gender, Gender::kFemale);
  EXPECT_EQ(rows[0].demographics.education, Education::kGraduateSchool);
  EXPECT_EQ(rows[0].demographics.age_group, AgeGroup::k20To29);
  EXPECT_EQ(rows[1].demographics.age_group, AgeGroup::k50Plus);
  EXPECT_TRUE(rows[1].correct());
}

TEST(Predictions, RoundTripIsExact) {
  Rng rng(21);
  const auto original = testing::RandomPredictions(300, rng);
  std::ostringstream out;
  WritePredictions(out, original);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadPredictions(in), original);
  std::ostringstream again;
  std::istringstream reread(out.str());
  WritePredictions(again, ReadPredictions(reread));
  EXPECT_EQ(again.str(), out.str());
}

TEST(Predictions, EmptyListIsHeaderOnly) {
  std::ostringstream out;
  WritePredictions(out, {});
  EXPECT_EQ(out.str(), kHeader + "\n");
  EXPECT_TRUE(Parse("").empty());
}

TEST(Predictions, HeaderMismatchIsSchemaError) {
  std::istringstream wrong("id,label,confidence\n1,0,0.5\n");
  EXPECT_THROW(ReadPredictions(wrong), SchemaError);
  std::istringstream empty("");
  EXPECT_THROW(ReadPredictions(empty), SchemaError);
}

TEST(Predictions, RowErrorsCarryLineNumbers) {
  const std::string good = "1,0,0,0.7,male,university,30-39\n";
  EXPECT_EQ(ParseErrorLine(good + "2,0,0,0.7,male,university\n"), 3);
  EXPECT_EQ(ParseErrorLine(good + good + "3,2,0,0.7,male,university,30-39\n"),
            4);
  EXPECT_EQ(ParseErrorLine("4,0,0,abc,male,university,30-39\n"), 2);
  EXPECT_EQ(ParseErrorLine("5,0,0,1.2,male,university,30-39\n"), 2);
  EXPECT_EQ(ParseErrorLine("6,0,0,0.7,unknown,university,30-39\n"), 2);
  EXPECT_EQ(ParseErrorLine("7,0,0,0.7,male,college,30-39\n"), 2);
  EXPECT_EQ(ParseErrorLine("8,0,0,0.7,male,university,10-19\n"), 2);
}

TEST(Predictions, ArgmaxRangeRejectsLowConfidence) {
  const std::string row = "1,0,1,0.3,male,university,30-39\n";
  EXPECT_EQ(Parse(row).size(), 1u);
  EXPECT_EQ(ParseErrorLine(row, ConfidenceRange::kArgmax), 2);
  EXPECT_EQ(Parse("1,0,1,0.5,male,university,30-39\n", ConfidenceRange::kArgmax)
                .size(),
            1u);
}

TEST(Predictions, MissingFileIsIoError) {
  EXPECT_THROW(LoadPredictions("/nonexistent/predictions.csv"), IoError);
}

TEST(Predictions, SaveAndLoad) {
  testing::TempDir dir("predictions_io");
  Rng rng(22);
  const auto original = testing::RandomPredictions(25, rng);
  SavePredictions(dir.path() / "p.csv", original);
  EXPECT_EQ(LoadPredictions(dir.path() / "p.csv"), original);
}

}  // namespace
}  // namespace trustquant
