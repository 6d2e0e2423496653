// Copyright 2026 The capcurate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "capcurate/error.h"
#include "capcurate/mixer.h"
#include "capcurate/sha256.h"
#include "support/support.h"

namespace capcurate {
namespace {

using testing_support::TempDir;

MixRecipe Ratio(double p, std::uint64_t seed = 7) {
  MixRecipe r;
  r.alt_ratio = p;
  r.seed = seed;
  return r;
}

std::map<std::string, TrainingExample> ReadExamples(const DatasetManifest& m) {
  std::map<std::string, TrainingExample> out;
  for (const Shard& s : m.shards) {
    std::ifstream in(s.path);
    std::string line;
    while (std::getline(in, line)) {
      TrainingExample ex = ParseTrainingExample(line).value();
      EXPECT_FALSE(out.contains(ex.id));
      out[ex.id] = ex;
    }
  }
  return out;
}

TEST(Recipe, ValidatesInvariants) {
  MixRecipe r;
  r.alt_ratio = 1.5;
  EXPECT_THROW(r.Validate(), CurationError);
  r.alt_ratio = 0.5;
  r.sources = {CaptionFormat::kAltText};
  EXPECT_THROW(r.Validate(), CurationError);
  r.mode = MixMode::kConcat;
  EXPECT_THROW(r.Validate(), CurationError);
  r.mode = MixMode::kUnionUniform;
  EXPECT_NO_THROW(r.Validate());
}

TEST(Recipe, JsonRoundTrip) {
  MixRecipe r;
  r.mode = MixMode::kConcat;
  r.sources = {CaptionFormat::kAltText, CaptionFormat::kDsc};
  r.budget = 77;
  r.seed = 99;
  const MixRecipe back = MixRecipe::FromJson(r.ToJson());
  EXPECT_EQ(back.ToJson(), r.ToJson());
}

TEST(AssignSource, EndpointsAndDeterminism) {
  for (int i = 0; i < 2000; ++i) {
    const std::string id = "id" + std::to_string(i);
    EXPECT_EQ(AssignSource(id, Ratio(1.0)), CaptionFormat::kAltText);
    EXPECT_EQ(AssignSource(id, Ratio(0.0)), CaptionFormat::kSsc);
    EXPECT_EQ(AssignSource(id, Ratio(0.4)), AssignSource(id, Ratio(0.4)));
  }
}

TEST(AssignSource, ProportionWithinThreeSigma) {
  const int n = 100000;
  const double p = 0.4;
  int alt = 0;
  for (int i = 0; i < n; ++i) {
    alt += AssignSource("r" + std::to_string(i), Ratio(p)) == CaptionFormat::kAltText;
  }
  EXPECT_LE(std::abs(alt / double(n) - p), 3 * std::sqrt(p * (1 - p) / n));
}

TEST(AssignSource, AltSideIsFirstSourceWithoutAltText) {
  MixRecipe r = Ratio(1.0);
  r.sources = {CaptionFormat::kDsc, CaptionFormat::kSsc};
  EXPECT_EQ(AssignSource("x", r), CaptionFormat::kDsc);
}

TEST(Truncate, BoundaryAndIdempotence) {
  std::string text;
  for (int i = 0; i < 50; ++i) text += "word ";
  EXPECT_FALSE(TruncateForBudget(text, 77, DefaultTokenizer()).truncated);
  std::string longer;
  for (int i = 0; i < 100; ++i) longer += "w" + std::to_string(i) + ", ";
  const Truncation t = TruncateForBudget(longer, 77, DefaultTokenizer());
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(DefaultTokenizer().Count(t.text), 77u);
  EXPECT_EQ(TruncateForBudget(t.text, 77, DefaultTokenizer()).text, t.text);
}

TEST(MixRecord, ConcatAndMissingPolicies) {
  CaptionRecord r = testing_support::SyntheticRecord(3);
  MixRecipe concat;
  concat.mode = MixMode::kConcat;
  concat.sources = {CaptionFormat::kAltText, CaptionFormat::kDsc};
  MixReport report;
  auto ex = MixRecord(r, concat, DefaultTokenizer(), report);
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->caption, *r.alt_text + " " + r.captions.at(CaptionFormat::kDsc));
  EXPECT_EQ(ex->source, "alt+dsc");
  EXPECT_LE(DefaultTokenizer().Count(ex->caption),
            DefaultTokenizer().Count(*r.alt_text) +
                DefaultTokenizer().Count(r.captions.at(CaptionFormat::kDsc)));

  r.captions.erase(CaptionFormat::kSsc);
  MixRecipe ratio = Ratio(0.0);
  EXPECT_EQ(MixRecord(r, ratio, DefaultTokenizer(), report)->source, "alt");
  EXPECT_EQ(report.fallbacks, 1u);
  ratio.missing_policy = MissingPolicy::kSkipRecord;
  EXPECT_FALSE(MixRecord(r, ratio, DefaultTokenizer(), report));
  ratio.missing_policy = MissingPolicy::kError;
  try {
    MixRecord(r, ratio, DefaultTokenizer(), report);
    FAIL();
  } catch (const CurationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingSource);
  }
}

TEST(MixCorpus, WorkersDoNotChangeBytes) {
  TempDir dir;
  const DatasetManifest input =
      testing_support::WriteSyntheticCorpus(dir / "in", 3000, 4);
  MixOptions one;
  one.max_records_per_shard = 500;
  MixOptions four = one;
  four.workers = 4;
  const auto [m1, r1] = MixCorpus(input, Ratio(0.4), dir / "w1", one);
  const auto [m4, r4] = MixCorpus(input, Ratio(0.4), dir / "w4", four);
  ASSERT_EQ(m1.shards.size(), m4.shards.size());
  for (std::size_t i = 0; i < m1.shards.size(); ++i) {
    EXPECT_EQ(m1.shards[i].checksum, m4.shards[i].checksum);
  }
  EXPECT_EQ(r1.ToJson(), r4.ToJson());
  EXPECT_EQ(Sha256File(dir / "w1" / "mix_report.json"),
            Sha256File(dir / "w4" / "mix_report.json"));
  EXPECT_EQ(r1.emitted, 3000u);
  std::uint64_t sum = 0;
  for (const auto& [label, count] : r1.per_source) sum += count;
  EXPECT_EQ(sum, r1.emitted);
}

TEST(MixCorpus, UnionIsUniform) {
  TempDir dir;
  const DatasetManifest input =
      testing_support::WriteSyntheticCorpus(dir / "in", 20000, 2);
  MixRecipe r;
  r.mode = MixMode::kUnionUniform;
  r.sources = {CaptionFormat::kSsc, CaptionFormat::kDsc, CaptionFormat::kAfc,
               CaptionFormat::kAltText};
  const auto [m, report] = MixCorpus(input, r, dir / "out");
  for (const auto& [label, count] : report.per_source) {
    EXPECT_NEAR(count / 20000.0, 0.25, 0.015) << label;
  }
}

TEST(Sweep, NestedAndNamedByPercent) {
  TempDir dir;
  const DatasetManifest input =
      testing_support::WriteSyntheticCorpus(dir / "in", 2000, 2);
  const auto variants =
      Sweep(input, Ratio(0.0), {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, dir / "sweep");
  ASSERT_EQ(variants.size(), 6u);
  EXPECT_EQ(variants.front().directory.filename(), "ratio_000");
  EXPECT_EQ(variants.back().directory.filename(), "ratio_100");
  EXPECT_EQ(variants.front().report.alt_emitted, 0u);
  EXPECT_EQ(variants.back().report.alt_emitted, 2000u);
  std::set<std::string> previous;
  for (const SweepVariant& v : variants) {
    std::set<std::string> alt;
    for (const auto& [id, ex] : ReadExamples(v.manifest)) {
      if (ex.source == "alt") alt.insert(id);
    }
    EXPECT_TRUE(std::includes(alt.begin(), alt.end(), previous.begin(), previous.end()));
    previous = alt;
  }
  EXPECT_THROW(Sweep(input, Ratio(0), {0.331, 0.334}, dir / "x"), CurationError);
  EXPECT_THROW(Sweep(input, Ratio(0), {}, dir / "x"), CurationError);
}

TEST(Sweep, SingleRatioEqualsMixCorpus) {
  TempDir dir;
  const DatasetManifest input =
      testing_support::WriteSyntheticCorpus(dir / "in", 500, 1);
  const auto variants = Sweep(input, Ratio(0.3), {0.3}, dir / "sweep");
  const auto [m, r] = MixCorpus(input, Ratio(0.3), dir / "mix");
  EXPECT_EQ(variants[0].manifest.shards[0].checksum, m.shards[0].checksum);
}

TEST(MixCorpus, PermutedInputSameMapping) {
  TempDir dir;
  std::vector<CaptionRecord> records;
  for (int i = 0; i < 3000; ++i) records.push_back(testing_support::SyntheticRecord(i));
  DatasetManifest a{WriteShards(records, dir / "a", 1000)};
  std::shuffle(records.begin(), records.end(), std::mt19937_64(4));
  DatasetManifest b{WriteShards(records, dir / "b", 700)};
  const auto ma = ReadExamples(MixCorpus(a, Ratio(0.5), dir / "oa").first);
  const auto mb = ReadExamples(MixCorpus(b, Ratio(0.5), dir / "ob").first);
  EXPECT_EQ(ma, mb);
}

}  // namespace
}  // namespace capcurate
