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

#include <random>
#include <set>
#include <string>
#include <vector>

#include "capcurate/error.h"
#include "capcurate/mock_provider.h"
#include "capcurate/richness.h"
#include "oracles/oracles.h"
#include "support/support.h"

namespace capcurate {
namespace {

TEST(Histogram, MatchesOracleOnRandomLengths) {
  std::mt19937_64 rng(11);
  std::vector<std::int64_t> values;
  for (int i = 0; i < 5000; ++i) values.push_back(static_cast<std::int64_t>(rng() % 260));
  for (bool overflow : {true, false}) {
    BinSpec spec = BinSpec::Default();
    spec.overflow = overflow;
    Histogram h(spec);
    for (auto v : values) h.Add(v);
    const oracle::Bins expected = oracle::Histogram(values, spec.edges, overflow);
    EXPECT_EQ(h.counts, expected.counts);
    EXPECT_EQ(h.overflow, expected.overflow);
    EXPECT_EQ(h.total, values.size());
  }
}

TEST(Histogram, CsvAndMerge) {
  Histogram a(BinSpec::Uniform(10, 20));
  a.Add(0);
  a.Add(15);
  a.Add(99);
  EXPECT_EQ(a.ToCsv(), "bin_start,bin_end,count\n0,10,1\n10,20,1\n20,inf,1\n");
  Histogram b(BinSpec::Uniform(10, 20));
  b.Add(3);
  a.Merge(b);
  EXPECT_EQ(a.counts[0], 2u);
  EXPECT_THROW(a.Merge(Histogram(BinSpec::Uniform(5, 20))), CurationError);
  BinSpec bad;
  bad.edges = {0, 5, 5};
  EXPECT_THROW(Histogram{bad}, CurationError);
}

TEST(Histogram, TokenLengthsSkipMissingFormat) {
  std::vector<CaptionRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(testing_support::SyntheticRecord(i));
  records[3].captions.erase(CaptionFormat::kSsc);
  VectorRecordStream stream(records);
  const Histogram h = TokenLengthHistogram(stream, CaptionFormat::kSsc,
                                           BinSpec::Default(), DefaultTokenizer());
  EXPECT_EQ(h.total, 9u);
  EXPECT_EQ(h.skipped, 1u);
}

TEST(Entities, HeuristicRules) {
  HeuristicEntityExtractor x;
  EXPECT_EQ(x.Extract("Buy Nike Air Max 97 online at Foot Locker"),
            (std::set<std::string>{"nike air max 97", "foot locker"}));
  EXPECT_EQ(x.Extract("A poster from 1999 hangs here. The NASA logo glows."),
            (std::set<std::string>{"1999", "nasa"}));
  EXPECT_EQ(x.Extract("NASA launches. Paris, France at night"),
            (std::set<std::string>{"nasa", "france"}));
  EXPECT_TRUE(x.Extract("a dog on the grass").empty());
}

TEST(Entities, DiversityEqualsLabelUnionOnFixture) {
  const auto path = testing_support::DataPath("entities_1k.jsonl");
  const auto records = testing_support::ReadRecords(path);
  VectorRecordStream stream(records);
  HeuristicEntityExtractor x;
  const std::vector<CaptionFormat> sources = {CaptionFormat::kAltText,
                                              CaptionFormat::kDsc};
  const EntityReport report = EntityDiversity(stream, sources, x, 1000, 5);
  EXPECT_EQ(report.sample_size, 1000u);
  EXPECT_EQ(report.unique_counts.at(CaptionFormat::kAltText),
            oracle::LabelUnionSize(path, "alt_entities"));
  EXPECT_EQ(report.unique_counts.at(CaptionFormat::kDsc),
            oracle::LabelUnionSize(path, "dsc_entities"));
}

TEST(Entities, SamplingIsSeededAndOrderFree) {
  auto records = testing_support::ReadRecords(
      testing_support::DataPath("entities_1k.jsonl"));
  HeuristicEntityExtractor x;
  const std::vector<CaptionFormat> sources = {CaptionFormat::kDsc};
  VectorRecordStream a(records);
  const EntityReport ra = EntityDiversity(a, sources, x, 100, 9, true);
  std::reverse(records.begin(), records.end());
  VectorRecordStream b(records);
  const EntityReport rb = EntityDiversity(b, sources, x, 100, 9, true);
  EXPECT_EQ(ra.entities, rb.entities);
  EXPECT_EQ(ra.sample_size, 100u);
}

TEST(Entities, ProviderExtractorThroughMock) {
  MockProvider mock;
  ProviderEntityExtractor x(mock);
  EXPECT_EQ(x.Extract("A man near the Eiffel Tower."),
            (std::set<std::string>{"eiffel tower"}));
}

TEST(Assertions, SplitsIndependentClausesOnly) {
  EXPECT_EQ(RuleBasedAssertions("A dog is on the grass and a frisbee is near the dog."),
            (std::vector<std::string>{"A dog is on the grass",
                                      "a frisbee is near the dog"}));
  EXPECT_EQ(RuleBasedAssertions("A cat and a dog sleep on a red sofa."),
            (std::vector<std::string>{"A cat and a dog sleep on a red sofa"}));
  EXPECT_EQ(RuleBasedAssertions("A man rides a bike. The sky is blue!").size(), 2u);
  EXPECT_TRUE(RuleBasedAssertions("...").empty());
}

TEST(Assertions, ParseListReplyStripsMarkers) {
  EXPECT_EQ(ParseListReply("1. A dog\n- a cat\n* a cat\n\n2) sky is blue\n"),
            (std::vector<std::string>{"A dog", "a cat", "sky is blue"}));
}

TEST(Ana, LinearAcrossConcatenation) {
  auto records = testing_support::ReadRecords(
      testing_support::DataPath("entities_1k.jsonl"));
  RuleBasedAssertionExtractor x;
  const std::vector<CaptionRecord> first(records.begin(), records.begin() + 512);
  const std::vector<CaptionRecord> second(records.begin() + 512, records.begin() + 768);
  const std::vector<CaptionRecord> both(records.begin(), records.begin() + 768);
  VectorRecordStream sa(first), sb(second), sab(both);
  AnaReport a = Ana(sa, CaptionFormat::kDsc, x);
  const AnaReport b = Ana(sb, CaptionFormat::kDsc, x);
  const AnaReport ab = Ana(sab, CaptionFormat::kDsc, x);
  EXPECT_EQ(ab.Totals().assertions, a.Totals().assertions + b.Totals().assertions);
  EXPECT_EQ(ab.Totals().captions, 768u);
  EXPECT_EQ(ab.ana(), (512 * a.ana() + 256 * b.ana()) / 768);
  a.Merge(b);
  EXPECT_EQ(a.ana(), ab.ana());
}

TEST(Ana, ProviderFailureMarksPartial) {
  std::vector<CaptionRecord> records = {testing_support::SyntheticRecord(0),
                                        testing_support::SyntheticRecord(1)};
  MockProvider mock;
  mock.FailNext("rec-1", 1);
  ProviderAssertionExtractor x(mock);
  VectorRecordStream s(records);
  const AnaReport r = Ana(s, CaptionFormat::kSsc, x);
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.Totals().captions, 1u);
}

}  // namespace
}  // namespace capcurate
