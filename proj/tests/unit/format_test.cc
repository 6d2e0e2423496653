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

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "capcurate/caption_format.h"
#include "capcurate/error.h"
#include "capcurate/tokenize.h"
#include "support/support.h"

namespace capcurate {
namespace {

std::vector<std::string> Tokens(std::string_view text) {
  return Tokenize(text).tokens;
}

TEST(Tokenize, PunctuationAndJoiners) {
  EXPECT_EQ(Tokens("Don't stop, t-shirt costs $3.50!"),
            (std::vector<std::string>{"don't", "stop", ",", "t-shirt", "costs",
                                      "$", "3.50", "!"}));
  EXPECT_EQ(Tokens("1,000 people"), (std::vector<std::string>{"1,000", "people"}));
  EXPECT_EQ(Tokens("end. - start"),
            (std::vector<std::string>{"end", ".", "-", "start"}));
}

TEST(Tokenize, CjkAndEmojiAreSingleTokens) {
  EXPECT_EQ(CountTokens("東京タワー"), 5u);
  EXPECT_EQ(CountTokens("cat 😀 dog"), 3u);
}

TEST(Tokenize, WhitespaceScheme) {
  EXPECT_EQ(CountTokens("A dog, running.", "whitespace"), 3u);
  EXPECT_THROW(CountTokens("x", "bpe-unknown"), CurationError);
}

TEST(Tokenize, FitsBudgetBoundary) {
  std::string text;
  for (int i = 0; i < 77; ++i) text += "w ";
  EXPECT_TRUE(FitsBudget(text, 77));
  EXPECT_FALSE(FitsBudget(text + "w", 77));
}

TEST(Sentences, SplitsOnTerminalsButNotAbbreviations) {
  const SentenceSplit s =
      SplitSentences("Dr. Smith met Mr. Jones at 3.5 km. They walked! Done?");
  EXPECT_EQ(s.sentences,
            (std::vector<std::string>{"Dr. Smith met Mr. Jones at 3.5 km.",
                                      "They walked!", "Done?"}));
  EXPECT_EQ(SplitSentences("No terminal").sentences.size(), 1u);
  EXPECT_EQ(SplitSentences("   ").sentences.size(), 0u);
  EXPECT_EQ(SplitSentences("He said \"wow.\" Then left.").sentences.size(), 2u);
}

TEST(Sentences, AbbreviationListIsSortedUnique) {
  const auto& list = SentenceAbbreviations();
  EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
  EXPECT_EQ(std::set<std::string>(list.begin(), list.end()).size(), list.size());
}

TEST(Registry, RegisterRejectsDuplicate) {
  TokenizerRegistry registry;
  EXPECT_THROW(registry.Register(std::make_shared<WordPunctScheme>()), CurationError);
  EXPECT_EQ(registry.Names().size(), 2u);
}

// ---------------------------------------------------------------------------

const FormatSpecRegistry& Specs() {
  static const FormatSpecRegistry specs = DefaultSpecs();
  return specs;
}

TEST(Validate, DscBoundaryIsInclusive) {
  std::string caption = "A";
  for (int i = 0; i < 76; ++i) caption += " dog";
  caption += ".";  // 78 tokens
  EXPECT_TRUE(Validate(caption, CaptionFormat::kDsc, Specs(), DefaultTokenizer()).pass);
  caption.insert(caption.size() - 1, " dog");  // 79
  const ValidationReport r =
      Validate(caption, CaptionFormat::kDsc, Specs(), DefaultTokenizer());
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(r.violations.front().constraint, "max_tokens");
  EXPECT_EQ(r.violations.front().measured, 79u);
  EXPECT_TRUE(Validate(caption, CaptionFormat::kDscPlus, Specs(), DefaultTokenizer()).pass);
}

TEST(Validate, EmptyCaptionThrows) {
  EXPECT_THROW(Validate("  ", CaptionFormat::kSsc, Specs(), DefaultTokenizer()),
               CurationError);
}

TEST(Validate, AfcNeedsAltOverlapOnlyWhenAltGiven) {
  std::string caption = "A";
  for (int i = 0; i < 30; ++i) caption += " puppy";
  caption += ".";
  EXPECT_TRUE(Validate(caption, CaptionFormat::kAfc, Specs(), DefaultTokenizer()).pass);
  EXPECT_FALSE(Validate(caption, CaptionFormat::kAfc, Specs(), DefaultTokenizer(),
                        std::string_view("Camera sale"))
                   .pass);
  EXPECT_TRUE(Validate(caption, CaptionFormat::kAfc, Specs(), DefaultTokenizer(),
                       std::string_view("Cute PUPPY"))
                  .pass);
}

TEST(Classify, PicksFirstMatchingBand) {
  EXPECT_EQ(Classify("A dog runs on grass.", Specs(), DefaultTokenizer()),
            CaptionFormat::kSsc);
  EXPECT_EQ(Classify("Dog.", Specs(), DefaultTokenizer()), std::nullopt);
}

TEST(SpecRegistry, JsonOverridesRoundTrip) {
  const auto doc = nlohmann::json::parse(R"({"dsc":{"max_tokens":60}})");
  const FormatSpecRegistry custom = FormatSpecRegistry::FromJson(doc, Specs());
  EXPECT_EQ(custom.Get(CaptionFormat::kDsc).max_tokens, 60u);
  EXPECT_EQ(custom.Get(CaptionFormat::kSsc), Specs().Get(CaptionFormat::kSsc));
  EXPECT_EQ(FormatSpecRegistry::FromJson(custom.ToJson(), Specs()), custom);
  EXPECT_THROW(FormatSpecRegistry::FromJson(
                   nlohmann::json::parse(R"({"dsc":{"min_tokens":90}})"), Specs()),
               CurationError);
}

// Every fixture carries a hand label; validate() must agree on all of them
// and every constraint must appear both passing and failing.
TEST(FormatFixtures, ValidateAgreesWithHandLabels) {
  std::ifstream in(testing_support::DataPath("format_fixtures.jsonl"));
  std::string line;
  int count = 0;
  std::map<std::string, std::set<std::string>> outcomes;
  while (std::getline(in, line)) {
    const auto doc = nlohmann::json::parse(line);
    const CaptionFormat format = *ParseFormatKey(doc["format"].get<std::string>());
    std::optional<std::string> alt;
    if (doc.contains("alt_text")) alt = doc["alt_text"].get<std::string>();
    const ValidationReport r =
        Validate(doc["caption"].get<std::string>(), format, Specs(),
                 DefaultTokenizer(),
                 alt ? std::optional<std::string_view>(*alt) : std::nullopt);
    const bool expect_pass = doc["expect"] == "pass";
    EXPECT_EQ(r.pass, expect_pass) << doc["name"];
    if (!expect_pass && !r.pass) {
      EXPECT_EQ(r.violations.front().constraint, doc["constraint"]) << doc["name"];
    }
    outcomes[doc["format"]].insert(doc["expect"].get<std::string>());
    ++count;
  }
  EXPECT_EQ(count, 40);
  for (const auto& [format, seen] : outcomes) {
    EXPECT_EQ(seen.size(), 2u) << format;
  }
}

}  // namespace
}  // namespace capcurate
