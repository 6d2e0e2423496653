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

#ifndef CAPCURATE_RICHNESS_H_
#define CAPCURATE_RICHNESS_H_

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capcurate/caption_types.h"
#include "capcurate/corpus_io.h"
#include "capcurate/provider.h"
#include "capcurate/tokenize.h"

namespace capcurate {

// ---------------------------------------------------------------------------
// Token-length histograms
// ---------------------------------------------------------------------------

// Left-inclusive bins [edges[i], edges[i+1]). Lengths at or beyond the last
// edge land in `overflow` when enabled, otherwise in the last bin.
struct BinSpec {
  std::vector<std::int64_t> edges;
  bool overflow = true;

  // Width-5 bins from 0 to 200 plus overflow.
  static BinSpec Default();
  static BinSpec Uniform(std::int64_t width, std::int64_t max);
};

struct Histogram {
  std::vector<std::int64_t> bin_edges;
  std::vector<std::uint64_t> counts;
  bool has_overflow = true;
  std::uint64_t overflow = 0;
  std::uint64_t underflow = 0;
  std::uint64_t total = 0;    // values added
  std::uint64_t skipped = 0;  // records without the requested format

  // Throws kInvalidArgument unless edges are strictly ascending and give at
  // least one bin.
  explicit Histogram(const BinSpec& spec);

  void Add(std::int64_t value);
  // Requires identical edges.
  void Merge(const Histogram& other);

  nlohmann::json ToJson() const;
  // "bin_start,bin_end,count" rows; the overflow row has bin_end "inf".
  std::string ToCsv() const;
};

Histogram TokenLengthHistogram(RecordStream& records, CaptionFormat format,
                               const BinSpec& bins,
                               const TokenizerScheme& scheme);

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

// Casefold, trim and collapse internal whitespace.
std::string NormalizeEntity(std::string_view entity);

class EntityExtractor {
 public:
  virtual ~EntityExtractor() = default;
  virtual std::set<std::string> Extract(std::string_view caption) = 0;
};

// Capitalized-span heuristic:
//  * an entity is a maximal run of capitalized tokens, extended by any
//    digit-bearing tokens that directly follow it ("Nike Air Max 97");
//  * a digit-bearing token outside such a run is an entity on its own;
//  * the first word of each sentence is capitalized by orthography, so it is
//    ignored unless it is an acronym (two or more capitals) or has a digit;
//  * punctuation and lowercase words end a run.
// Results are normalized with NormalizeEntity.
class HeuristicEntityExtractor : public EntityExtractor {
 public:
  std::set<std::string> Extract(std::string_view caption) override;
};

inline constexpr std::string_view kDefaultEntityPrompt =
    "List each named entity in the caption, one per line.";

// Asks the provider's /assert route for one entity per line.
class ProviderEntityExtractor : public EntityExtractor {
 public:
  explicit ProviderEntityExtractor(
      Provider& provider, std::string prompt = std::string(kDefaultEntityPrompt))
      : provider_(provider), prompt_(std::move(prompt)) {}
  std::set<std::string> Extract(std::string_view caption) override;

 private:
  Provider& provider_;
  std::string prompt_;
};

struct EntityReport {
  std::map<CaptionFormat, std::uint64_t> unique_counts;
  std::uint64_t sample_size = 0;  // records actually sampled
  std::uint64_t seed = 0;
  std::optional<std::map<CaptionFormat, std::set<std::string>>> entities;

  nlohmann::json ToJson() const;
};

// Samples min(sample_size, corpus) records (the ones with the smallest
// seeded hash of their id) and counts unique entities per source over that
// same sample. Memory is O(sample_size).
EntityReport EntityDiversity(RecordStream& records,
                             std::span<const CaptionFormat> sources,
                             EntityExtractor& extractor,
                             std::uint64_t sample_size, std::uint64_t seed,
                             bool retain_sets = false);

// ---------------------------------------------------------------------------
// Assertions and ANA
// ---------------------------------------------------------------------------

struct Assertion {
  std::string text;
  std::string source_caption_id;

  friend bool operator==(const Assertion&, const Assertion&) = default;
};

class AssertionExtractor {
 public:
  virtual ~AssertionExtractor() = default;
  virtual std::vector<std::string> Extract(std::string_view caption,
                                           std::string_view caption_id) = 0;
};

// One assertion per independent clause: sentences are split on terminal
// punctuation, then on "and" or "," where both neighbouring pieces look like
// finite clauses (contain a copula/auxiliary, or a -s/-ed verb that follows
// a noun-like word).
std::vector<std::string> RuleBasedAssertions(std::string_view caption);

class RuleBasedAssertionExtractor : public AssertionExtractor {
 public:
  std::vector<std::string> Extract(std::string_view caption,
                                   std::string_view) override {
    return RuleBasedAssertions(caption);
  }
};

inline constexpr std::string_view kDefaultAssertionPrompt =
    "List each atomic factual claim in the caption, one per line.";

// Builds "<template>\n\nCaption: <caption>".
std::string RenderAssertionPrompt(std::string_view prompt_template,
                                  std::string_view caption);

// Splits a provider reply into lines, strips list markers ("-", "*", "1."),
// drops blanks and repeated lines.
std::vector<std::string> ParseListReply(std::string_view reply);

class ProviderAssertionExtractor : public AssertionExtractor {
 public:
  explicit ProviderAssertionExtractor(
      Provider& provider,
      std::string prompt_template = std::string(kDefaultAssertionPrompt))
      : provider_(provider), prompt_template_(std::move(prompt_template)) {}
  std::vector<std::string> Extract(std::string_view caption,
                                   std::string_view caption_id) override;

 private:
  Provider& provider_;
  std::string prompt_template_;
};

std::vector<Assertion> ExtractAssertions(std::string_view caption,
                                         std::string_view caption_id,
                                         AssertionExtractor& extractor);

struct AnaStats {
  std::uint64_t captions = 0;
  std::uint64_t assertions = 0;

  // 0 when there are no captions.
  double Mean() const;
  void Merge(const AnaStats& other);
};

struct AnaReport {
  std::optional<CaptionFormat> format;  // unset: per-format table only
  std::map<CaptionFormat, AnaStats> per_format;
  bool partial = false;  // a provider failure stopped the run
  std::string error;

  // ANA of `format` (or of every caption when unset).
  double ana() const;
  AnaStats Totals() const;
  bool empty() const { return Totals().captions == 0; }
  void Merge(const AnaReport& other);
  nlohmann::json ToJson() const;
};

AnaReport Ana(RecordStream& records, std::optional<CaptionFormat> format,
              AssertionExtractor& extractor);

}  // namespace capcurate

#endif  // CAPCURATE_RICHNESS_H_
