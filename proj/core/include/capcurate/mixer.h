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


#ifndef CAPCURATE_MIXER_H_
#define CAPCURATE_MIXER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capcurate/caption_types.h"
#include "capcurate/corpus_io.h"
#include "capcurate/tokenize.h"

namespace capcurate {

enum class MixMode { kRatioSample, kConcat, kUnionUniform };
enum class MissingPolicy { kSkipRecord, kFallback, kError };

std::string_view MixModeName(MixMode mode);  // ratio_sample | concat | union_uniform
MixMode ParseMixMode(std::string_view name);
std::string_view MissingPolicyName(MissingPolicy policy);  // skip | fallback | error
MissingPolicy ParseMissingPolicy(std::string_view name);

// For kRatioSample, `alt_ratio` is the probability of the "alt side": the
// AltText source when it is listed, otherwise the first source. A Table-4
// style "S/A" split is therefore alt_ratio = A / 100.
struct MixRecipe {
  MixMode mode = MixMode::kRatioSample;
  double alt_ratio = 0.5;
  std::vector<CaptionFormat> sources = {CaptionFormat::kAltText,
                                        CaptionFormat::kSsc};
  std::uint64_t seed = 0;
  MissingPolicy missing_policy = MissingPolicy::kFallback;
  std::optional<std::size_t> budget;  // truncate emitted text to this many tokens
  std::string separator = " ";        // concat only
  std::string tokenizer = std::string(kDefaultScheme);

  // Throws kInvalidArgument on a violated invariant.
  void Validate() const;
  // Index into `sources` of the alt side.
  std::size_t AltIndex() const;

  nlohmann::json ToJson() const;
  // Missing keys keep the defaults above.
  static MixRecipe FromJson(const nlohmann::json& doc);
  static MixRecipe Load(const std::filesystem::path& path);
};

// Per-record source for kRatioSample: the alt side iff
// StableUniform(seed, id) < alt_ratio.
CaptionFormat AssignSource(std::string_view record_id, const MixRecipe& recipe);

// The u value AssignSource compares against alt_ratio.
double AssignmentUniform(std::string_view record_id, std::uint64_t seed);

struct Truncation {
  std::string text;
  bool truncated = false;
};

// Longest prefix made of whole tokens whose count is <= budget. The prefix
// ends at the end of the budget-th token of the original text.
Truncation TruncateForBudget(std::string_view text, std::size_t budget,
                             const TokenizerScheme& scheme);

struct MixReport {
  std::uint64_t input_records = 0;
  std::uint64_t emitted = 0;
  std::map<std::string, std::uint64_t> per_source;  // source label -> count
  std::uint64_t alt_emitted = 0;  // ratio_sample: records from the alt side
  std::uint64_t skipped_missing = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t truncated = 0;
  std::uint64_t error_records = 0;  // unparseable input lines (lenient mode)
  std::uint64_t seed = 0;
  MixRecipe recipe;

  double ObservedAltFraction() const;
  void Merge(const MixReport& other);
  nlohmann::json ToJson() const;
};

// Maps one record to its training example, or nullopt when the record is
// skipped. Throws kMissingSource under MissingPolicy::kError.
std::optional<TrainingExample> MixRecord(const CaptionRecord& record,
                                         const MixRecipe& recipe,
                                         const TokenizerScheme& scheme,
                                         MixReport& report);

struct MixOptions {
  std::size_t workers = 1;
  std::uint64_t max_records_per_shard = 100000;
  bool strict = false;
};

// Mixes every input shard i into "<out_dir>/part-<i>-<k>.jsonl" and writes
// "<out_dir>/manifest.json" and "<out_dir>/mix_report.json". Output bytes
// depend only on the input and the recipe, never on `workers`.
std::pair<DatasetManifest, MixReport> MixCorpus(const DatasetManifest& input,
                                                const MixRecipe& recipe,
                                                const std::filesystem::path& out_dir,
                                                const MixOptions& options = {});

// "ratio_<percent>" with the percentage rounded and zero-padded to 3 digits.
std::string SweepDirectoryName(double ratio);

struct SweepVariant {
  double ratio = 0.0;
  std::filesystem::path directory;
  DatasetManifest manifest;
  MixReport report;
};

// One MixCorpus run per ratio under `out_root`, sharing the recipe's seed.
std::vector<SweepVariant> Sweep(const DatasetManifest& input,
                                const MixRecipe& base_recipe,
                                const std::vector<double>& ratios,
                                const std::filesystem::path& out_root,
                                const MixOptions& options = {});

}  // namespace capcurate

#endif  // CAPCURATE_MIXER_H_
