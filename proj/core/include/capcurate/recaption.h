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


#ifndef CAPCURATE_RECAPTION_H_
#define CAPCURATE_RECAPTION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capcurate/caption_format.h"
#include "capcurate/caption_types.h"
#include "capcurate/corpus_io.h"
#include "capcurate/error.h"
#include "capcurate/provider.h"
#include "capcurate/tokenize.h"

namespace capcurate {

// Per-format prompt templates. Placeholders: {alt_text}, {ocr_text}, {id},
// {image_ref}; "{{" and "}}" are literal braces.
class PromptTemplates {
 public:
  static PromptTemplates Defaults();

  const std::string& Get(CaptionFormat format) const;
  // Throws kTemplateError when the template has an unknown placeholder or
  // an unbalanced brace.
  void Set(CaptionFormat format, std::string text);

  nlohmann::json ToJson() const;
  // Keys are format keys; absent formats keep `base`.
  static PromptTemplates FromJson(const nlohmann::json& doc,
                                  const PromptTemplates& base);
  static PromptTemplates Load(const std::filesystem::path& path);

 private:
  std::map<CaptionFormat, std::string> templates_;
};

// Missing optional fields render as "". Throws kTemplateError.
std::string RenderPrompt(std::string_view prompt_template,
                         const CaptionRecord& record);

struct RecaptionResult {
  std::string id;
  std::optional<std::string> caption;
  std::optional<Error> error;  // kProviderFailure or kMissingAltText
};

struct RecaptionOptions {
  std::size_t workers = 0;  // 0: the provider's max_in_flight()
  std::set<std::string> done_ids;
};

struct RecaptionSummary {
  std::uint64_t requested = 0;
  std::uint64_t succeeded = 0;
  std::uint64_t failed = 0;
  std::uint64_t missing_alt = 0;
  std::uint64_t skipped_done = 0;
  std::uint64_t error_records = 0;

  nlohmann::json ToJson() const;
};

// Requests a `format` caption for every record not in `done_ids`, at most
// `workers` at a time. `sink` sees each result exactly once, in completion
// order, never concurrently. AFC records without alt_text are reported as
// kMissingAltText and not sent.
RecaptionSummary RecaptionBatch(
    RecordStream& records, CaptionFormat format, Provider& provider,
    const PromptTemplates& templates,
    const std::function<void(const RecaptionResult&, const CaptionRecord&)>& sink,
    const RecaptionOptions& options = {});

struct QualityConfig {
  std::vector<std::string> boilerplate_prefixes = {
      "The image shows",     "This image shows",  "The picture shows",
      "This is a photo of",  "This is an image of", "In this image,",
      "The photo shows",     "An image of",       "A photo of"};
  std::size_t ngram = 4;
  std::size_t max_repeated_ngrams = 2;
  // Optional model-based check: returns a rejection reason, or nullopt to
  // accept.
  std::function<std::optional<std::string>(std::string_view caption,
                                           CaptionFormat format)>
      model_check;
};

struct QualityVerdict {
  bool accepted = false;
  std::string caption;  // cleaned caption when accepted
  std::string reason;   // empty | max_sentences | min_tokens | max_tokens |
                        // alt_fusion | empty | repetition | model:<reason>

  static QualityVerdict Accept(std::string caption) {
    return {true, std::move(caption), ""};
  }
  static QualityVerdict Reject(std::string reason) {
    return {false, "", std::move(reason)};
  }
};

// Number of extra occurrences of repeated n-grams (sum of count - 1).
std::size_t RepeatedNgramOccurrences(std::string_view text, std::size_t n,
                                     const TokenizerScheme& scheme);

QualityVerdict QualityPostProcess(std::string_view caption, CaptionFormat format,
                                  const FormatSpecRegistry& specs,
                                  const TokenizerScheme& scheme,
                                  const QualityConfig& config = {},
                                  std::optional<std::string_view> alt_text = {});

}  // namespace capcurate

#endif  // CAPCURATE_RECAPTION_H_
