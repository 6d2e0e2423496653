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

#ifndef CAPCURATE_CAPTION_FORMAT_H_
#define CAPCURATE_CAPTION_FORMAT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capcurate/caption_types.h"
#include "capcurate/tokenize.h"

namespace capcurate {

// Machine-checkable contract for one caption format. Token bounds are
// inclusive and measured in the active tokenizer scheme.
struct FormatSpec {
  CaptionFormat format = CaptionFormat::kAltText;
  std::optional<std::size_t> max_sentences;
  std::optional<std::size_t> min_tokens;
  std::optional<std::size_t> max_tokens;
  bool requires_alt_fusion = false;

  friend bool operator==(const FormatSpec&, const FormatSpec&) = default;
};

// Exactly one FormatSpec per CaptionFormat.
//
// Defaults:
//   SSC      one sentence, 5..25 tokens
//   DSC      30..78 tokens
//   DSC+     >= 79 tokens
//   AFC      30..78 tokens, must share a content word with the AltText
//   AltText  unconstrained
class FormatSpecRegistry {
 public:
  static FormatSpecRegistry Defaults();

  const FormatSpec& Get(CaptionFormat format) const;

  // Throws kInvalidArgument when min_tokens > max_tokens.
  void Set(const FormatSpec& spec);

  // {"ssc": {"max_sentences": 1, "min_tokens": 5, ...}, ...}; unset bounds
  // are null.
  nlohmann::json ToJson() const;

  // Formats and fields missing from `doc` keep their value from `base`.
  static FormatSpecRegistry FromJson(const nlohmann::json& doc,
                                     const FormatSpecRegistry& base);
  static FormatSpecRegistry Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  friend bool operator==(const FormatSpecRegistry&,
                         const FormatSpecRegistry&) = default;

 private:
  FormatSpecRegistry() = default;
  std::array<FormatSpec, kAllFormats.size()> specs_{};
};

inline FormatSpecRegistry DefaultSpecs() {
  return FormatSpecRegistry::Defaults();
}

struct Violation {
  std::string constraint;  // max_sentences | min_tokens | max_tokens | alt_fusion
  std::size_t measured = 0;
  std::size_t limit = 0;

  std::string ToString() const;
};

struct ValidationReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;
};

// Checks every constraint of the format's spec. The AltText-fusion check
// only runs when `alt_text` is supplied. Throws kEmptyCaption for blank
// captions.
ValidationReport Validate(std::string_view caption, CaptionFormat format,
                          const FormatSpecRegistry& specs,
                          const TokenizerScheme& scheme,
                          std::optional<std::string_view> alt_text = {});

// Returns the synthetic format whose spec the caption satisfies, preferring
// SSC, then DSC, then DSC+ when several match. AFC is never returned: it is
// indistinguishable from DSC without its AltText. std::nullopt means the
// caption is unclassifiable. Throws kEmptyCaption.
std::optional<CaptionFormat> Classify(std::string_view caption,
                                      const FormatSpecRegistry& specs,
                                      const TokenizerScheme& scheme);

}  // namespace capcurate

#endif  // CAPCURATE_CAPTION_FORMAT_H_
