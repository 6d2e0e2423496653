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

#ifndef CAPCURATE_CAPTION_TYPES_H_
#define CAPCURATE_CAPTION_TYPES_H_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace capcurate {

// Caption sources. AltText is the raw web text; the others are synthetic.
enum class CaptionFormat { kAltText, kSsc, kDsc, kDscPlus, kAfc };

inline constexpr std::array<CaptionFormat, 5> kAllFormats = {
    CaptionFormat::kAltText, CaptionFormat::kSsc, CaptionFormat::kDsc,
    CaptionFormat::kDscPlus, CaptionFormat::kAfc};

inline constexpr std::array<CaptionFormat, 4> kSyntheticFormats = {
    CaptionFormat::kSsc, CaptionFormat::kDsc, CaptionFormat::kDscPlus,
    CaptionFormat::kAfc};

// Lowercase serialization key: "alt", "ssc", "dsc", "dscplus", "afc".
std::string_view FormatKey(CaptionFormat format);

// Human-readable label: "AltText", "SSC", "DSC", "DSC+", "AFC".
std::string_view FormatDisplayName(CaptionFormat format);

// Accepts the serialization keys; "dsc+" is accepted as an alias of
// "dscplus". Matching is exact (keys are lowercase by contract).
std::optional<CaptionFormat> ParseFormatKey(std::string_view key);

// Comma-separated list of keys. Throws CurationError(kInvalidArgument) on an
// unknown or repeated key.
std::vector<CaptionFormat> ParseFormatList(std::string_view csv);

inline bool IsSynthetic(CaptionFormat format) {
  return format != CaptionFormat::kAltText;
}

}  // namespace capcurate

#endif  // CAPCURATE_CAPTION_TYPES_H_
