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

#include "capcurate/caption_types.h"

#include <algorithm>
#include <string>

#include "capcurate/error.h"
#include "capcurate/text_util.h"

namespace capcurate {

std::string_view FormatKey(CaptionFormat format) {
  switch (format) {
    case CaptionFormat::kAltText: return "alt";
    case CaptionFormat::kSsc: return "ssc";
    case CaptionFormat::kDsc: return "dsc";
    case CaptionFormat::kDscPlus: return "dscplus";
    case CaptionFormat::kAfc: return "afc";
  }
  return "";
}

std::string_view FormatDisplayName(CaptionFormat format) {
  switch (format) {
    case CaptionFormat::kAltText: return "AltText";
    case CaptionFormat::kSsc: return "SSC";
    case CaptionFormat::kDsc: return "DSC";
    case CaptionFormat::kDscPlus: return "DSC+";
    case CaptionFormat::kAfc: return "AFC";
  }
  return "";
}

std::optional<CaptionFormat> ParseFormatKey(std::string_view key) {
  for (CaptionFormat f : kAllFormats) {
    if (FormatKey(f) == key) return f;
  }
  if (key == "dsc+") return CaptionFormat::kDscPlus;
  return std::nullopt;
}

std::vector<CaptionFormat> ParseFormatList(std::string_view csv) {
  std::vector<CaptionFormat> out;
  for (std::string_view item : SplitString(csv, ',')) {
    item = TrimAscii(item);
    if (item.empty()) continue;
    auto f = ParseFormatKey(item);
    if (!f) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "unknown caption source '" + std::string(item) + "'");
    }
    if (std::find(out.begin(), out.end(), *f) != out.end()) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "caption source listed twice: " + std::string(item));
    }
    out.push_back(*f);
  }
  return out;
}

}  // namespace capcurate
