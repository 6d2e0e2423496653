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

#include "capcurate/caption_format.h"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "capcurate/error.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

std::size_t Index(CaptionFormat format) {
  return static_cast<std::size_t>(format);
}

void CheckBounds(const FormatSpec& spec) {
  if (spec.min_tokens && spec.max_tokens &&
      *spec.min_tokens > *spec.max_tokens) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        std::string(FormatDisplayName(spec.format)) +
                            ": min_tokens exceeds max_tokens");
  }
}

nlohmann::json OptionalToJson(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void ReadOptional(const nlohmann::json& obj, const char* key,
                  std::optional<std::size_t>* out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_null()) {
    out->reset();
  } else if (it->is_number_unsigned()) {
    *out = it->get<std::size_t>();
  } else {
    throw CurationError(ErrorCode::kInvalidArgument,
                        std::string(key) + " must be a nonnegative integer");
  }
}

}  // namespace

FormatSpecRegistry FormatSpecRegistry::Defaults() {
  FormatSpecRegistry registry;
  registry.specs_[Index(CaptionFormat::kAltText)] =
      FormatSpec{CaptionFormat::kAltText, {}, {}, {}, false};
  registry.specs_[Index(CaptionFormat::kSsc)] =
      FormatSpec{CaptionFormat::kSsc, 1, 5, 25, false};
  registry.specs_[Index(CaptionFormat::kDsc)] =
      FormatSpec{CaptionFormat::kDsc, {}, 30, 78, false};
  registry.specs_[Index(CaptionFormat::kDscPlus)] =
      FormatSpec{CaptionFormat::kDscPlus, {}, 79, {}, false};
  registry.specs_[Index(CaptionFormat::kAfc)] =
      FormatSpec{CaptionFormat::kAfc, {}, 30, 78, true};
  return registry;
}

const FormatSpec& FormatSpecRegistry::Get(CaptionFormat format) const {
  return specs_[Index(format)];
}

void FormatSpecRegistry::Set(const FormatSpec& spec) {
  CheckBounds(spec);
  specs_[Index(spec.format)] = spec;
}

nlohmann::json FormatSpecRegistry::ToJson() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const FormatSpec& spec : specs_) {
    doc[std::string(FormatKey(spec.format))] = {
        {"max_sentences", OptionalToJson(spec.max_sentences)},
        {"min_tokens", OptionalToJson(spec.min_tokens)},
        {"max_tokens", OptionalToJson(spec.max_tokens)},
        {"requires_alt_fusion", spec.requires_alt_fusion},
    };
  }
  return doc;
}

FormatSpecRegistry FormatSpecRegistry::FromJson(
    const nlohmann::json& doc, const FormatSpecRegistry& base) {
  if (!doc.is_object()) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "format spec config must be an object");
  }
  FormatSpecRegistry registry = base;
  for (const auto& [key, value] : doc.items()) {
    auto format = ParseFormatKey(key);
    if (!format) throw CurationError(ErrorCode::kUnknownFormatKey, key);
    if (!value.is_object()) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "spec for '" + key + "' must be an object");
    }
    FormatSpec spec = registry.Get(*format);
    ReadOptional(value, "max_sentences", &spec.max_sentences);
    ReadOptional(value, "min_tokens", &spec.min_tokens);
    ReadOptional(value, "max_tokens", &spec.max_tokens);
    if (auto it = value.find("requires_alt_fusion"); it != value.end()) {
      if (!it->is_boolean()) {
        throw CurationError(ErrorCode::kInvalidArgument,
                            "requires_alt_fusion must be a boolean");
      }
      spec.requires_alt_fusion = it->get<bool>();
    }
    registry.Set(spec);
  }
  return registry;
}

FormatSpecRegistry FormatSpecRegistry::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot open format specs " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        path.string() + ": " + e.what());
  }
  return FromJson(doc, Defaults());
}

void FormatSpecRegistry::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  out << ToJson().dump(2) << '\n';
  if (!out) {
    throw CurationError(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

std::string Violation::ToString() const {
  const char* op = constraint == "min_tokens" || constraint == "alt_fusion"
                       ? " < "
                       : " > ";
  return constraint + ": measured " + std::to_string(measured) + op +
         std::to_string(limit);
}

ValidationReport Validate(std::string_view caption, CaptionFormat format,
                          const FormatSpecRegistry& specs,
                          const TokenizerScheme& scheme,
                          std::optional<std::string_view> alt_text) {
  if (TrimSpace(caption).empty()) {
    throw CurationError(ErrorCode::kEmptyCaption,
                        std::string(FormatDisplayName(format)));
  }
  const FormatSpec& spec = specs.Get(format);
  ValidationReport report;
  report.token_count = scheme.Count(caption);
  report.sentence_count = SplitSentences(caption).spans.size();

  if (spec.max_sentences && report.sentence_count > *spec.max_sentences) {
    report.violations.push_back(
        {"max_sentences", report.sentence_count, *spec.max_sentences});
  }
  if (spec.min_tokens && report.token_count < *spec.min_tokens) {
    report.violations.push_back(
        {"min_tokens", report.token_count, *spec.min_tokens});
  }
  if (spec.max_tokens && report.token_count > *spec.max_tokens) {
    report.violations.push_back(
        {"max_tokens", report.token_count, *spec.max_tokens});
  }
  if (spec.requires_alt_fusion && alt_text) {
    const auto alt_words = ContentWords(*alt_text, scheme);
    const auto caption_words = ContentWords(caption, scheme);
    std::vector<std::string> shared;
    std::set_intersection(alt_words.begin(), alt_words.end(),
                          caption_words.begin(), caption_words.end(),
                          std::back_inserter(shared));
    if (shared.empty()) report.violations.push_back({"alt_fusion", 0, 1});
  }
  report.pass = report.violations.empty();
  return report;
}

std::optional<CaptionFormat> Classify(std::string_view caption,
                                      const FormatSpecRegistry& specs,
                                      const TokenizerScheme& scheme) {
  for (CaptionFormat f :
       {CaptionFormat::kSsc, CaptionFormat::kDsc, CaptionFormat::kDscPlus}) {
    if (Validate(caption, f, specs, scheme).pass) return f;
  }
  return std::nullopt;
}

}  // namespace capcurate
