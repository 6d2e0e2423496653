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


#include "capcurate/recaption.h"

#include <fstream>
#include <mutex>

#include "capcurate/text_util.h"

namespace capcurate {
namespace {

[[noreturn]] void TemplateFail(std::string_view tmpl, const std::string& why) {
  throw CurationError(ErrorCode::kTemplateError,
                      why + " in template \"" + std::string(tmpl) + "\"");
}

// Expands the template; with `record` null only checks it.
std::string Expand(std::string_view tmpl, const CaptionRecord* record) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out += '{';
      ++i;
      continue;
    }
    if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out += '}';
      ++i;
      continue;
    }
    if (c == '}') TemplateFail(tmpl, "unbalanced '}'");
    if (c != '{') {
      out += c;
      continue;
    }
    const std::size_t close = tmpl.find('}', i);
    if (close == std::string_view::npos) TemplateFail(tmpl, "unclosed '{'");
    const std::string_view name = tmpl.substr(i + 1, close - i - 1);
    std::string value;
    if (name == "alt_text") {
      if (record && record->alt_text) value = *record->alt_text;
    } else if (name == "ocr_text") {
      if (record && record->ocr_text) value = *record->ocr_text;
    } else if (name == "id") {
      if (record) value = record->id;
    } else if (name == "image_ref") {
      if (record) value = record->image_ref;
    } else {
      TemplateFail(tmpl, "unknown placeholder {" + std::string(name) + "}");
    }
    out += value;
    i = close;
  }
  return out;
}

bool IsWordByte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

PromptTemplates PromptTemplates::Defaults() {
  PromptTemplates t;
  t.templates_[CaptionFormat::kAltText] = "Write alt-text for the image.";
  t.templates_[CaptionFormat::kSsc] =
      "Describe the image in one concise sentence.";
  t.templates_[CaptionFormat::kDsc] =
      "Describe the image in detail in at most 78 tokens.";
  t.templates_[CaptionFormat::kDscPlus] =
      "Describe the image comprehensively, including background and setting.";
  t.templates_[CaptionFormat::kAfc] =
      "Describe the image in detail; integrate this alt-text where accurate: "
      "{alt_text}";
  return t;
}

const std::string& PromptTemplates::Get(CaptionFormat format) const {
  return templates_.at(format);
}

void PromptTemplates::Set(CaptionFormat format, std::string text) {
  Expand(text, nullptr);
  templates_[format] = std::move(text);
}

nlohmann::json PromptTemplates::ToJson() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [format, text] : templates_) {
    doc[std::string(FormatKey(format))] = text;
  }
  return doc;
}

PromptTemplates PromptTemplates::FromJson(const nlohmann::json& doc,
                                          const PromptTemplates& base) {
  if (!doc.is_object()) {
    throw CurationError(ErrorCode::kTemplateError,
                        "prompt templates must be a JSON object");
  }
  PromptTemplates out = base;
  for (const auto& [key, value] : doc.items()) {
    const auto format = ParseFormatKey(key);
    if (!format) {
      throw CurationError(ErrorCode::kTemplateError,
                          "unknown format key '" + key + "'");
    }
    if (!value.is_string()) {
      throw CurationError(ErrorCode::kTemplateError,
                          "template for '" + key + "' must be a string");
    }
    out.Set(*format, value.get<std::string>());
  }
  return out;
}

PromptTemplates PromptTemplates::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot read templates " + path.string());
  }
  try {
    return FromJson(nlohmann::json::parse(in), Defaults());
  } catch (const nlohmann::json::exception& e) {
    throw CurationError(ErrorCode::kTemplateError,
                        "bad templates " + path.string() + ": " + e.what());
  }
}

std::string RenderPrompt(std::string_view prompt_template,
                         const CaptionRecord& record) {
  return Expand(prompt_template, &record);
}

nlohmann::json RecaptionSummary::ToJson() const {
  return {{"requested", requested},     {"succeeded", succeeded},
          {"failed", failed},           {"missing_alt", missing_alt},
          {"skipped_done", skipped_done}, {"error_records", error_records}};
}

RecaptionSummary RecaptionBatch(
    RecordStream& records, CaptionFormat format, Provider& provider,
    const PromptTemplates& templates,
    const std::function<void(const RecaptionResult&, const CaptionRecord&)>& sink,
    const RecaptionOptions& options) {
  const std::string& tmpl = templates.Get(format);
  Expand(tmpl, nullptr);
  const std::size_t workers =
      options.workers > 0 ? options.workers : provider.max_in_flight();

  RecaptionSummary summary;
  std::mutex mu;
  const auto deliver = [&](const RecaptionResult& result,
                           const CaptionRecord& record) {
    std::lock_guard<std::mutex> lock(mu);
    if (result.caption) {
      ++summary.succeeded;
    } else if (result.error && result.error->code == ErrorCode::kMissingAltText) {
      ++summary.missing_alt;
    } else {
      ++summary.failed;
    }
    sink(result, record);
  };

  BoundedPool pool(workers, workers * 2);
  while (auto item = records.Next()) {
    auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) {
      std::lock_guard<std::mutex> lock(mu);
      ++summary.error_records;
      continue;
    }
    if (options.done_ids.contains(record->id)) {
      std::lock_guard<std::mutex> lock(mu);
      ++summary.skipped_done;
      continue;
    }
    {
      std::lock_guard<std::mutex> lock(mu);
      ++summary.requested;
    }
    if (format == CaptionFormat::kAfc &&
        record->Text(CaptionFormat::kAltText) == nullptr) {
      RecaptionResult result;
      result.id = record->id;
      result.error = Error{ErrorCode::kMissingAltText,
                           "record " + record->id + " has no alt_text"};
      deliver(result, *record);
      continue;
    }
    if (pool.has_error()) break;
    pool.Submit([&, rec = std::move(*record)] {
      RecaptionResult result;
      result.id = rec.id;
      ProviderRequest request;
      request.id = rec.id;
      request.image_ref = rec.image_ref;
      request.prompt = RenderPrompt(tmpl, rec);
      request.format = std::string(FormatKey(format));
      try {
        result.caption = provider.Call(Route::kCaption, request).text;
      } catch (const CurationError& e) {
        result.error = e.error();
      }
      deliver(result, rec);
    });
  }
  pool.Wait();
  return summary;
}

std::size_t RepeatedNgramOccurrences(std::string_view text, std::size_t n,
                                     const TokenizerScheme& scheme) {
  if (n == 0) return 0;
  const std::vector<std::string> tokens = scheme.Tokenize(text).tokens;
  if (tokens.size() < n) return 0;
  std::map<std::vector<std::string>, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  std::size_t repeated = 0;
  for (const auto& [gram, count] : counts) repeated += count - 1;
  return repeated;
}

QualityVerdict QualityPostProcess(std::string_view caption, CaptionFormat format,
                                  const FormatSpecRegistry& specs,
                                  const TokenizerScheme& scheme,
                                  const QualityConfig& config,
                                  std::optional<std::string_view> alt_text) {
  std::string text = CollapseWhitespace(caption);
  for (const std::string& prefix : config.boilerplate_prefixes) {
    if (!StartsWithIgnoreAsciiCase(text, prefix)) continue;
    if (text.size() > prefix.size() && IsWordByte(prefix.back()) &&
        IsWordByte(text[prefix.size()])) {
      continue;
    }
    std::size_t cut = prefix.size();
    while (cut < text.size() && (text[cut] == ' ' || text[cut] == ':' ||
                                 text[cut] == ',' || text[cut] == '-')) {
      ++cut;
    }
    text.erase(0, cut);
    if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') {
      text[0] = static_cast<char>(text[0] - 'a' + 'A');
    }
    break;
  }
  if (TrimSpace(text).empty()) return QualityVerdict::Reject("empty");

  const ValidationReport report =
      Validate(text, format, specs, scheme, alt_text);
  if (!report.pass) {
    return QualityVerdict::Reject(report.violations.front().constraint);
  }
  if (RepeatedNgramOccurrences(text, config.ngram, scheme) >
      config.max_repeated_ngrams) {
    return QualityVerdict::Reject("repetition");
  }
  if (config.model_check) {
    if (auto reason = config.model_check(text, format)) {
      return QualityVerdict::Reject("model:" + *reason);
    }
  }
  return QualityVerdict::Accept(std::move(text));
}

}  // namespace capcurate
