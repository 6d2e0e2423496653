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


#include "capcurate/hallucination.h"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "capcurate/error.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::vector<std::string> NormalizedTokens(std::string_view text,
                                          const TokenizerScheme& scheme) {
  return scheme.Tokenize(text).tokens;
}

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string PluralOf(std::string_view word) {
  static const std::map<std::string_view, std::string_view> kIrregular = {
      {"person", "people"}, {"man", "men"},           {"woman", "women"},
      {"child", "children"}, {"mouse", "mice"},       {"knife", "knives"},
      {"foot", "feet"},      {"tooth", "teeth"},      {"goose", "geese"},
      {"leaf", "leaves"},    {"shelf", "shelves"},    {"wolf", "wolves"}};
  if (auto it = kIrregular.find(word); it != kIrregular.end()) {
    return std::string(it->second);
  }
  std::string out(word);
  if (word.ends_with("s") || word.ends_with("x") || word.ends_with("z") ||
      word.ends_with("ch") || word.ends_with("sh")) {
    out += "es";
  } else if (word.size() >= 2 && word.back() == 'y' &&
             !IsVowel(word[word.size() - 2])) {
    out.back() = 'i';
    out += "es";
  } else {
    out += "s";
  }
  return out;
}

ObjectVocabulary::ObjectVocabulary(std::set<std::string> canonical_objects,
                                   std::map<std::string, std::string> synonyms,
                                   const TokenizerScheme& scheme)
    : scheme_(&scheme) {
  for (const std::string& name : canonical_objects) {
    std::string folded = ToLowerUtf8(CollapseWhitespace(name));
    if (folded.empty()) {
      throw CurationError(ErrorCode::kInvalidArgument, "empty object name");
    }
    canonical_.insert(std::move(folded));
  }
  for (const auto& [surface, target] : synonyms) {
    std::string s = ToLowerUtf8(CollapseWhitespace(surface));
    std::string t = ToLowerUtf8(CollapseWhitespace(target));
    if (s.empty()) {
      throw CurationError(ErrorCode::kInvalidArgument, "empty synonym");
    }
    if (!canonical_.contains(t)) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "synonym '" + s + "' targets unknown object '" + t +
                              "'");
    }
    synonyms_[std::move(s)] = std::move(t);
  }
  Compile();
}

void ObjectVocabulary::AddForm(std::vector<std::string> tokens,
                               const std::string& canonical, bool generated) {
  if (tokens.empty()) return;
  if (generated) {
    if (explicit_forms_.contains(tokens)) return;
    forms_.try_emplace(std::move(tokens), canonical);
    return;
  }
  max_form_tokens_ = std::max(max_form_tokens_, tokens.size());
  explicit_forms_.insert(tokens);
  forms_[std::move(tokens)] = canonical;
}

void ObjectVocabulary::Compile() {
  std::vector<std::pair<std::vector<std::string>, std::string>> explicit_forms;
  for (const std::string& name : canonical_) {
    explicit_forms.emplace_back(NormalizedTokens(name, *scheme_), name);
  }
  for (const auto& [surface, target] : synonyms_) {
    explicit_forms.emplace_back(NormalizedTokens(surface, *scheme_), target);
  }
  for (auto& [tokens, canonical] : explicit_forms) {
    AddForm(tokens, canonical, false);
  }
  for (auto& [tokens, canonical] : explicit_forms) {
    if (tokens.empty()) continue;
    std::vector<std::string> plural = tokens;
    plural.back() = PluralOf(plural.back());
    AddForm(std::move(plural), canonical, true);
  }
}

const ObjectVocabulary& ObjectVocabulary::Default() {
  static const ObjectVocabulary kDefault = Parse(DefaultVocabularyText());
  return kDefault;
}

ObjectVocabulary ObjectVocabulary::Parse(std::string_view text,
                                         const TokenizerScheme& scheme) {
  std::set<std::string> canonical;
  std::map<std::string, std::string> synonyms;
  std::size_t line_number = 0;
  for (std::string_view line : SplitString(text, '\n')) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (TrimSpace(line).empty() || TrimSpace(line).starts_with('#')) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      canonical.insert(std::string(TrimSpace(line)));
      continue;
    }
    const std::string_view surface = TrimSpace(line.substr(0, tab));
    const std::string_view target = TrimSpace(line.substr(tab + 1));
    if (surface.empty() || target.empty() ||
        target.find('\t') != std::string_view::npos) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "vocabulary line " + std::to_string(line_number) +
                              ": expected 'synonym<TAB>canonical'");
    }
    synonyms[std::string(surface)] = std::string(target);
  }
  return ObjectVocabulary(std::move(canonical), std::move(synonyms), scheme);
}

ObjectVocabulary ObjectVocabulary::Load(const std::filesystem::path& path,
                                        const TokenizerScheme& scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot read vocabulary " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), scheme);
}

std::optional<std::string> ObjectVocabulary::Canonicalize(
    std::string_view surface) const {
  const auto it = forms_.find(NormalizedTokens(surface, *scheme_));
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

std::vector<ObjectMention> FindMentions(std::string_view caption,
                                        const ObjectVocabulary& vocab) {
  std::vector<ObjectMention> mentions;
  const TokenizerScheme& scheme = vocab.scheme();
  const auto& forms = vocab.forms();
  const SentenceSplit split = SplitSentences(caption);
  std::vector<TextSpan> spans;
  std::vector<std::string> tokens;
  std::vector<std::string> window;
  for (std::size_t s = 0; s < split.spans.size(); ++s) {
    const TextSpan sentence = split.spans[s];
    const std::string_view text =
        caption.substr(sentence.begin, sentence.size());
    spans.clear();
    scheme.Segment(text, spans);
    tokens.clear();
    for (const TextSpan& span : spans) {
      tokens.push_back(scheme.Normalize(text.substr(span.begin, span.size())));
    }
    std::size_t i = 0;
    while (i < tokens.size()) {
      std::size_t matched = 0;
      const std::size_t longest =
          std::min(vocab.max_form_tokens(), tokens.size() - i);
      for (std::size_t len = longest; len >= 1; --len) {
        window.assign(tokens.begin() + i, tokens.begin() + i + len);
        const auto it = forms.find(window);
        if (it != forms.end()) {
          mentions.push_back(
              {it->second, s,
               {sentence.begin + spans[i].begin,
                sentence.begin + spans[i + len - 1].end}});
          matched = len;
          break;
        }
      }
      i += matched == 0 ? 1 : matched;
    }
  }
  return mentions;
}

std::map<std::string, std::size_t> MentionedObjects(
    std::string_view caption, const ObjectVocabulary& vocab) {
  std::map<std::string, std::size_t> counts;
  for (const ObjectMention& m : FindMentions(caption, vocab)) {
    ++counts[m.canonical];
  }
  return counts;
}

void ChairReport::Finalize() {
  chair_i = Ratio(hallucinated_instances, mentioned_instances);
  chair_s = Ratio(flagged_sentences, total_sentences);
  chair_i_undefined = mentioned_instances == 0;
  chair_s_undefined = total_sentences == 0;
}

void ChairReport::Merge(const ChairReport& other) {
  hallucinated_instances += other.hallucinated_instances;
  mentioned_instances += other.mentioned_instances;
  flagged_sentences += other.flagged_sentences;
  total_sentences += other.total_sentences;
  scored_records += other.scored_records;
  skipped_no_gt += other.skipped_no_gt;
  skipped_no_caption += other.skipped_no_caption;
  error_records += other.error_records;
  Finalize();
}

nlohmann::json ChairReport::ToJson() const {
  return {{"chair_i", chair_i},
          {"chair_s", chair_s},
          {"chair_i_undefined", chair_i_undefined},
          {"chair_s_undefined", chair_s_undefined},
          {"hallucinated_instances", hallucinated_instances},
          {"mentioned_instances", mentioned_instances},
          {"flagged_sentences", flagged_sentences},
          {"total_sentences", total_sentences},
          {"scored_records", scored_records},
          {"skipped_no_gt", skipped_no_gt},
          {"skipped_no_caption", skipped_no_caption},
          {"error_records", error_records}};
}

ChairReport ChairForCaption(std::string_view caption,
                            const std::set<std::string>& gt_objects,
                            const ObjectVocabulary& vocab) {
  std::set<std::string> truth;
  for (const std::string& object : gt_objects) {
    truth.insert(vocab.Canonicalize(object).value_or(ToLowerUtf8(object)));
  }
  ChairReport report;
  report.scored_records = 1;
  report.total_sentences = SplitSentences(caption).spans.size();
  std::set<std::size_t> flagged;
  for (const ObjectMention& m : FindMentions(caption, vocab)) {
    ++report.mentioned_instances;
    if (!truth.contains(m.canonical)) {
      ++report.hallucinated_instances;
      flagged.insert(m.sentence);
    }
  }
  report.flagged_sentences = flagged.size();
  report.Finalize();
  return report;
}

ChairReport Chair(RecordStream& records, CaptionFormat format,
                  const ObjectVocabulary& vocab) {
  ChairReport report;
  while (auto item = records.Next()) {
    const auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) {
      ++report.error_records;
      continue;
    }
    if (!record->gt_objects) {
      ++report.skipped_no_gt;
      continue;
    }
    const std::string* caption = record->Text(format);
    if (caption == nullptr) {
      ++report.skipped_no_caption;
      continue;
    }
    report.Merge(ChairForCaption(*caption, *record->gt_objects, vocab));
  }
  if (report.scored_records == 0) {
    throw CurationError(ErrorCode::kNoScorableRecords,
                        "no record has gt_objects and a " +
                            std::string(FormatKey(format)) + " caption");
  }
  report.Finalize();
  return report;
}

// ---------------------------------------------------------------------------

void CapScoreReport::Finalize() {
  undefined = assertions_total == 0;
  capscore = undefined ? 0.0
                       : 100.0 * static_cast<double>(assertions_verified) /
                             static_cast<double>(assertions_total);
  if (detail) {
    std::sort(detail->begin(), detail->end(),
              [](const CapScoreRecord& a, const CapScoreRecord& b) {
                return a.id < b.id;
              });
  }
}

void CapScoreReport::Add(const CapScoreRecord& record) {
  if (record.failed) {
    ++failed_records;
  } else {
    ++captions;
    assertions_total += record.assertions;
    assertions_verified += record.verified;
    assertions_unparseable += record.unparseable;
  }
  if (detail) detail->push_back(record);
}

nlohmann::json CapScoreReport::ToJson() const {
  nlohmann::json doc = {{"capscore", capscore},
                        {"undefined", undefined},
                        {"assertions_total", assertions_total},
                        {"assertions_verified", assertions_verified},
                        {"assertions_unparseable", assertions_unparseable},
                        {"captions", captions},
                        {"skipped_no_caption", skipped_no_caption},
                        {"failed_records", failed_records},
                        {"error_records", error_records}};
  if (detail) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CapScoreRecord& r : *detail) {
      nlohmann::json verdicts = nlohmann::json::array();
      for (const AssertionVerdict& v : r.verdicts) {
        verdicts.push_back({{"assertion", v.assertion},
                            {"answer", VqaAnswerName(v.answer)}});
      }
      nlohmann::json row = {{"id", r.id},
                            {"assertions", r.assertions},
                            {"verified", r.verified},
                            {"unparseable", r.unparseable},
                            {"failed", r.failed},
                            {"verdicts", verdicts}};
      if (!r.error.empty()) row["error"] = r.error;
      rows.push_back(std::move(row));
    }
    doc["detail"] = std::move(rows);
  }
  return doc;
}

CapScoreReport CapScore(RecordStream& records, CaptionFormat format,
                        AssertionExtractor& assertions, Provider& vqa,
                        const CapScoreOptions& options) {
  CapScoreReport report;
  if (options.keep_detail) report.detail.emplace();
  std::mutex mu;
  const std::size_t workers =
      options.workers > 0 ? options.workers : vqa.max_in_flight();

  const auto score = [&](const CaptionRecord& record,
                         const std::string& caption) {
    CapScoreRecord result;
    result.id = record.id;
    try {
      for (Assertion& a : ExtractAssertions(caption, record.id, assertions)) {
        const VqaAnswer answer = VqaAsk(record.id, record.image_ref,
                                        RenderVqaQuestion(a.text), vqa);
        ++result.assertions;
        if (answer == VqaAnswer::kYes) ++result.verified;
        if (answer == VqaAnswer::kUnparseable) ++result.unparseable;
        if (options.keep_detail) {
          result.verdicts.push_back({std::move(a.text), answer});
        }
      }
    } catch (const CurationError& e) {
      if (e.code() != ErrorCode::kProviderFailure ||
          options.on_failure == FailurePolicy::kAbort) {
        throw;
      }
      result = CapScoreRecord{};
      result.id = record.id;
      result.failed = true;
      result.error = e.what();
    }
    std::lock_guard<std::mutex> lock(mu);
    report.Add(result);
  };

  BoundedPool pool(workers, workers * 2);
  while (auto item = records.Next()) {
    auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) {
      ++report.error_records;
      continue;
    }
    const std::string* caption = record->Text(format);
    if (caption == nullptr) {
      ++report.skipped_no_caption;
      continue;
    }
    if (pool.has_error()) break;
    std::string text = *caption;
    pool.Submit([&score, rec = std::move(*record), text = std::move(text)] {
      score(rec, text);
    });
  }
  pool.Wait();
  report.Finalize();
  return report;
}

}  // namespace capcurate
