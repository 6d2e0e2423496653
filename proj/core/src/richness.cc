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

#include "capcurate/richness.h"

#include <algorithm>
#include <queue>

#include "capcurate/error.h"
#include "capcurate/stable_hash.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

constexpr std::uint64_t kEntitySampleSalt = 0x656e7469747973ULL;  // "entitys"

std::string Slice(std::string_view text, const TextSpan& span) {
  return std::string(text.substr(span.begin, span.size()));
}

// ---- assertion clause heuristics ------------------------------------------

bool IsFiniteAuxiliary(std::string_view w) {
  static constexpr std::string_view kAux[] = {
      "am",   "are",   "can",  "could", "did",  "do",    "does",
      "had",  "has",   "have", "is",    "may",  "might", "must",
      "shall", "should", "was", "were", "will", "would"};
  return std::find(std::begin(kAux), std::end(kAux), w) != std::end(kAux);
}

bool IsNounModifier(std::string_view w) {
  static constexpr std::string_view kWords[] = {
      "a",     "an",      "the",   "this",  "that",  "these", "those",
      "some",  "many",    "several", "few", "multiple", "various", "its",
      "his",   "her",     "their", "our",   "my",    "your",  "of",
      "with",  "in",      "on",    "at",    "by",    "and",   "or",
      "two",   "three",   "four",  "five",  "six",   "seven", "eight",
      "nine",  "ten",     "both",  "no",    "other", "each",  "every"};
  if (HasAsciiDigit(w)) return true;
  return std::find(std::begin(kWords), std::end(kWords), w) != std::end(kWords);
}

bool LooksLikeSuffixVerb(std::string_view w) {
  if (w.size() <= 3) return false;
  if (w.ends_with("ed")) return true;
  if (!w.ends_with("s")) return false;
  return !(w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") ||
           w.ends_with("'s"));
}

// `words` are lowercased tokens of one clause candidate.
bool IsFiniteClause(const std::vector<std::string>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (IsFiniteAuxiliary(words[i])) return true;
    if (i > 0 && LooksLikeSuffixVerb(words[i]) &&
        HasWordCharacter(words[i - 1]) && !IsNounModifier(words[i - 1])) {
      return true;
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

BinSpec BinSpec::Default() { return Uniform(5, 200); }

BinSpec BinSpec::Uniform(std::int64_t width, std::int64_t max) {
  if (width < 1 || max < width) {
    throw CurationError(ErrorCode::kInvalidArgument, "bad uniform bin spec");
  }
  BinSpec spec;
  for (std::int64_t edge = 0; edge < max; edge += width) {
    spec.edges.push_back(edge);
  }
  spec.edges.push_back(max);
  return spec;
}

Histogram::Histogram(const BinSpec& spec)
    : bin_edges(spec.edges), has_overflow(spec.overflow) {
  if (bin_edges.size() < 2) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "histogram needs at least one bin");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (bin_edges[i] <= bin_edges[i - 1]) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "histogram edges must be strictly ascending");
    }
  }
  counts.assign(bin_edges.size() - 1, 0);
}

void Histogram::Add(std::int64_t value) {
  ++total;
  if (value < bin_edges.front()) {
    ++underflow;
    return;
  }
  if (value >= bin_edges.back()) {
    if (has_overflow) {
      ++overflow;
    } else {
      ++counts.back();
    }
    return;
  }
  // First edge strictly greater than value closes its bin.
  const auto it =
      std::upper_bound(bin_edges.begin(), bin_edges.end(), value);
  ++counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1];
}

void Histogram::Merge(const Histogram& other) {
  if (other.bin_edges != bin_edges || other.has_overflow != has_overflow) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "cannot merge histograms with different bins");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  overflow += other.overflow;
  underflow += other.underflow;
  total += other.total;
  skipped += other.skipped;
}

nlohmann::json Histogram::ToJson() const {
  nlohmann::json doc = {{"bin_edges", bin_edges},
                        {"counts", counts},
                        {"total", total},
                        {"skipped", skipped},
                        {"underflow", underflow}};
  if (has_overflow) doc["overflow"] = overflow;
  return doc;
}

std::string Histogram::ToCsv() const {
  std::string csv = "bin_start,bin_end,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    csv += std::to_string(bin_edges[i]) + "," +
           std::to_string(bin_edges[i + 1]) + "," + std::to_string(counts[i]) +
           "\n";
  }
  if (has_overflow) {
    csv += std::to_string(bin_edges.back()) + ",inf," +
           std::to_string(overflow) + "\n";
  }
  return csv;
}

Histogram TokenLengthHistogram(RecordStream& records, CaptionFormat format,
                               const BinSpec& bins,
                               const TokenizerScheme& scheme) {
  Histogram histogram(bins);
  while (auto item = records.Next()) {
    const auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) continue;
    const std::string* text = record->Text(format);
    if (text == nullptr) {
      ++histogram.skipped;
      continue;
    }
    histogram.Add(static_cast<std::int64_t>(scheme.Count(*text)));
  }
  return histogram;
}

// ---------------------------------------------------------------------------

std::string NormalizeEntity(std::string_view entity) {
  return ToLowerUtf8(CollapseWhitespace(entity));
}

std::set<std::string> HeuristicEntityExtractor::Extract(
    std::string_view caption) {
  std::set<std::string> entities;
  const WordPunctScheme segmenter;
  std::vector<TextSpan> spans;
  for (const TextSpan& sentence : SplitSentences(caption).spans) {
    const std::string_view text =
        caption.substr(sentence.begin, sentence.size());
    spans.clear();
    segmenter.Segment(text, spans);

    std::vector<std::string> run;
    const auto close_run = [&] {
      if (!run.empty()) entities.insert(NormalizeEntity(JoinStrings(run, " ")));
      run.clear();
    };
    bool seen_word = false;
    for (const TextSpan& span : spans) {
      const std::string token = Slice(text, span);
      if (!HasWordCharacter(token)) {
        close_run();
        continue;
      }
      std::size_t pos = 0;
      const char32_t first = DecodeUtf8(token, pos);
      const bool capitalized = IsUppercaseCodePoint(first);
      const bool has_digit = HasAsciiDigit(token);
      std::size_t capitals = 0;
      bool all_capitals = true;
      for (std::size_t p = 0; p < token.size();) {
        const char32_t cp = DecodeUtf8(token, p);
        if (IsUppercaseCodePoint(cp)) {
          ++capitals;
        } else if (ToLowerCodePoint(cp) == cp && !IsAsciiDigit(cp) &&
                   cp != U'-' && cp != U'\'') {
          all_capitals = false;
        }
      }
      const bool acronym = all_capitals && capitals >= 2;
      const bool initial = !seen_word;
      seen_word = true;

      if (initial && !has_digit && !acronym) {
        close_run();
        continue;
      }
      if (capitalized) {
        run.push_back(token);
      } else if (has_digit) {
        if (run.empty()) {
          entities.insert(NormalizeEntity(token));
        } else {
          run.push_back(token);
        }
      } else {
        close_run();
      }
    }
    close_run();
  }
  return entities;
}

std::set<std::string> ProviderEntityExtractor::Extract(
    std::string_view caption) {
  ProviderRequest request;
  request.id = "entities";
  request.prompt = RenderAssertionPrompt(prompt_, caption);
  request.text = std::string(caption);
  std::set<std::string> entities;
  for (const std::string& line :
       ParseListReply(provider_.Call(Route::kAssert, request).text)) {
    std::string normalized = NormalizeEntity(line);
    if (!normalized.empty()) entities.insert(std::move(normalized));
  }
  return entities;
}

nlohmann::json EntityReport::ToJson() const {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [source, count] : unique_counts) {
    counts[std::string(FormatKey(source))] = count;
  }
  nlohmann::json doc = {
      {"unique_entities", counts}, {"sample_size", sample_size}, {"seed", seed}};
  if (entities) {
    nlohmann::json sets = nlohmann::json::object();
    for (const auto& [source, set] : *entities) {
      sets[std::string(FormatKey(source))] = set;
    }
    doc["entities"] = std::move(sets);
  }
  return doc;
}

EntityReport EntityDiversity(RecordStream& records,
                             std::span<const CaptionFormat> sources,
                             EntityExtractor& extractor,
                             std::uint64_t sample_size, std::uint64_t seed,
                             bool retain_sets) {
  if (sample_size < 1) {
    throw CurationError(ErrorCode::kInvalidArgument, "sample_size must be >= 1");
  }
  // Bottom-k by (hash, id): a max-heap holding the k smallest keys.
  struct Entry {
    std::uint64_t hash;
    CaptionRecord record;
    bool operator<(const Entry& o) const {
      return hash != o.hash ? hash < o.hash : record.id < o.record.id;
    }
  };
  std::priority_queue<Entry> heap;
  while (auto item = records.Next()) {
    auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) continue;
    Entry entry{StableHash64(seed, record->id, kEntitySampleSalt),
                std::move(*record)};
    if (heap.size() < sample_size) {
      heap.push(std::move(entry));
    } else if (entry < heap.top()) {
      heap.pop();
      heap.push(std::move(entry));
    }
  }

  std::map<CaptionFormat, std::set<std::string>> sets;
  for (CaptionFormat source : sources) sets[source];
  EntityReport report;
  report.seed = seed;
  report.sample_size = heap.size();
  while (!heap.empty()) {
    const CaptionRecord& record = heap.top().record;
    for (CaptionFormat source : sources) {
      if (const std::string* text = record.Text(source)) {
        auto found = extractor.Extract(*text);
        sets[source].insert(found.begin(), found.end());
      }
    }
    heap.pop();
  }
  for (const auto& [source, set] : sets) report.unique_counts[source] = set.size();
  if (retain_sets) report.entities = std::move(sets);
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::string> RuleBasedAssertions(std::string_view caption) {
  std::vector<std::string> assertions;
  const WordPunctScheme segmenter;
  std::vector<TextSpan> spans;
  for (const TextSpan& sentence : SplitSentences(caption).spans) {
    const std::string_view text =
        caption.substr(sentence.begin, sentence.size());
    spans.clear();
    segmenter.Segment(text, spans);

    // Pieces are maximal token ranges between "and" / "," separators.
    struct Piece {
      std::size_t first;
      std::size_t last;  // inclusive
    };
    std::vector<Piece> pieces;
    std::vector<std::string> lower(spans.size());
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t open = kNone;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      lower[i] = ToLowerUtf8(Slice(text, spans[i]));
      const bool separator = lower[i] == "and" || lower[i] == ",";
      if (separator) {
        if (open != kNone) pieces.push_back({open, i - 1});
        open = kNone;
      } else if (open == kNone) {
        open = i;
      }
    }
    if (open != kNone) pieces.push_back({open, spans.size() - 1});
    if (pieces.empty()) continue;

    const auto is_clause = [&](const Piece& p) {
      std::vector<std::string> words(lower.begin() + p.first,
                                     lower.begin() + p.last + 1);
      return IsFiniteClause(words);
    };
    const auto emit = [&](Piece p) {
      while (p.last > p.first && !HasWordCharacter(lower[p.last])) --p.last;
      if (!HasWordCharacter(lower[p.last])) return;
      const std::size_t b = spans[p.first].begin;
      const std::size_t e = spans[p.last].end;
      assertions.emplace_back(text.substr(b, e - b));
    };
    Piece current = pieces.front();
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      if (is_clause(current) && is_clause(pieces[k])) {
        emit(current);
        current = pieces[k];
      } else {
        current.last = pieces[k].last;
      }
    }
    emit(current);
  }
  return assertions;
}

std::string RenderAssertionPrompt(std::string_view prompt_template,
                                  std::string_view caption) {
  std::string prompt(prompt_template);
  prompt += "\n\nCaption: ";
  prompt.append(caption);
  return prompt;
}

std::vector<std::string> ParseListReply(std::string_view reply) {
  std::vector<std::string> lines;
  for (std::string_view line : SplitString(reply, '\n')) {
    line = TrimSpace(line);
    if (line.starts_with("- ") || line.starts_with("* ") ||
        line.starts_with("\xE2\x80\xA2 ")) {
      line = TrimSpace(line.substr(line.find(' ') + 1));
    } else {
      std::size_t digits = 0;
      while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') {
        ++digits;
      }
      if (digits > 0 && digits + 1 < line.size() &&
          (line[digits] == '.' || line[digits] == ')') &&
          line[digits + 1] == ' ') {
        line = TrimSpace(line.substr(digits + 2));
      }
    }
    if (line.empty()) continue;
    std::string owned(line);
    if (std::find(lines.begin(), lines.end(), owned) == lines.end()) {
      lines.push_back(std::move(owned));
    }
  }
  return lines;
}

std::vector<std::string> ProviderAssertionExtractor::Extract(
    std::string_view caption, std::string_view caption_id) {
  if (TrimSpace(caption).empty()) return {};
  ProviderRequest request;
  request.id = std::string(caption_id);
  request.prompt = RenderAssertionPrompt(prompt_template_, caption);
  request.text = std::string(caption);
  return ParseListReply(provider_.Call(Route::kAssert, request).text);
}

std::vector<Assertion> ExtractAssertions(std::string_view caption,
                                         std::string_view caption_id,
                                         AssertionExtractor& extractor) {
  std::vector<Assertion> out;
  if (TrimSpace(caption).empty()) return out;
  for (std::string& text : extractor.Extract(caption, caption_id)) {
    out.push_back({std::move(text), std::string(caption_id)});
  }
  return out;
}

double AnaStats::Mean() const {
  return captions == 0 ? 0.0
                       : static_cast<double>(assertions) /
                             static_cast<double>(captions);
}

void AnaStats::Merge(const AnaStats& other) {
  captions += other.captions;
  assertions += other.assertions;
}

AnaStats AnaReport::Totals() const {
  AnaStats totals;
  for (const auto& [format_key, stats] : per_format) {
    if (!format || format_key == *format) totals.Merge(stats);
  }
  return totals;
}

double AnaReport::ana() const { return Totals().Mean(); }

void AnaReport::Merge(const AnaReport& other) {
  for (const auto& [f, stats] : other.per_format) per_format[f].Merge(stats);
  partial = partial || other.partial;
  if (error.empty()) error = other.error;
}

nlohmann::json AnaReport::ToJson() const {
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [f, stats] : per_format) {
    table[std::string(FormatKey(f))] = {{"captions", stats.captions},
                                        {"assertions", stats.assertions},
                                        {"ana", stats.Mean()}};
  }
  const AnaStats totals = Totals();
  nlohmann::json doc = {{"per_format", table},
                        {"captions", totals.captions},
                        {"assertions", totals.assertions},
                        {"empty", totals.captions == 0},
                        {"partial", partial}};
  if (format) {
    doc["format"] = std::string(FormatKey(*format));
    doc["ana"] = totals.Mean();
  }
  if (!error.empty()) doc["error"] = error;
  return doc;
}

AnaReport Ana(RecordStream& records, std::optional<CaptionFormat> format,
              AssertionExtractor& extractor) {
  AnaReport report;
  report.format = format;
  if (format) report.per_format[*format];
  try {
    while (auto item = records.Next()) {
      const auto* record = std::get_if<CaptionRecord>(&*item);
      if (record == nullptr) continue;
      for (CaptionFormat f : kAllFormats) {
        if (format && f != *format) continue;
        const std::string* text = record->Text(f);
        if (text == nullptr) continue;
        const auto assertions = ExtractAssertions(*text, record->id, extractor);
        AnaStats& stats = report.per_format[f];
        ++stats.captions;
        stats.assertions += assertions.size();
      }
    }
  } catch (const CurationError& e) {
    if (e.code() != ErrorCode::kProviderFailure) throw;
    report.partial = true;
    report.error = e.what();
  }
  return report;
}

}  // namespace capcurate
