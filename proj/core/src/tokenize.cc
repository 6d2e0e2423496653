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

#include "capcurate/tokenize.h"

#include <algorithm>

#include "capcurate/error.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

enum class CharClass { kSpace, kWord, kPunct, kIdeograph };

CharClass Classify(char32_t cp) {
  if (IsSpaceCodePoint(cp) || IsIgnorableCodePoint(cp)) return CharClass::kSpace;
  if (IsStandaloneIdeograph(cp)) return CharClass::kIdeograph;
  if (IsPunctuationCodePoint(cp)) return CharClass::kPunct;
  return CharClass::kWord;
}

bool IsLetter(char32_t cp) {
  return Classify(cp) == CharClass::kWord && !IsAsciiDigit(cp);
}

bool IsApostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }
bool IsHyphen(char32_t cp) { return cp == U'-' || cp == 0x2010; }

bool IsTerminal(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x2026 ||
         cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F;
}

bool IsClosing(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U')' || cp == U']' ||
         cp == 0x2019 || cp == 0x201D || cp == 0xBB;
}

bool IsOpening(char c) { return c == '(' || c == '"' || c == '\'' || c == '['; }

}  // namespace

std::size_t TokenizerScheme::Count(std::string_view text) const {
  std::vector<TextSpan> spans;
  Segment(text, spans);
  return spans.size();
}

std::string TokenizerScheme::Normalize(std::string_view raw_token) const {
  return lowercases() ? ToLowerUtf8(raw_token) : std::string(raw_token);
}

TokenSequence TokenizerScheme::Tokenize(std::string_view text) const {
  std::vector<TextSpan> spans;
  Segment(text, spans);
  TokenSequence seq;
  seq.scheme = std::string(name());
  seq.tokens.reserve(spans.size());
  for (const TextSpan& s : spans) {
    seq.tokens.push_back(Normalize(text.substr(s.begin, s.size())));
  }
  return seq;
}

void WordPunctScheme::Segment(std::string_view text,
                              std::vector<TextSpan>& spans) const {
  std::size_t pos = 0;
  std::size_t word_begin = std::string_view::npos;
  char32_t prev = 0;  // last code point of the current word
  const auto close_word = [&](std::size_t end) {
    if (word_begin != std::string_view::npos) {
      spans.push_back({word_begin, end});
      word_begin = std::string_view::npos;
    }
  };
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = DecodeUtf8(text, pos);
    switch (Classify(cp)) {
      case CharClass::kWord:
        if (word_begin == std::string_view::npos) word_begin = start;
        prev = cp;
        break;
      case CharClass::kSpace:
        close_word(start);
        break;
      case CharClass::kIdeograph:
        close_word(start);
        spans.push_back({start, pos});
        break;
      case CharClass::kPunct: {
        if (word_begin != std::string_view::npos && pos < text.size()) {
          std::size_t peek = pos;
          const char32_t next = DecodeUtf8(text, peek);
          const bool next_word = Classify(next) == CharClass::kWord;
          const bool joins =
              (IsApostrophe(cp) && IsLetter(prev) && IsLetter(next)) ||
              (IsHyphen(cp) && next_word) ||
              ((cp == U'.' || cp == U',') && IsAsciiDigit(prev) &&
               IsAsciiDigit(next));
          if (joins) {
            prev = cp;
            break;
          }
        }
        close_word(start);
        spans.push_back({start, pos});
        break;
      }
    }
  }
  close_word(text.size());
}

void WhitespaceScheme::Segment(std::string_view text,
                               std::vector<TextSpan>& spans) const {
  std::size_t pos = 0;
  std::size_t begin = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = DecodeUtf8(text, pos);
    if (IsSpaceCodePoint(cp)) {
      if (begin != std::string_view::npos) spans.push_back({begin, start});
      begin = std::string_view::npos;
    } else if (begin == std::string_view::npos) {
      begin = start;
    }
  }
  if (begin != std::string_view::npos) spans.push_back({begin, text.size()});
}

TokenizerRegistry& TokenizerRegistry::Global() {
  static TokenizerRegistry* registry = new TokenizerRegistry();
  return *registry;
}

TokenizerRegistry::TokenizerRegistry() {
  schemes_.emplace("word-punct", std::make_shared<WordPunctScheme>());
  schemes_.emplace("whitespace", std::make_shared<WhitespaceScheme>());
}

void TokenizerRegistry::Register(
    std::shared_ptr<const TokenizerScheme> scheme) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string name(scheme->name());
  if (!schemes_.emplace(name, std::move(scheme)).second) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "tokenizer scheme already registered: " + name);
  }
}

std::shared_ptr<const TokenizerScheme> TokenizerRegistry::Find(
    std::string_view name) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = schemes_.find(name);
  if (it == schemes_.end()) {
    throw CurationError(ErrorCode::kUnknownScheme, std::string(name));
  }
  return it->second;
}

std::vector<std::string> TokenizerRegistry::Names() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> names;
  for (const auto& [name, _] : schemes_) names.push_back(name);
  return names;
}

const TokenizerScheme& DefaultTokenizer() {
  static const WordPunctScheme scheme;
  return scheme;
}

TokenSequence Tokenize(std::string_view text, std::string_view scheme) {
  return TokenizerRegistry::Global().Find(scheme)->Tokenize(text);
}

std::size_t CountTokens(std::string_view text, std::string_view scheme) {
  return TokenizerRegistry::Global().Find(scheme)->Count(text);
}

bool FitsBudget(std::string_view text, std::size_t budget,
                std::string_view scheme) {
  return CountTokens(text, scheme) <= budget;
}

std::set<std::string> ContentWords(std::string_view text,
                                   const TokenizerScheme& scheme) {
  std::set<std::string> words;
  for (std::string& token : scheme.Tokenize(text).tokens) {
    if (!HasWordCharacter(token)) continue;
    std::string lower = ToLowerUtf8(token);
    if (IsStopword(lower)) continue;
    words.insert(std::move(lower));
  }
  return words;
}

const std::vector<std::string>& SentenceAbbreviations() {
  static const std::vector<std::string> kList = {
      "al.",  "approx.", "cf.",   "co.",  "dept.", "dr.",  "e.g.",
      "est.", "fig.",    "i.e.",  "inc.", "jr.",   "ltd.", "mr.",
      "mrs.", "ms.",     "mt.",   "prof.", "sr.",  "st.",  "vs."};
  return kList;
}

namespace {

// True if the '.' at `dot` ends a listed abbreviation.
bool EndsAbbreviation(std::string_view text, std::size_t sentence_begin,
                      std::size_t dot) {
  std::size_t word_begin = dot;
  while (word_begin > sentence_begin) {
    const char c = text[word_begin - 1];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
    --word_begin;
  }
  while (word_begin < dot && IsOpening(text[word_begin])) ++word_begin;
  const std::string word =
      ToLowerUtf8(text.substr(word_begin, dot + 1 - word_begin));
  const auto& list = SentenceAbbreviations();
  return std::find(list.begin(), list.end(), word) != list.end();
}

}  // namespace

SentenceSplit SplitSentences(std::string_view text) {
  SentenceSplit split;
  std::size_t pos = 0;
  std::size_t sentence_begin = std::string_view::npos;
  const auto emit = [&](std::size_t end) {
    std::string_view body =
        TrimSpace(text.substr(sentence_begin, end - sentence_begin));
    if (!body.empty()) {
      const std::size_t b = static_cast<std::size_t>(body.data() - text.data());
      split.spans.push_back({b, b + body.size()});
      split.sentences.emplace_back(body);
    }
    sentence_begin = std::string_view::npos;
  };
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = DecodeUtf8(text, pos);
    if (sentence_begin == std::string_view::npos) {
      if (IsSpaceCodePoint(cp)) continue;
      sentence_begin = start;
    }
    if (!IsTerminal(cp)) continue;

    // Absorb the rest of the terminal run and any closing marks.
    std::size_t run_end = pos;
    std::size_t terminal_count = 1;
    while (run_end < text.size()) {
      std::size_t peek = run_end;
      const char32_t next = DecodeUtf8(text, peek);
      if (IsTerminal(next)) {
        ++terminal_count;
      } else if (!IsClosing(next)) {
        break;
      }
      run_end = peek;
    }
    bool boundary = run_end >= text.size();
    if (!boundary) {
      std::size_t peek = run_end;
      boundary = IsSpaceCodePoint(DecodeUtf8(text, peek));
    }
    if (boundary && terminal_count == 1 && cp == U'.' &&
        EndsAbbreviation(text, sentence_begin, start)) {
      boundary = false;
    }
    pos = run_end;
    if (boundary) emit(run_end);
  }
  if (sentence_begin != std::string_view::npos) emit(text.size());
  return split;
}

}  // namespace capcurate
