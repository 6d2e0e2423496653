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

#ifndef CAPCURATE_TOKENIZE_H_
#define CAPCURATE_TOKENIZE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace capcurate {

// Half-open byte range into the text that was segmented.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string scheme;
};

// A tokenization scheme. Token lengths, budgets and format bands are all
// measured in whichever scheme is active; register a subword scheme to
// measure in model tokens instead.
class TokenizerScheme {
 public:
  virtual ~TokenizerScheme() = default;

  virtual std::string_view name() const = 0;
  virtual bool lowercases() const = 0;

  // Appends the byte span of every token in `text` to `spans`, in order.
  virtual void Segment(std::string_view text,
                       std::vector<TextSpan>& spans) const = 0;

  virtual std::size_t Count(std::string_view text) const;
  virtual std::string Normalize(std::string_view raw_token) const;

  TokenSequence Tokenize(std::string_view text) const;
};

// Default scheme ("word-punct"), lowercased.
//
//  * Whitespace separates tokens; zero-width characters are dropped.
//  * A word is a maximal run of letters, digits and marks.
//  * Every punctuation or symbol code point is its own token, except:
//      - an apostrophe (' or U+2019) between two letters stays in the word
//        ("don't");
//      - a hyphen between two word characters stays in the word ("t-shirt");
//      - '.' or ',' between two digits stays in the number ("3.5", "1,000").
//  * CJK ideographs and kana are single-character tokens.
class WordPunctScheme : public TokenizerScheme {
 public:
  std::string_view name() const override { return "word-punct"; }
  bool lowercases() const override { return true; }
  void Segment(std::string_view text,
               std::vector<TextSpan>& spans) const override;
};

// Splits on Unicode whitespace only; lowercased.
class WhitespaceScheme : public TokenizerScheme {
 public:
  std::string_view name() const override { return "whitespace"; }
  bool lowercases() const override { return true; }
  void Segment(std::string_view text,
               std::vector<TextSpan>& spans) const override;
};

inline constexpr std::string_view kDefaultScheme = "word-punct";

// Thread-safe name -> scheme table. The global registry starts with
// "word-punct" and "whitespace".
class TokenizerRegistry {
 public:
  static TokenizerRegistry& Global();

  TokenizerRegistry();

  // Throws kInvalidArgument if the name is already taken.
  void Register(std::shared_ptr<const TokenizerScheme> scheme);

  // Throws CurationError(kUnknownScheme).
  std::shared_ptr<const TokenizerScheme> Find(std::string_view name) const;

  std::vector<std::string> Names() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const TokenizerScheme>, std::less<>>
      schemes_;
};

const TokenizerScheme& DefaultTokenizer();

TokenSequence Tokenize(std::string_view text,
                       std::string_view scheme = kDefaultScheme);
std::size_t CountTokens(std::string_view text,
                        std::string_view scheme = kDefaultScheme);
bool FitsBudget(std::string_view text, std::size_t budget,
                std::string_view scheme = kDefaultScheme);

// Lowercased tokens that contain a letter or digit and are not stopwords.
std::set<std::string> ContentWords(std::string_view text,
                                   const TokenizerScheme& scheme);

struct SentenceSplit {
  std::vector<TextSpan> spans;
  std::vector<std::string> sentences;
};

// Splits after a run of terminal punctuation (. ! ?), plus any closing
// quotes or brackets, that is followed by whitespace or the end of the text.
// A lone '.' ending one of SentenceAbbreviations() does not split. Sentence
// spans are trimmed; only whitespace lies between them.
SentenceSplit SplitSentences(std::string_view text);

// Lowercase, including the final period.
const std::vector<std::string>& SentenceAbbreviations();

}  // namespace capcurate

#endif  // CAPCURATE_TOKENIZE_H_
