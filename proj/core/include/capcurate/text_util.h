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

#ifndef CAPCURATE_TEXT_UTIL_H_
#define CAPCURATE_TEXT_UTIL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace capcurate {

// Decodes one code point starting at `pos` and advances `pos`. Ill-formed
// sequences decode to U+FFFD and consume a single byte.
char32_t DecodeUtf8(std::string_view text, std::size_t& pos);
void AppendUtf8(std::string& out, char32_t cp);

// Character classes used by the segmenters. They cover Latin, Greek,
// Cyrillic and the common punctuation/symbol blocks; everything else that is
// not whitespace or punctuation is treated as a word character.
bool IsSpaceCodePoint(char32_t cp);
bool IsIgnorableCodePoint(char32_t cp);  // zero-width joiners, BOM
bool IsPunctuationCodePoint(char32_t cp);
bool IsStandaloneIdeograph(char32_t cp);  // CJK ideographs and kana
bool IsAsciiDigit(char32_t cp);
bool IsUppercaseCodePoint(char32_t cp);
char32_t ToLowerCodePoint(char32_t cp);

std::string ToLowerUtf8(std::string_view text);

// Trims Unicode whitespace from both ends.
std::string_view TrimSpace(std::string_view text);
std::string_view TrimAscii(std::string_view text);

// Collapses every whitespace run to one ASCII space and trims the ends.
std::string CollapseWhitespace(std::string_view text);

std::vector<std::string_view> SplitString(std::string_view text, char sep);
std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view sep);

bool StartsWithIgnoreAsciiCase(std::string_view text, std::string_view prefix);

// English function words. Used to decide what counts as a content word.
bool IsStopword(std::string_view lowercase_token);

// True if the token has at least one letter or digit.
bool HasWordCharacter(std::string_view token);
bool HasAsciiDigit(std::string_view token);

}  // namespace capcurate

#endif  // CAPCURATE_TEXT_UTIL_H_
