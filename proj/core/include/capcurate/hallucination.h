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


#ifndef CAPCURATE_HALLUCINATION_H_
#define CAPCURATE_HALLUCINATION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capcurate/caption_types.h"
#include "capcurate/corpus_io.h"
#include "capcurate/provider.h"
#include "capcurate/richness.h"
#include "capcurate/tokenize.h"

namespace capcurate {

// Canonical object names plus surface-form synonyms. Surface forms are
// casefolded and compiled into token sequences of `scheme`; every form also
// matches its regular plural ("cat" -> "cats", "bus" -> "buses",
// "person" -> "people") unless that plural is itself a listed form.
class ObjectVocabulary {
 public:
  // Throws kInvalidArgument when a synonym targets a non-canonical name or
  // a name is empty.
  ObjectVocabulary(std::set<std::string> canonical_objects,
                   std::map<std::string, std::string> synonyms,
                   const TokenizerScheme& scheme = DefaultTokenizer());

  // The 80 COCO object categories with the classic CHAIR synonym table.
  static const ObjectVocabulary& Default();

  // One canonical name per line, or "synonym<TAB>canonical". Blank lines and
  // lines starting with '#' are ignored.
  static ObjectVocabulary Parse(std::string_view text,
                                const TokenizerScheme& scheme = DefaultTokenizer());
  static ObjectVocabulary Load(const std::filesystem::path& path,
                               const TokenizerScheme& scheme = DefaultTokenizer());

  const std::set<std::string>& canonical_objects() const { return canonical_; }
  const std::map<std::string, std::string>& synonyms() const { return synonyms_; }
  const TokenizerScheme& scheme() const { return *scheme_; }

  // Maps a name or synonym (any case, singular or plural) to its canonical
  // object.
  std::optional<std::string> Canonicalize(std::string_view surface) const;

  // Compiled token-sequence table, longest form first per leading token.
  const std::map<std::vector<std::string>, std::string>& forms() const {
    return forms_;
  }
  std::size_t max_form_tokens() const { return max_form_tokens_; }

 private:
  void Compile();
  void AddForm(std::vector<std::string> tokens, const std::string& canonical,
               bool generated);

  std::set<std::string> canonical_;
  std::map<std::string, std::string> synonyms_;
  const TokenizerScheme* scheme_;
  std::map<std::vector<std::string>, std::string> forms_;
  std::set<std::vector<std::string>> explicit_forms_;
  std::size_t max_form_tokens_ = 1;
};

// English plural of the last word: s/x/z/ch/sh -> +es, consonant+y -> ies,
// a few irregular nouns, otherwise +s.
std::string PluralOf(std::string_view word);

// Lists the default COCO vocabulary ("name" and "synonym\tname" lines).
std::string DefaultVocabularyText();

struct ObjectMention {
  std::string canonical;
  std::size_t sentence = 0;  // index into SplitSentences(caption)
  TextSpan span;             // bytes of the caption
};

// Left-to-right longest match of surface forms within each sentence.
std::vector<ObjectMention> FindMentions(std::string_view caption,
                                        const ObjectVocabulary& vocab);

// Instance counts per canonical object.
std::map<std::string, std::size_t> MentionedObjects(
    std::string_view caption, const ObjectVocabulary& vocab);

struct ChairReport {
  double chair_i = 0.0;
  double chair_s = 0.0;
  bool chair_i_undefined = true;  // no mentioned instances
  bool chair_s_undefined = true;  // no sentences
  std::uint64_t hallucinated_instances = 0;
  std::uint64_t mentioned_instances = 0;
  std::uint64_t flagged_sentences = 0;
  std::uint64_t total_sentences = 0;
  std::uint64_t scored_records = 0;
  std::uint64_t skipped_no_gt = 0;       // records without gt_objects
  std::uint64_t skipped_no_caption = 0;  // records without the format
  std::uint64_t error_records = 0;

  // Recomputes the ratios from the counts.
  void Finalize();
  void Merge(const ChairReport& other);
  nlohmann::json ToJson() const;
};

// Counts one caption against its ground-truth objects (canonicalized through
// the vocabulary). Ratios are left for Finalize().
ChairReport ChairForCaption(std::string_view caption,
                            const std::set<std::string>& gt_objects,
                            const ObjectVocabulary& vocab);

// Throws kNoScorableRecords when no record has both gt_objects and a
// caption of `format`.
ChairReport Chair(RecordStream& records, CaptionFormat format,
                  const ObjectVocabulary& vocab);

enum class FailurePolicy { kAbort, kSkipAndFlag };

struct CapScoreOptions {
  FailurePolicy on_failure = FailurePolicy::kAbort;
  std::size_t workers = 0;  // 0: the VQA provider's max_in_flight()
  bool keep_detail = false;
};

struct AssertionVerdict {
  std::string assertion;
  VqaAnswer answer = VqaAnswer::kUnparseable;
};

struct CapScoreRecord {
  std::string id;
  std::uint64_t assertions = 0;
  std::uint64_t verified = 0;
  std::uint64_t unparseable = 0;
  bool failed = false;
  std::string error;
  std::vector<AssertionVerdict> verdicts;
};

struct CapScoreReport {
  double capscore = 0.0;
  bool undefined = true;  // no assertions
  std::uint64_t assertions_total = 0;
  std::uint64_t assertions_verified = 0;
  std::uint64_t assertions_unparseable = 0;
  std::uint64_t captions = 0;
  std::uint64_t skipped_no_caption = 0;
  std::uint64_t failed_records = 0;
  std::uint64_t error_records = 0;
  std::optional<std::vector<CapScoreRecord>> detail;  // sorted by id

  void Finalize();
  void Add(const CapScoreRecord& record);
  nlohmann::json ToJson() const;
};

// Extracts assertions from each caption and asks the VQA provider about
// each one with the record's image_ref. Failed records either abort the run
// (rethrowing kProviderFailure) or are excluded and counted.
CapScoreReport CapScore(RecordStream& records, CaptionFormat format,
                        AssertionExtractor& assertions, Provider& vqa,
                        const CapScoreOptions& options = {});

}  // namespace capcurate

#endif  // CAPCURATE_HALLUCINATION_H_
