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


#ifndef CAPCURATE_TESTS_SUPPORT_SUPPORT_H_
#define CAPCURATE_TESTS_SUPPORT_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "capcurate/corpus_io.h"
#include "capcurate/hallucination.h"
#include "oracles/oracles.h"

namespace testing_support {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

std::filesystem::path DataPath(const std::string& name);

std::vector<capcurate::CaptionRecord> ReadRecords(const std::filesystem::path& path);

// Record "rec-<i>" with alt, ssc, dsc and afc captions.
capcurate::CaptionRecord SyntheticRecord(std::uint64_t i);

// Writes `n` synthetic records into `shards` shards under `dir` and returns
// the manifest (also saved as dir/manifest.json).
capcurate::DatasetManifest WriteSyntheticCorpus(const std::filesystem::path& dir,
                                                std::uint64_t n,
                                                std::size_t shards);

// A random CHAIR scenario: vocabulary of <= 20 objects and <= 100 captions
// made of vocabulary surface forms, plurals and filler words.
struct ChairScenario {
  oracle::Vocab vocab;
  std::vector<capcurate::CaptionRecord> records;  // captions under "dsc"
  std::vector<oracle::ScoredCaption> scored;      // same captions with gt
};
ChairScenario RandomChairScenario(std::mt19937_64& rng);

capcurate::ObjectVocabulary ToLibraryVocab(const oracle::Vocab& vocab);

}  // namespace testing_support

#endif  // CAPCURATE_TESTS_SUPPORT_SUPPORT_H_
