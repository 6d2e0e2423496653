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


#include "support/support.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "capcurate/error.h"

namespace testing_support {

namespace fs = std::filesystem;
using capcurate::CaptionFormat;
using capcurate::CaptionRecord;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "capcurate-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path DataPath(const std::string& name) {
  return fs::path(CAPCURATE_TEST_DATA_DIR) / name;
}

std::vector<CaptionRecord> ReadRecords(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path.string());
  std::vector<CaptionRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    records.push_back(capcurate::ParseRecord(line).value());
  }
  return records;
}

CaptionRecord SyntheticRecord(std::uint64_t i) {
  static const char* kAnimals[] = {"dog", "cat", "horse", "bird", "sheep"};
  static const char* kPlaces[] = {"beach", "field", "street", "kitchen", "park"};
  const std::string animal = kAnimals[i % 5];
  const std::string place = kPlaces[(i / 5) % 5];
  CaptionRecord r;
  r.id = "rec-" + std::to_string(i);
  r.image_ref = "img/" + std::to_string(i) + ".jpg";
  r.alt_text = "stock photo " + animal + " " + std::to_string(i);
  r.captions[CaptionFormat::kSsc] = "A " + animal + " in the " + place + ".";
  r.captions[CaptionFormat::kDsc] =
      "A " + animal + " stands in a sunny " + place +
      " while people walk past in the background.";
  r.captions[CaptionFormat::kAfc] =
      "A stock photo of a " + animal + " standing in the " + place + ".";
  return r;
}

capcurate::DatasetManifest WriteSyntheticCorpus(const fs::path& dir,
                                                std::uint64_t n,
                                                std::size_t shards) {
  capcurate::DatasetManifest manifest;
  const std::uint64_t per = (n + shards - 1) / shards;
  for (std::size_t s = 0; s < shards; ++s) {
    capcurate::ShardWriter writer(dir / ("in-" + std::to_string(s)), per + 1);
    for (std::uint64_t i = s * per; i < std::min(n, (s + 1) * per); ++i) {
      writer.Append(SyntheticRecord(i));
    }
    for (auto& shard : writer.Finish()) manifest.shards.push_back(shard);
  }
  capcurate::SaveManifest(manifest, dir / "manifest.json");
  return manifest;
}

ChairScenario RandomChairScenario(std::mt19937_64& rng) {
  static const std::vector<std::string> kPool = {
      "cat",   "dog",       "bus",        "box",       "fox",
      "bench", "brush",     "pony",       "toy",       "person",
      "man",   "child",     "knife",      "mouse",     "hot dog",
      "traffic light", "teddy bear", "bear", "stop sign", "sign",
      "wine glass", "glass", "couch",     "puppy",     "kitten",
      "car",   "truck",     "fire truck", "cup",       "clock"};
  static const std::vector<std::string> kFillers = {
      "a", "the", "near", "on", "with", "big", "small", "red", "running",
      "sitting", "green", "grass", "street", "two", "and", "old", "next", "to"};

  std::vector<std::string> pool = kPool;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::uniform_int_distribution<std::size_t> vocab_size(3, 20);
  const std::size_t k = std::min(vocab_size(rng), pool.size());

  ChairScenario sc;
  std::vector<std::string> canon(pool.begin(), pool.begin() + k);
  sc.vocab.canonical.insert(canon.begin(), canon.end());
  // Up to three leftovers become synonyms of random canonical names.
  for (std::size_t j = k; j < std::min(pool.size(), k + 3); ++j) {
    if (rng() % 2 == 0) sc.vocab.synonyms[pool[j]] = canon[rng() % canon.size()];
  }

  std::vector<std::string> surfaces(canon);
  for (const auto& [s, c] : sc.vocab.synonyms) surfaces.push_back(s);
  // Words outside the vocabulary that still look like objects.
  for (std::size_t j = k + 3; j < pool.size(); ++j) surfaces.push_back(pool[j]);

  std::uniform_int_distribution<std::size_t> n_records(1, 100);
  const std::size_t n = n_records(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::string caption;
    const std::size_t sentences = 1 + rng() % 3;
    for (std::size_t s = 0; s < sentences; ++s) {
      const std::size_t words = 1 + rng() % 8;
      for (std::size_t w = 0; w < words; ++w) {
        std::string word;
        if (rng() % 3 == 0) {
          word = surfaces[rng() % surfaces.size()];
          if (rng() % 3 == 0) {
            const auto space = word.rfind(' ');
            const std::string last =
                space == std::string::npos ? word : word.substr(space + 1);
            word = word.substr(0, word.size() - last.size()) + oracle::Plural(last);
          }
        } else {
          word = kFillers[rng() % kFillers.size()];
        }
        caption += (w == 0 ? "" : " ") + word;
      }
      caption += s + 1 == sentences ? "." : ". ";
    }
    std::set<std::string> gt;
    for (const std::string& c : canon) {
      if (rng() % 2 == 0) gt.insert(c);
    }
    CaptionRecord r;
    r.id = "c" + std::to_string(i);
    r.image_ref = "img/c" + std::to_string(i);
    r.captions[CaptionFormat::kDsc] = caption;
    if (rng() % 10 != 0) r.gt_objects = gt;
    if (r.gt_objects) sc.scored.push_back({caption, gt});
    sc.records.push_back(std::move(r));
  }
  return sc;
}

capcurate::ObjectVocabulary ToLibraryVocab(const oracle::Vocab& vocab) {
  return capcurate::ObjectVocabulary(vocab.canonical, vocab.synonyms);
}

}  // namespace testing_support
