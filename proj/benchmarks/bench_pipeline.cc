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


#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "capcurate/corpus_io.h"
#include "capcurate/hallucination.h"
#include "capcurate/mixer.h"

namespace {

using namespace capcurate;

const std::string kLine =
    R"({"id":"rec-42","image_ref":"img/42.jpg","alt_text":"stock photo dog 42",)"
    R"("captions":{"ssc":"A dog in the park.","dsc":"A dog stands in a sunny )"
    R"(park while people walk past in the background."},"gt_objects":["dog","person"]})";

void BM_ParseRecord(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseRecord(kLine));
  }
  state.SetBytesProcessed(state.iterations() * kLine.size());
}
BENCHMARK(BM_ParseRecord);

void BM_SerializeRecord(benchmark::State& state) {
  const CaptionRecord record = ParseRecord(kLine).value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(SerializeRecord(record));
  }
}
BENCHMARK(BM_SerializeRecord);

void BM_AssignSource(benchmark::State& state) {
  MixRecipe recipe;
  recipe.alt_ratio = 0.4;
  std::vector<std::string> ids;
  for (int i = 0; i < 1024; ++i) ids.push_back("rec-" + std::to_string(i));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AssignSource(ids[i++ & 1023], recipe));
  }
}
BENCHMARK(BM_AssignSource);

void BM_ChairMentions(benchmark::State& state) {
  const ObjectVocabulary& vocab = ObjectVocabulary::Default();
  const std::string caption =
      "Two people sit on a sofa next to a small dog. A laptop and a cup rest on "
      "the dining table near the fridge.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(FindMentions(caption, vocab));
  }
}
BENCHMARK(BM_ChairMentions);

}  // namespace
