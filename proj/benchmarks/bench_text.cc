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

#include "capcurate/caption_format.h"
#include "capcurate/tokenize.h"

namespace {

using namespace capcurate;

const std::string kDense =
    "A golden retriever leaps across a sunlit meadow, chasing a red frisbee "
    "while two children in striped shirts cheer from a wooden bench. Behind "
    "them, a row of poplar trees sways in the wind and a small white farmhouse "
    "sits beneath a pale blue sky dotted with clouds.";

void BM_Tokenize(benchmark::State& state) {
  const TokenizerScheme& scheme = DefaultTokenizer();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scheme.Tokenize(kDense));
  }
  state.SetBytesProcessed(state.iterations() * kDense.size());
}
BENCHMARK(BM_Tokenize);

void BM_SplitSentences(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(SplitSentences(kDense));
  }
}
BENCHMARK(BM_SplitSentences);

void BM_ValidateDsc(benchmark::State& state) {
  const FormatSpecRegistry specs = FormatSpecRegistry::Defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Validate(kDense, CaptionFormat::kDsc, specs, DefaultTokenizer()));
  }
}
BENCHMARK(BM_ValidateDsc);

}  // namespace
