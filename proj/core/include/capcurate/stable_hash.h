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

#ifndef CAPCURATE_STABLE_HASH_H_
#define CAPCURATE_STABLE_HASH_H_

#include <cstdint>
#include <string_view>

namespace capcurate {

// Platform-independent 64-bit hash of (seed, salt, key): FNV-1a over the
// bytes followed by the SplitMix64 finalizer. Values are part of the on-disk
// contract (mix assignments must not change between releases).
std::uint64_t StableHash64(std::uint64_t seed, std::string_view key,
                           std::uint64_t salt = 0);

// Maps a 64-bit hash to [0, 1) using its top 53 bits.
double HashToUnit(std::uint64_t hash);

inline double StableUniform(std::uint64_t seed, std::string_view key,
                            std::uint64_t salt = 0) {
  return HashToUnit(StableHash64(seed, key, salt));
}

}  // namespace capcurate

#endif  // CAPCURATE_STABLE_HASH_H_
