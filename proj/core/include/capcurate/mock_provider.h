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


#ifndef CAPCURATE_MOCK_PROVIDER_H_
#define CAPCURATE_MOCK_PROVIDER_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capcurate/corpus_io.h"
#include "capcurate/provider.h"

namespace capcurate {

// Deterministic in-process provider.
//
//  /caption  "caption for <id> [<format>]"
//  /assert   rule-based assertions of the request text, one per line; with
//            the default entity prompt, heuristic entities instead
//  /vqa      "yes" iff every content word of the asked assertion is among the
//            content words of the image's ground text (its gt_objects),
//            otherwise "no"
class MockProvider : public Provider {
 public:
  explicit MockProvider(std::size_t max_in_flight = 4)
      : max_in_flight_(max_in_flight) {}

  // Records ground text for every record's image_ref from its gt_objects.
  void AddGround(std::span<const CaptionRecord> records);
  void AddGround(const std::string& image_ref,
                 const std::set<std::string>& objects);

  // The next `times` calls carrying `id` throw kProviderFailure.
  void FailNext(const std::string& id, int times);

  ProviderResponse Call(Route route, const ProviderRequest& request) override;
  std::size_t max_in_flight() const override { return max_in_flight_; }

  std::uint64_t calls(Route route) const;

 private:
  std::string Answer(Route route, const ProviderRequest& request) const;

  std::size_t max_in_flight_;
  mutable std::mutex mu_;
  std::map<std::string, std::set<std::string>> ground_;  // image_ref -> words
  std::map<std::string, int> failures_;
  std::map<Route, std::uint64_t> calls_;
};

// HTTP server speaking the provider protocol on 127.0.0.1, backed by a
// MockProvider, with scripted HTTP statuses and instrumentation.
class MockProviderServer {
 public:
  explicit MockProviderServer(MockProvider& backend);
  ~MockProviderServer();
  MockProviderServer(const MockProviderServer&) = delete;
  MockProviderServer& operator=(const MockProviderServer&) = delete;

  // Binds an ephemeral port and serves on a background thread.
  void Start();
  void Stop();
  std::string base_url() const;

  // Requests for `id` answer these statuses in order (200 means "serve
  // normally"); once exhausted every request is served normally.
  void Script(const std::string& id, std::vector<int> statuses);
  // Every request sleeps this long before answering.
  void SetLatency(std::chrono::milliseconds latency);

  struct Stats {
    std::size_t max_in_flight = 0;
    std::uint64_t requests = 0;
    std::map<std::string, std::uint64_t> attempts_by_id;
    std::vector<std::chrono::steady_clock::time_point> request_starts;
  };
  Stats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace capcurate

#endif  // CAPCURATE_MOCK_PROVIDER_H_
