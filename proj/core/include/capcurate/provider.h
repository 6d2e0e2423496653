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

#ifndef CAPCURATE_PROVIDER_H_
#define CAPCURATE_PROVIDER_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace capcurate {

// Provider routes. Every route speaks the same JSON protocol:
//   request  {"id", "image_ref", "prompt", ["format"], ["text"], ["image_b64"]}
//   response {"id", "text"}
enum class Route { kCaption, kAssert, kVqa };

std::string_view RoutePath(Route route);  // "/caption", "/assert", "/vqa"

struct ProviderRequest {
  std::string id;
  std::string image_ref;
  std::string prompt;
  std::optional<std::string> format;  // caption key, /caption only
  std::optional<std::string> text;    // caption under analysis, /assert only
  std::optional<std::string> image_b64;

  nlohmann::json ToJson() const;
  static ProviderRequest FromJson(const nlohmann::json& doc);
};

struct ProviderResponse {
  std::string id;
  std::string text;
};

// A captioner, assertion LLM or VQA model.
class Provider {
 public:
  virtual ~Provider() = default;
  // Throws CurationError(kProviderFailure) when the request cannot be
  // completed (after any retries).
  virtual ProviderResponse Call(Route route, const ProviderRequest& request) = 0;
  // Concurrency callers should use when fanning out.
  virtual std::size_t max_in_flight() const { return 1; }
};

struct ProviderEndpoint {
  std::string base_url;
  std::string api_key_env;
  std::size_t max_in_flight = 4;
  int max_retries = 3;
  std::int64_t backoff_base_ms = 250;
  std::int64_t backoff_cap_ms = 30000;
  std::int64_t timeout_ms = 30000;
  double rate_limit_per_s = 0.0;  // 0 disables rate limiting
  bool inline_images = false;     // send local image files as base64
  std::uint64_t jitter_seed = 0x5eed;

  // Throws kInvalidArgument on a violated invariant.
  void Validate() const;
  nlohmann::json ToJson() const;
  static ProviderEndpoint FromJson(const nlohmann::json& doc);
};

// Exponential backoff with jitter on top of the exponential floor:
//   delay(k) = min(cap, base * 2^k + U[0, base * 2^k))
// for the k-th retry (k = 0 for the first retry).
class RetryPolicy {
 public:
  RetryPolicy(int max_retries, std::chrono::milliseconds base,
              std::chrono::milliseconds cap, std::uint64_t jitter_seed);

  int max_retries() const { return max_retries_; }
  std::chrono::milliseconds Floor(int retry) const;
  std::chrono::milliseconds Delay(int retry);

  static bool IsRetryableStatus(int http_status);

 private:
  int max_retries_;
  std::chrono::milliseconds base_;
  std::chrono::milliseconds cap_;
  std::mutex mu_;
  std::mt19937_64 rng_;
};

// Spaces request starts at least 1/rate apart across all threads.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second);
  void Acquire();

 private:
  std::chrono::steady_clock::duration interval_{};
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_slot_{};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
void RealSleep(std::chrono::milliseconds delay);

// JSON-over-HTTP provider with bounded concurrency, rate limiting and
// retries. Safe to call from many threads.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderEndpoint endpoint, Sleeper sleeper = RealSleep);
  ~HttpProvider() override;

  ProviderResponse Call(Route route, const ProviderRequest& request) override;
  std::size_t max_in_flight() const override {
    return endpoint_.max_in_flight;
  }

  const ProviderEndpoint& endpoint() const { return endpoint_; }
  std::uint64_t attempts() const { return attempts_.load(); }
  std::uint64_t retries() const { return retries_.load(); }

 private:
  struct Attempt {
    bool ok = false;
    bool retryable = false;
    std::string detail;
    ProviderResponse response;
  };
  Attempt Send(Route route, const std::string& body, const std::string& id);

  ProviderEndpoint endpoint_;
  Sleeper sleeper_;
  RetryPolicy retry_;
  RateLimiter limiter_;
  std::counting_semaphore<> in_flight_;
  std::string host_;
  std::string path_prefix_;
  std::optional<std::string> api_key_;
  std::atomic<std::uint64_t> attempts_{0};
  std::atomic<std::uint64_t> retries_{0};
};

// Fixed set of worker threads fed through a bounded queue. Submit() blocks
// while the queue is full. The first exception thrown by a task is rethrown
// from Wait().
class BoundedPool {
 public:
  BoundedPool(std::size_t workers, std::size_t queue_capacity);
  ~BoundedPool();
  BoundedPool(const BoundedPool&) = delete;
  BoundedPool& operator=(const BoundedPool&) = delete;

  void Submit(std::function<void()> task);
  void Wait();
  // True once any task has thrown and Wait() has not yet reported it.
  bool has_error();

 private:
  void WorkerLoop();

  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::condition_variable idle_;
  std::deque<std::function<void()>> queue_;
  std::size_t running_ = 0;
  bool stopping_ = false;
  std::exception_ptr first_error_;
  std::vector<std::thread> workers_;
};

enum class VqaAnswer { kYes, kNo, kUnparseable };

std::string_view VqaAnswerName(VqaAnswer answer);

// Scans the tokens of the first sentence for the first "yes" or "no",
// ignoring case: "Absolutely, yes." -> kYes.
VqaAnswer ParseYesNo(std::string_view response);

// "Based on the image, is this statement true? <assertion> Answer yes or no."
std::string RenderVqaQuestion(std::string_view assertion);

// Recovers the assertion from a question built by RenderVqaQuestion.
std::optional<std::string> AssertionFromVqaQuestion(std::string_view question);

VqaAnswer VqaAsk(std::string_view id, std::string_view image_ref,
                 std::string_view question, Provider& provider);

}  // namespace capcurate

#endif  // CAPCURATE_PROVIDER_H_
