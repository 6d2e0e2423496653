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

#include "capcurate/provider.h"

#include <algorithm>
#include <cmath>

#include "capcurate/error.h"
#include "capcurate/tokenize.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

constexpr std::string_view kVqaPrefix =
    "Based on the image, is this statement true? ";
constexpr std::string_view kVqaSuffix = " Answer yes or no.";

}  // namespace

std::string_view RoutePath(Route route) {
  switch (route) {
    case Route::kCaption: return "/caption";
    case Route::kAssert: return "/assert";
    case Route::kVqa: return "/vqa";
  }
  return "/";
}

nlohmann::json ProviderRequest::ToJson() const {
  nlohmann::json doc = {{"id", id}, {"image_ref", image_ref}, {"prompt", prompt}};
  if (format) doc["format"] = *format;
  if (text) doc["text"] = *text;
  if (image_b64) doc["image_b64"] = *image_b64;
  return doc;
}

ProviderRequest ProviderRequest::FromJson(const nlohmann::json& doc) {
  ProviderRequest request;
  request.id = doc.at("id").get<std::string>();
  request.image_ref = doc.value("image_ref", std::string());
  request.prompt = doc.value("prompt", std::string());
  if (doc.contains("format")) request.format = doc["format"].get<std::string>();
  if (doc.contains("text")) request.text = doc["text"].get<std::string>();
  if (doc.contains("image_b64")) {
    request.image_b64 = doc["image_b64"].get<std::string>();
  }
  return request;
}

void ProviderEndpoint::Validate() const {
  auto fail = [](const std::string& what) {
    throw CurationError(ErrorCode::kInvalidArgument, "endpoint: " + what);
  };
  if (max_in_flight < 1) fail("max_in_flight must be >= 1");
  if (max_retries < 0) fail("max_retries must be >= 0");
  if (timeout_ms <= 0) fail("timeout_ms must be > 0");
  if (backoff_base_ms < 0 || backoff_cap_ms < 0) fail("negative backoff");
  if (rate_limit_per_s < 0.0) fail("rate_limit_per_s must be >= 0");
}

nlohmann::json ProviderEndpoint::ToJson() const {
  return {{"base_url", base_url},
          {"api_key_env", api_key_env},
          {"max_in_flight", max_in_flight},
          {"max_retries", max_retries},
          {"backoff_base_ms", backoff_base_ms},
          {"backoff_cap_ms", backoff_cap_ms},
          {"timeout_ms", timeout_ms},
          {"rate_limit_per_s", rate_limit_per_s},
          {"inline_images", inline_images},
          {"jitter_seed", jitter_seed}};
}

ProviderEndpoint ProviderEndpoint::FromJson(const nlohmann::json& doc) {
  ProviderEndpoint e;
  try {
    e.base_url = doc.value("base_url", e.base_url);
    e.api_key_env = doc.value("api_key_env", e.api_key_env);
    e.max_in_flight = doc.value("max_in_flight", e.max_in_flight);
    e.max_retries = doc.value("max_retries", e.max_retries);
    e.backoff_base_ms = doc.value("backoff_base_ms", e.backoff_base_ms);
    e.backoff_cap_ms = doc.value("backoff_cap_ms", e.backoff_cap_ms);
    e.timeout_ms = doc.value("timeout_ms", e.timeout_ms);
    e.rate_limit_per_s = doc.value("rate_limit_per_s", e.rate_limit_per_s);
    e.inline_images = doc.value("inline_images", e.inline_images);
    e.jitter_seed = doc.value("jitter_seed", e.jitter_seed);
  } catch (const nlohmann::json::exception& ex) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        std::string("endpoint: ") + ex.what());
  }
  e.Validate();
  return e;
}

RetryPolicy::RetryPolicy(int max_retries, std::chrono::milliseconds base,
                         std::chrono::milliseconds cap,
                         std::uint64_t jitter_seed)
    : max_retries_(max_retries), base_(base), cap_(cap), rng_(jitter_seed) {}

std::chrono::milliseconds RetryPolicy::Floor(int retry) const {
  const double scaled =
      static_cast<double>(base_.count()) * std::ldexp(1.0, retry);
  const double capped = std::min(scaled, static_cast<double>(cap_.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

std::chrono::milliseconds RetryPolicy::Delay(int retry) {
  const auto floor = Floor(retry);
  std::int64_t jitter = 0;
  if (floor.count() > 0) {
    std::lock_guard<std::mutex> lock(mu_);
    jitter = std::uniform_int_distribution<std::int64_t>(
        0, floor.count() - 1)(rng_);
  }
  return std::min(floor + std::chrono::milliseconds(jitter), cap_);
}

bool RetryPolicy::IsRetryableStatus(int http_status) {
  return http_status == 408 || http_status == 429 || http_status >= 500;
}

RateLimiter::RateLimiter(double per_second) {
  if (per_second > 0.0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / per_second));
  }
}

void RateLimiter::Acquire() {
  if (interval_.count() == 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    slot = std::max(std::chrono::steady_clock::now(), next_slot_);
    next_slot_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

void RealSleep(std::chrono::milliseconds delay) {
  std::this_thread::sleep_for(delay);
}

BoundedPool::BoundedPool(std::size_t workers, std::size_t queue_capacity)
    : capacity_(std::max<std::size_t>(queue_capacity, 1)) {
  workers = std::max<std::size_t>(workers, 1);
  workers_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) {
    workers_.emplace_back([this] { WorkerLoop(); });
  }
}

BoundedPool::~BoundedPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  not_empty_.notify_all();
  not_full_.notify_all();
  for (auto& t : workers_) t.join();
}

void BoundedPool::Submit(std::function<void()> task) {
  std::unique_lock<std::mutex> lock(mu_);
  not_full_.wait(lock, [&] { return queue_.size() < capacity_ || stopping_; });
  queue_.push_back(std::move(task));
  lock.unlock();
  not_empty_.notify_one();
}

void BoundedPool::Wait() {
  std::unique_lock<std::mutex> lock(mu_);
  idle_.wait(lock, [&] { return queue_.empty() && running_ == 0; });
  if (first_error_) {
    auto error = first_error_;
    first_error_ = nullptr;
    std::rethrow_exception(error);
  }
}

bool BoundedPool::has_error() {
  std::lock_guard<std::mutex> lock(mu_);
  return first_error_ != nullptr;
}

void BoundedPool::WorkerLoop() {
  while (true) {
    std::function<void()> task;
    {
      std::unique_lock<std::mutex> lock(mu_);
      not_empty_.wait(lock, [&] { return !queue_.empty() || stopping_; });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      ++running_;
    }
    not_full_.notify_one();
    try {
      task();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!first_error_) first_error_ = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      --running_;
      if (queue_.empty() && running_ == 0) idle_.notify_all();
    }
  }
}

std::string_view VqaAnswerName(VqaAnswer answer) {
  switch (answer) {
    case VqaAnswer::kYes: return "yes";
    case VqaAnswer::kNo: return "no";
    case VqaAnswer::kUnparseable: return "unparseable";
  }
  return "unparseable";
}

VqaAnswer ParseYesNo(std::string_view response) {
  const SentenceSplit split = SplitSentences(response);
  if (split.sentences.empty()) return VqaAnswer::kUnparseable;
  for (const std::string& token :
       DefaultTokenizer().Tokenize(split.sentences.front()).tokens) {
    if (token == "yes") return VqaAnswer::kYes;
    if (token == "no") return VqaAnswer::kNo;
  }
  return VqaAnswer::kUnparseable;
}

std::string RenderVqaQuestion(std::string_view assertion) {
  std::string question(kVqaPrefix);
  question.append(assertion);
  question.append(kVqaSuffix);
  return question;
}

std::optional<std::string> AssertionFromVqaQuestion(std::string_view question) {
  if (question.size() < kVqaPrefix.size() + kVqaSuffix.size() ||
      question.substr(0, kVqaPrefix.size()) != kVqaPrefix ||
      question.substr(question.size() - kVqaSuffix.size()) != kVqaSuffix) {
    return std::nullopt;
  }
  return std::string(question.substr(
      kVqaPrefix.size(),
      question.size() - kVqaPrefix.size() - kVqaSuffix.size()));
}

VqaAnswer VqaAsk(std::string_view id, std::string_view image_ref,
                 std::string_view question, Provider& provider) {
  ProviderRequest request;
  request.id = std::string(id);
  request.image_ref = std::string(image_ref);
  request.prompt = std::string(question);
  return ParseYesNo(provider.Call(Route::kVqa, request).text);
}

}  // namespace capcurate
