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

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <iterator>

#include "capcurate/error.h"
#include "capcurate/provider.h"

namespace capcurate {
namespace {

// Splits "http://host:port/prefix" into ("http://host:port", "/prefix").
std::pair<std::string, std::string> SplitBaseUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_begin =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_begin), prefix};
}

std::optional<std::string> InlineImage(const std::string& image_ref) {
  std::ifstream in(image_ref, std::ios::binary);
  if (!in) return std::nullopt;
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return httplib::detail::base64_encode(bytes);
}

}  // namespace

HttpProvider::HttpProvider(ProviderEndpoint endpoint, Sleeper sleeper)
    : endpoint_(std::move(endpoint)),
      sleeper_(std::move(sleeper)),
      retry_(endpoint_.max_retries,
             std::chrono::milliseconds(endpoint_.backoff_base_ms),
             std::chrono::milliseconds(endpoint_.backoff_cap_ms),
             endpoint_.jitter_seed),
      limiter_(endpoint_.rate_limit_per_s),
      in_flight_(static_cast<std::ptrdiff_t>(
          std::max<std::size_t>(endpoint_.max_in_flight, 1))) {
  endpoint_.Validate();
  if (endpoint_.base_url.empty()) {
    throw CurationError(ErrorCode::kInvalidArgument, "endpoint: empty base_url");
  }
  std::tie(host_, path_prefix_) = SplitBaseUrl(endpoint_.base_url);
  if (!endpoint_.api_key_env.empty()) {
    if (const char* key = std::getenv(endpoint_.api_key_env.c_str())) {
      api_key_ = key;
    }
  }
}

HttpProvider::~HttpProvider() = default;

HttpProvider::Attempt HttpProvider::Send(Route route, const std::string& body,
                                         const std::string& id) {
  Attempt attempt;
  httplib::Client client(host_);
  const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);

  const std::string path = path_prefix_ + std::string(RoutePath(route));
  auto result = client.Post(path, headers, body, "application/json");
  if (!result) {
    attempt.retryable = true;
    attempt.detail = "transport error: " + httplib::to_string(result.error());
    return attempt;
  }
  if (result->status != 200) {
    attempt.retryable = RetryPolicy::IsRetryableStatus(result->status);
    attempt.detail = "HTTP " + std::to_string(result->status);
    return attempt;
  }
  try {
    const auto doc = nlohmann::json::parse(result->body);
    attempt.response.id = doc.value("id", id);
    attempt.response.text = doc.at("text").get<std::string>();
    attempt.ok = true;
  } catch (const nlohmann::json::exception& e) {
    attempt.detail = std::string("bad response body: ") + e.what();
  }
  return attempt;
}

ProviderResponse HttpProvider::Call(Route route,
                                    const ProviderRequest& request) {
  ProviderRequest outgoing = request;
  if (endpoint_.inline_images && !outgoing.image_b64) {
    outgoing.image_b64 = InlineImage(outgoing.image_ref);
  }
  const std::string body = outgoing.ToJson().dump();

  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<>& sem;
    ~Release() { sem.release(); }
  } release{in_flight_};

  std::string last_detail;
  for (int attempt = 0;; ++attempt) {
    limiter_.Acquire();
    ++attempts_;
    Attempt result = Send(route, body, request.id);
    if (result.ok) return std::move(result.response);
    last_detail = result.detail;
    if (!result.retryable || attempt >= retry_.max_retries()) break;
    ++retries_;
    sleeper_(retry_.Delay(attempt));
  }
  throw CurationError(ErrorCode::kProviderFailure,
                      request.id + " " + std::string(RoutePath(route)) + ": " +
                          last_detail);
}

}  // namespace capcurate
