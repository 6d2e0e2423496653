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


#include "capcurate/mock_provider.h"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

#include <httplib.h>

#include "capcurate/error.h"
#include "capcurate/richness.h"
#include "capcurate/text_util.h"
#include "capcurate/tokenize.h"

namespace capcurate {

void MockProvider::AddGround(std::span<const CaptionRecord> records) {
  for (const CaptionRecord& record : records) {
    if (record.gt_objects) AddGround(record.image_ref, *record.gt_objects);
  }
}

void MockProvider::AddGround(const std::string& image_ref,
                             const std::set<std::string>& objects) {
  std::vector<std::string> names(objects.begin(), objects.end());
  std::set<std::string> words =
      ContentWords(JoinStrings(names, " "), DefaultTokenizer());
  std::lock_guard<std::mutex> lock(mu_);
  ground_[image_ref].insert(words.begin(), words.end());
}

void MockProvider::FailNext(const std::string& id, int times) {
  std::lock_guard<std::mutex> lock(mu_);
  failures_[id] = times;
}

std::uint64_t MockProvider::calls(Route route) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = calls_.find(route);
  return it == calls_.end() ? 0 : it->second;
}

ProviderResponse MockProvider::Call(Route route,
                                    const ProviderRequest& request) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_[route];
    if (auto it = failures_.find(request.id);
        it != failures_.end() && it->second > 0) {
      --it->second;
      throw CurationError(ErrorCode::kProviderFailure,
                          "scripted failure for " + request.id);
    }
  }
  return {request.id, Answer(route, request)};
}

std::string MockProvider::Answer(Route route,
                                 const ProviderRequest& request) const {
  switch (route) {
    case Route::kCaption:
      return "caption for " + request.id + " [" +
             request.format.value_or("?") + "]";
    case Route::kAssert: {
      const std::string text = request.text.value_or("");
      std::vector<std::string> lines;
      if (request.prompt.starts_with(kDefaultEntityPrompt)) {
        HeuristicEntityExtractor entities;
        for (const std::string& e : entities.Extract(text)) lines.push_back(e);
      } else {
        lines = RuleBasedAssertions(text);
      }
      return JoinStrings(lines, "\n");
    }
    case Route::kVqa: {
      const std::string assertion =
          AssertionFromVqaQuestion(request.prompt).value_or(request.prompt);
      const std::set<std::string> words =
          ContentWords(assertion, DefaultTokenizer());
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = ground_.find(request.image_ref);
      if (it == ground_.end() || words.empty()) return "no";
      for (const std::string& w : words) {
        if (!it->second.contains(w)) return "no";
      }
      return "yes";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------

struct MockProviderServer::Impl {
  explicit Impl(MockProvider& b) : backend(b) {}

  MockProvider& backend;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<bool> running{false};

  mutable std::mutex mu;
  std::map<std::string, std::deque<int>> scripts;
  std::chrono::milliseconds latency{0};
  std::size_t in_flight = 0;
  Stats stats;

  void Handle(Route route, const httplib::Request& req, httplib::Response& res);
};

void MockProviderServer::Impl::Handle(Route route, const httplib::Request& req,
                                      httplib::Response& res) {
  ProviderRequest request;
  try {
    request = ProviderRequest::FromJson(nlohmann::json::parse(req.body));
  } catch (const std::exception& e) {
    res.status = 400;
    res.set_content(e.what(), "text/plain");
    return;
  }
  int status = 200;
  std::chrono::milliseconds delay;
  {
    std::lock_guard<std::mutex> lock(mu);
    ++in_flight;
    stats.max_in_flight = std::max(stats.max_in_flight, in_flight);
    ++stats.requests;
    ++stats.attempts_by_id[request.id];
    stats.request_starts.push_back(std::chrono::steady_clock::now());
    if (auto it = scripts.find(request.id);
        it != scripts.end() && !it->second.empty()) {
      status = it->second.front();
      it->second.pop_front();
    }
    delay = latency;
  }
  if (delay.count() > 0) std::this_thread::sleep_for(delay);
  if (status == 200) {
    try {
      const ProviderResponse response = backend.Call(route, request);
      res.set_content(
          nlohmann::json{{"id", response.id}, {"text", response.text}}.dump(),
          "application/json");
    } catch (const CurationError& e) {
      status = 500;
      res.set_content(e.what(), "text/plain");
    }
  } else {
    res.set_content("scripted status", "text/plain");
  }
  res.status = status;
  std::lock_guard<std::mutex> lock(mu);
  --in_flight;
}

MockProviderServer::MockProviderServer(MockProvider& backend)
    : impl_(std::make_unique<Impl>(backend)) {
  impl_->server.new_task_queue = [] { return new httplib::ThreadPool(64); };
  for (Route route : {Route::kCaption, Route::kAssert, Route::kVqa}) {
    impl_->server.Post(std::string(RoutePath(route)),
                       [this, route](const httplib::Request& req,
                                     httplib::Response& res) {
                         impl_->Handle(route, req, res);
                       });
  }
}

MockProviderServer::~MockProviderServer() { Stop(); }

void MockProviderServer::Start() {
  if (impl_->running) return;
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) {
    throw CurationError(ErrorCode::kIoFailure, "mock server cannot bind");
  }
  impl_->running = true;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockProviderServer::Stop() {
  if (!impl_->running) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->running = false;
}

std::string MockProviderServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

void MockProviderServer::Script(const std::string& id,
                                std::vector<int> statuses) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->scripts[id] = std::deque<int>(statuses.begin(), statuses.end());
}

void MockProviderServer::SetLatency(std::chrono::milliseconds latency) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->latency = latency;
}

MockProviderServer::Stats MockProviderServer::stats() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->stats;
}

}  // namespace capcurate
