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


#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "capcurate/error.h"
#include "capcurate/mock_provider.h"
#include "capcurate/provider.h"

namespace capcurate {
namespace {

using std::chrono::milliseconds;

struct RecordingSleeper {
  std::shared_ptr<std::mutex> mu = std::make_shared<std::mutex>();
  std::shared_ptr<std::vector<milliseconds>> delays =
      std::make_shared<std::vector<milliseconds>>();
  Sleeper fn() const {
    return [mu = mu, delays = delays](milliseconds d) {
      std::lock_guard<std::mutex> lock(*mu);
      delays->push_back(d);
    };
  }
};

ProviderEndpoint EndpointFor(const MockProviderServer& server) {
  ProviderEndpoint e;
  e.base_url = server.base_url();
  e.timeout_ms = 5000;
  return e;
}

TEST(RetryPolicy, FloorDoublesAndCaps) {
  RetryPolicy p(5, milliseconds(250), milliseconds(30000), 1);
  EXPECT_EQ(p.Floor(0), milliseconds(250));
  EXPECT_EQ(p.Floor(3), milliseconds(2000));
  EXPECT_EQ(p.Floor(10), milliseconds(30000));
  for (int k = 0; k < 12; ++k) {
    const auto d = p.Delay(k);
    EXPECT_GE(d, p.Floor(k));
    EXPECT_LE(d, milliseconds(30000));
    if (p.Floor(k) < milliseconds(30000)) EXPECT_LT(d, 2 * p.Floor(k));
  }
  EXPECT_TRUE(RetryPolicy::IsRetryableStatus(429));
  EXPECT_TRUE(RetryPolicy::IsRetryableStatus(503));
  EXPECT_FALSE(RetryPolicy::IsRetryableStatus(400));
}

TEST(Endpoint, ValidateAndJson) {
  ProviderEndpoint e;
  e.max_in_flight = 0;
  EXPECT_THROW(e.Validate(), CurationError);
  e.max_in_flight = 2;
  e.base_url = "http://localhost:1";
  EXPECT_EQ(ProviderEndpoint::FromJson(e.ToJson()).ToJson(), e.ToJson());
  EXPECT_THROW(ProviderEndpoint::FromJson({{"timeout_ms", 0}}), CurationError);
}

TEST(YesNo, LeadingTokenScan) {
  EXPECT_EQ(ParseYesNo("Absolutely, yes."), VqaAnswer::kYes);
  EXPECT_EQ(ParseYesNo("NO"), VqaAnswer::kNo);
  EXPECT_EQ(ParseYesNo("Yes! But no."), VqaAnswer::kYes);
  EXPECT_EQ(ParseYesNo("Maybe. Yes."), VqaAnswer::kUnparseable);
  EXPECT_EQ(ParseYesNo(""), VqaAnswer::kUnparseable);
  EXPECT_EQ(ParseYesNo("yesterday"), VqaAnswer::kUnparseable);
}

TEST(VqaQuestion, TemplateRoundTrip) {
  const std::string q = RenderVqaQuestion("A dog is on grass");
  EXPECT_EQ(q,
            "Based on the image, is this statement true? A dog is on grass "
            "Answer yes or no.");
  EXPECT_EQ(AssertionFromVqaQuestion(q), "A dog is on grass");
}

TEST(MockProvider, GroundedVqa) {
  MockProvider mock;
  mock.AddGround("img1", {"dog", "grass"});
  EXPECT_EQ(VqaAsk("r", "img1", RenderVqaQuestion("A dog is on the grass"), mock),
            VqaAnswer::kYes);
  EXPECT_EQ(VqaAsk("r", "img1", RenderVqaQuestion("A cat is on the grass"), mock),
            VqaAnswer::kNo);
  ProviderRequest req{"r7", "img", "p", "ssc", std::nullopt, std::nullopt};
  EXPECT_EQ(mock.Call(Route::kCaption, req).text, "caption for r7 [ssc]");
}

TEST(HttpProvider, RetriesScriptedStatusesWithBackoff) {
  MockProvider backend;
  MockProviderServer server(backend);
  server.Start();
  server.Script("r1", {429, 429});
  RecordingSleeper sleeper;
  HttpProvider provider(EndpointFor(server), sleeper.fn());
  ProviderRequest req{"r1", "img", "p", "dsc", std::nullopt, std::nullopt};
  EXPECT_EQ(provider.Call(Route::kCaption, req).text, "caption for r1 [dsc]");
  EXPECT_EQ(server.stats().attempts_by_id.at("r1"), 3u);
  ASSERT_EQ(sleeper.delays->size(), 2u);
  EXPECT_GE((*sleeper.delays)[0], milliseconds(250));
  EXPECT_GE((*sleeper.delays)[1], milliseconds(500));
}

TEST(HttpProvider, GivesUpAfterMaxRetries) {
  MockProvider backend;
  MockProviderServer server(backend);
  server.Start();
  server.Script("r2", std::vector<int>(10, 503));
  ProviderEndpoint e = EndpointFor(server);
  e.max_retries = 2;
  HttpProvider provider(e, [](milliseconds) {});
  ProviderRequest req{"r2", "img", "p", "dsc", std::nullopt, std::nullopt};
  try {
    provider.Call(Route::kCaption, req);
    FAIL();
  } catch (const CurationError& err) {
    EXPECT_EQ(err.code(), ErrorCode::kProviderFailure);
  }
  EXPECT_EQ(server.stats().attempts_by_id.at("r2"), 3u);
}

TEST(HttpProvider, NonRetryableStatusFailsFast) {
  MockProvider backend;
  MockProviderServer server(backend);
  server.Start();
  server.Script("r3", {400});
  HttpProvider provider(EndpointFor(server), [](milliseconds) {});
  ProviderRequest req{"r3", "img", "p", "dsc", std::nullopt, std::nullopt};
  EXPECT_THROW(provider.Call(Route::kCaption, req), CurationError);
  EXPECT_EQ(server.stats().attempts_by_id.at("r3"), 1u);
}

TEST(HttpProvider, RespectsInFlightBound) {
  MockProvider backend;
  MockProviderServer server(backend);
  server.Start();
  server.SetLatency(milliseconds(30));
  ProviderEndpoint e = EndpointFor(server);
  e.max_in_flight = 3;
  HttpProvider provider(e, [](milliseconds) {});
  std::vector<std::thread> threads;
  for (int i = 0; i < 12; ++i) {
    threads.emplace_back([&provider, i] {
      ProviderRequest req{"t" + std::to_string(i), "img", "p", "ssc",
                          std::nullopt, std::nullopt};
      provider.Call(Route::kCaption, req);
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(server.stats().max_in_flight, 3u);
  EXPECT_GE(server.stats().max_in_flight, 2u);
  EXPECT_EQ(server.stats().requests, 12u);
}

TEST(HttpProvider, RateLimitSpacesRequestStarts) {
  MockProvider backend;
  MockProviderServer server(backend);
  server.Start();
  ProviderEndpoint e = EndpointFor(server);
  e.rate_limit_per_s = 50;
  HttpProvider provider(e, [](milliseconds) {});
  for (int i = 0; i < 20; ++i) {
    ProviderRequest req{"q" + std::to_string(i), "img", "p", "ssc",
                        std::nullopt, std::nullopt};
    provider.Call(Route::kCaption, req);
  }
  const auto starts = server.stats().request_starts;
  ASSERT_EQ(starts.size(), 20u);
  const double seconds =
      std::chrono::duration<double>(starts.back() - starts.front()).count();
  // 19 intervals at 50/s is 0.38 s; allow 10% slack.
  EXPECT_GE(seconds, 0.38 * 0.9);
}

TEST(BoundedPool, RethrowsFirstError) {
  BoundedPool pool(2, 2);
  std::atomic<int> ran{0};
  for (int i = 0; i < 10; ++i) {
    pool.Submit([&ran, i] {
      ++ran;
      if (i == 3) throw CurationError(ErrorCode::kProviderFailure, "x");
    });
  }
  EXPECT_THROW(pool.Wait(), CurationError);
  EXPECT_EQ(ran.load(), 10);
}

}  // namespace
}  // namespace capcurate
