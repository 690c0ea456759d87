// Copyright 2026 The Ritscan Authors
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

// Adjudicator backends: deterministic offline stubs and a chat-completions
// HTTP client with retries, exponential backoff with jitter, and a token
// bucket rate limiter.
//
// Wire format (POST to `endpoint`):
//   request  {"model": M, "messages": [{"role": "user", "content": PROMPT}],
//             "temperature": T, "top_p": P, "max_tokens": N}
//   response {"choices": [{"message": {"content": TEXT}}]}
// The bearer token is read from the environment variable named by
// `api_key_env` and never from flags or files.

#ifndef RITSCAN_MODEL_CLIENT_H_
#define RITSCAN_MODEL_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace ritscan {

using Millis = std::chrono::milliseconds;

enum class FailureClass {
  kRateLimited,        // 429
  kUnavailable,        // 5xx or connection failure
  kTimeout,            // transport timeout
  kMalformedResponse,  // blank or unparseable body
  kAuth,               // 401, 403
  kClientError,        // any other 4xx
};

const char* FailureClassName(FailureClass c);
bool IsRetryable(FailureClass c);

struct AttemptRecord {
  int status = 0;  // HTTP status; 0 when no response arrived
  Millis latency{0};
  std::optional<FailureClass> error;
  Millis delay_before_next{0};  // backoff scheduled after this attempt

  bool operator==(const AttemptRecord&) const = default;
};

struct CallRecord {
  std::string request_id;
  std::vector<AttemptRecord> attempts;
  std::optional<FailureClass> exhausted;  // set when no attempt succeeded

  bool ok() const { return !exhausted.has_value(); }
};

struct BackendRequest {
  std::string prompt;
  // "classify" or a subtask name such as "trigger-overlap".
  std::string purpose;
  // Finding key or instance id; used by table and echo stubs.
  std::string key;
};

struct Completion {
  std::string text;  // empty when exhausted
  CallRecord record;

  bool ok() const { return record.ok(); }
};

// Errors are configuration problems (for example a table stub without an
// entry); exhausted retries are reported through the CallRecord instead.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual absl::StatusOr<Completion> Complete(const BackendRequest& request) = 0;
  virtual std::string Name() const = 0;
};

// Answers "YES" to every request.
std::unique_ptr<Backend> MakeAcceptAllBackend();
// Answers "NO" to every request.
std::unique_ptr<Backend> MakeRejectAllBackend();

// Looks up "<purpose>|<key>", then "<key>". A missing entry is an error.
class TableBackend : public Backend {
 public:
  TableBackend(std::map<std::string, std::string> table, std::string name);

  // A JSON object whose values are response strings.
  static absl::StatusOr<std::unique_ptr<TableBackend>> Load(const std::string& path);

  absl::StatusOr<Completion> Complete(const BackendRequest& request) override;
  std::string Name() const override { return name_; }

 private:
  std::map<std::string, std::string> table_;
  std::string name_;
};

// Echoes a ground-truth label per instance id.
std::unique_ptr<Backend> MakeGroundTruthEchoBackend(
    std::map<std::string, std::string> labels);

struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "RITSCAN_API_KEY";
  bool api_key_required = true;
  double temperature = 0.2;
  double top_p = 0.95;
  int max_output_tokens = 2048;
  Millis timeout{60000};
  int max_retries = 4;
  Millis backoff_base{1000};
  Millis backoff_cap{60000};
  double requests_per_second = 0;  // 0 disables the limiter
  uint64_t jitter_seed = 0;

  absl::Status Validate() const;
};

struct HttpResponse {
  int status = 0;  // 0 when the transport failed
  std::string body;
  bool timed_out = false;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url,
                            const std::vector<std::pair<std::string, std::string>>& headers,
                            const std::string& body, Millis timeout) = 0;
};

std::unique_ptr<HttpTransport> MakeHttplibTransport();

class Sleeper {
 public:
  virtual ~Sleeper() = default;
  virtual void SleepFor(Millis duration) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point Now() = 0;
};

Sleeper& RealSleeper();
Clock& RealClock();

// Blocks in Acquire() until a token is available.
class TokenBucket {
 public:
  TokenBucket(double rate_per_second, double burst, Clock& clock, Sleeper& sleeper);
  void Acquire();

 private:
  double rate_;
  double burst_;
  double tokens_;
  Clock& clock_;
  Sleeper& sleeper_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

class ChatCompletionsBackend : public Backend {
 public:
  // `api_key` empty means no Authorization header.
  ChatCompletionsBackend(BackendConfig config, std::string api_key,
                         std::unique_ptr<HttpTransport> transport, Sleeper& sleeper,
                         Clock& clock);

  // Validates the config and resolves the key from the environment.
  static absl::StatusOr<std::unique_ptr<ChatCompletionsBackend>> Create(
      const BackendConfig& config);

  absl::StatusOr<Completion> Complete(const BackendRequest& request) override;
  std::string Name() const override;

  // Delay before retry number `retry` (0-based) for jitter in [0, 1):
  // base * 2^retry * (1 + jitter / 2), capped.
  Millis BackoffDelay(int retry, double jitter) const;

  std::string RequestBody(const std::string& prompt) const;
  static absl::StatusOr<std::string> ParseResponseBody(const std::string& body);

 private:
  BackendConfig config_;
  std::string api_key_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper& sleeper_;
  Clock& clock_;
  std::optional<TokenBucket> limiter_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
  std::mutex id_mu_;
  uint64_t next_id_ = 1;
};

}  // namespace ritscan

#endif  // RITSCAN_MODEL_CLIENT_H_
