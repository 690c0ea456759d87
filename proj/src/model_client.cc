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

#include "ritscan/model_client.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"

namespace ritscan {
namespace {

using Json = nlohmann::json;

class FixedBackend : public Backend {
 public:
  FixedBackend(std::string text, std::string name)
      : text_(std::move(text)), name_(std::move(name)) {}

  absl::StatusOr<Completion> Complete(const BackendRequest& request) override {
    Completion c;
    c.text = text_;
    c.record.request_id = request.key;
    c.record.attempts.push_back(AttemptRecord{200, Millis(0), std::nullopt, Millis(0)});
    return c;
  }
  std::string Name() const override { return name_; }

 private:
  std::string text_;
  std::string name_;
};

class SteadySleeper : public Sleeper {
 public:
  void SleepFor(Millis duration) override { std::this_thread::sleep_for(duration); }
};

class SteadyClock : public Clock {
 public:
  std::chrono::steady_clock::time_point Now() override {
    return std::chrono::steady_clock::now();
  }
};

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url,
                    const std::vector<std::pair<std::string, std::string>>& headers,
                    const std::string& body, Millis timeout) override {
    HttpResponse out;
    size_t scheme = url.find("://");
    size_t path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    if (!client.is_valid()) {
      out.error = absl::StrCat("invalid endpoint ", url);
      return out;
    }
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    httplib::Headers h;
    for (const auto& [name, value] : headers) h.emplace(name, value);
    auto result = client.Post(path, h, body, "application/json");
    if (!result) {
      httplib::Error e = result.error();
      out.timed_out = e == httplib::Error::ConnectionTimeout || e == httplib::Error::Read;
      out.error = httplib::to_string(e);
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    return out;
  }
};

FailureClass ClassifyStatus(int status) {
  if (status == 401 || status == 403) return FailureClass::kAuth;
  if (status == 429) return FailureClass::kRateLimited;
  if (status >= 400 && status < 500) return FailureClass::kClientError;
  if (status >= 500) return FailureClass::kUnavailable;
  return FailureClass::kMalformedResponse;
}

}  // namespace

const char* FailureClassName(FailureClass c) {
  switch (c) {
    case FailureClass::kRateLimited:
      return "rate-limited";
    case FailureClass::kUnavailable:
      return "unavailable";
    case FailureClass::kTimeout:
      return "timeout";
    case FailureClass::kMalformedResponse:
      return "malformed-response";
    case FailureClass::kAuth:
      return "auth";
    case FailureClass::kClientError:
      return "client-error";
  }
  return "unavailable";
}

bool IsRetryable(FailureClass c) {
  return c != FailureClass::kAuth && c != FailureClass::kClientError;
}

std::unique_ptr<Backend> MakeAcceptAllBackend() {
  return std::make_unique<FixedBackend>("YES", "accept-all");
}

std::unique_ptr<Backend> MakeRejectAllBackend() {
  return std::make_unique<FixedBackend>("NO", "reject-all");
}

TableBackend::TableBackend(std::map<std::string, std::string> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {}

absl::StatusOr<std::unique_ptr<TableBackend>> TableBackend::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open stub table ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j = Json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("stub table ", path, " is not a JSON object"));
  }
  std::map<std::string, std::string> table;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("stub table ", path, ": value for '", key, "' is not a string"));
    }
    table[key] = value.get<std::string>();
  }
  return std::make_unique<TableBackend>(std::move(table), "table:" + path);
}

absl::StatusOr<Completion> TableBackend::Complete(const BackendRequest& request) {
  auto it = table_.find(absl::StrCat(request.purpose, "|", request.key));
  if (it == table_.end()) it = table_.find(request.key);
  if (it == table_.end()) {
    return absl::NotFoundError(absl::StrCat(name_, " has no entry for ", request.purpose,
                                            "|", request.key));
  }
  Completion c;
  c.text = it->second;
  c.record.request_id = request.key;
  c.record.attempts.push_back(AttemptRecord{200, Millis(0), std::nullopt, Millis(0)});
  return c;
}

std::unique_ptr<Backend> MakeGroundTruthEchoBackend(
    std::map<std::string, std::string> labels) {
  return std::make_unique<TableBackend>(std::move(labels), "ground-truth-echo");
}

absl::Status BackendConfig::Validate() const {
  if (endpoint.empty()) return absl::InvalidArgumentError("endpoint is empty");
  if (model.empty()) return absl::InvalidArgumentError("model is empty");
  if (!(temperature >= 0)) return absl::InvalidArgumentError("temperature must be >= 0");
  if (!(top_p > 0 && top_p <= 1)) return absl::InvalidArgumentError("top_p must be in (0, 1]");
  if (max_output_tokens <= 0) {
    return absl::InvalidArgumentError("max_output_tokens must be positive");
  }
  if (timeout.count() <= 0) return absl::InvalidArgumentError("timeout must be positive");
  if (max_retries < 0) return absl::InvalidArgumentError("max_retries must be >= 0");
  if (backoff_base.count() < 0 || backoff_cap < backoff_base) {
    return absl::InvalidArgumentError("backoff_base must be in [0, backoff_cap]");
  }
  if (requests_per_second < 0) {
    return absl::InvalidArgumentError("requests_per_second must be >= 0");
  }
  return absl::OkStatus();
}

std::unique_ptr<HttpTransport> MakeHttplibTransport() {
  return std::make_unique<HttplibTransport>();
}

Sleeper& RealSleeper() {
  static SteadySleeper* sleeper = new SteadySleeper;
  return *sleeper;
}

Clock& RealClock() {
  static SteadyClock* clock = new SteadyClock;
  return *clock;
}

TokenBucket::TokenBucket(double rate_per_second, double burst, Clock& clock,
                         Sleeper& sleeper)
    : rate_(rate_per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      clock_(clock),
      sleeper_(sleeper),
      last_(clock.Now()) {}

void TokenBucket::Acquire() {
  while (true) {
    Millis wait;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto now = clock_.Now();
      double elapsed = std::chrono::duration<double>(now - last_).count();
      last_ = now;
      tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
      if (tokens_ >= 1) {
        tokens_ -= 1;
        return;
      }
      wait = Millis(static_cast<int64_t>(std::ceil((1 - tokens_) / rate_ * 1000)));
    }
    sleeper_.SleepFor(wait);
  }
}

ChatCompletionsBackend::ChatCompletionsBackend(BackendConfig config, std::string api_key,
                                               std::unique_ptr<HttpTransport> transport,
                                               Sleeper& sleeper, Clock& clock)
    : config_(std::move(config)),
      api_key_(std::move(api_key)),
      transport_(std::move(transport)),
      sleeper_(sleeper),
      clock_(clock),
      rng_(config_.jitter_seed) {
  if (config_.requests_per_second > 0) {
    limiter_.emplace(config_.requests_per_second, 1.0, clock_, sleeper_);
  }
}

absl::StatusOr<std::unique_ptr<ChatCompletionsBackend>> ChatCompletionsBackend::Create(
    const BackendConfig& config) {
  if (auto status = config.Validate(); !status.ok()) return status;
  std::string key;
  if (const char* value = std::getenv(config.api_key_env.c_str())) key = value;
  if (key.empty() && config.api_key_required) {
    return absl::FailedPreconditionError(absl::StrCat(
        "environment variable ", config.api_key_env, " is not set"));
  }
  return std::make_unique<ChatCompletionsBackend>(config, std::move(key),
                                                  MakeHttplibTransport(), RealSleeper(),
                                                  RealClock());
}

std::string ChatCompletionsBackend::Name() const {
  return absl::StrCat("http:", config_.model);
}

Millis ChatCompletionsBackend::BackoffDelay(int retry, double jitter) const {
  double base = static_cast<double>(config_.backoff_base.count()) * std::ldexp(1.0, retry);
  double delay = base * (1.0 + std::clamp(jitter, 0.0, 1.0) / 2.0);
  double cap = static_cast<double>(config_.backoff_cap.count());
  return Millis(static_cast<int64_t>(std::min(delay, cap)));
}

std::string ChatCompletionsBackend::RequestBody(const std::string& prompt) const {
  Json body{{"model", config_.model},
            {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})},
            {"temperature", config_.temperature},
            {"top_p", config_.top_p},
            {"max_tokens", config_.max_output_tokens}};
  return body.dump();
}

absl::StatusOr<std::string> ChatCompletionsBackend::ParseResponseBody(
    const std::string& body) {
  Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::DataLossError("response is not JSON");
  try {
    const Json& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) return absl::DataLossError("content is not a string");
    return content.get<std::string>();
  } catch (const Json::exception& e) {
    return absl::DataLossError(absl::StrCat("unexpected response shape: ", e.what()));
  }
}

absl::StatusOr<Completion> ChatCompletionsBackend::Complete(const BackendRequest& request) {
  Completion out;
  {
    std::lock_guard<std::mutex> lock(id_mu_);
    out.record.request_id = absl::StrCat("req-", next_id_++);
  }
  std::vector<std::pair<std::string, std::string>> headers;
  if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);
  const std::string body = RequestBody(request.prompt);

  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (limiter_) limiter_->Acquire();
    auto start = clock_.Now();
    HttpResponse response = transport_->Post(config_.endpoint, headers, body, config_.timeout);
    AttemptRecord record;
    record.status = response.status;
    record.latency = std::chrono::duration_cast<Millis>(clock_.Now() - start);

    std::optional<FailureClass> error;
    std::string text;
    if (response.status == 0) {
      error = response.timed_out ? FailureClass::kTimeout : FailureClass::kUnavailable;
    } else if (response.status >= 200 && response.status < 300) {
      auto parsed = ParseResponseBody(response.body);
      if (!parsed.ok() || absl::StripAsciiWhitespace(*parsed).empty()) {
        error = FailureClass::kMalformedResponse;
      } else {
        text = *std::move(parsed);
      }
    } else {
      error = ClassifyStatus(response.status);
    }

    if (!error) {
      out.record.attempts.push_back(record);
      out.text = std::move(text);
      return out;
    }
    record.error = error;
    if (!IsRetryable(*error) || attempt == config_.max_retries) {
      out.record.attempts.push_back(record);
      out.record.exhausted = error;
      return out;
    }
    double jitter;
    {
      std::lock_guard<std::mutex> lock(rng_mu_);
      jitter = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    }
    record.delay_before_next = BackoffDelay(attempt, jitter);
    out.record.attempts.push_back(record);
    sleeper_.SleepFor(record.delay_before_next);
  }
  return out;
}

}  // namespace ritscan
