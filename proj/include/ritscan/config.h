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

// The command-line tool's configuration file.

#ifndef RITSCAN_CONFIG_H_
#define RITSCAN_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "ritscan/eval.h"
#include "ritscan/hybrid.h"
#include "ritscan/model_client.h"

namespace ritscan {

enum class OutputFormat { kText, kStructured };

const char* OutputFormatName(OutputFormat format);  // "text", "structured"
std::optional<OutputFormat> ParseOutputFormat(std::string_view name);

// JSON layout, every key optional, unknown keys rejected:
//
//   {
//     "strict_event_matching": true,
//     "routed_set": ["WAC", "WTC"],
//     "max_in_flight": 4,
//     "format": "text",
//     "backend": {
//       "endpoint": "https://api.openai.com/v1/chat/completions",
//       "model": "gpt-4o",
//       "api_key_env": "RITSCAN_API_KEY",
//       "temperature": 0.2,
//       "top_p": 0.95,
//       "max_output_tokens": 2048,
//       "timeout_ms": 60000,
//       "max_retries": 4,
//       "backoff_base_ms": 1000,
//       "backoff_cap_ms": 60000,
//       "requests_per_second": 0,
//       "jitter_seed": 0
//     },
//     "prompt": {"taxonomy": "six-class", "multi_response": true, "shots": 0}
//   }
struct ToolConfig {
  bool strict_event_matching = true;
  RoutedSet routed = DefaultRoutedSet();
  int max_in_flight = 4;
  OutputFormat format = OutputFormat::kText;
  BackendConfig backend;
  ExperimentConfig prompt;

  absl::Status Validate() const;
};

absl::StatusOr<ToolConfig> ParseToolConfig(const std::string& json_text);
absl::StatusOr<ToolConfig> LoadToolConfig(const std::string& path);
// Every key, in the layout above.
std::string ToolConfigJson(const ToolConfig& config);

}  // namespace ritscan

#endif  // RITSCAN_CONFIG_H_
