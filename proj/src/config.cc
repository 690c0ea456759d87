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

#include "ritscan/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace ritscan {
namespace {

using Json = nlohmann::ordered_json;

absl::Status CheckKeys(const Json& object, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!object.is_object()) return absl::InvalidArgumentError(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown key '", key, "' in ", where, "; expected one of ",
          absl::StrJoin(allowed, ", ")));
    }
  }
  return absl::OkStatus();
}

// Reads object[key] into *out when present.
template <typename T>
absl::Status Read(const Json& object, const std::string& key, const std::string& where,
                  T* out) {
  if (!object.contains(key)) return absl::OkStatus();
  const Json& v = object[key];
  bool ok;
  if constexpr (std::is_same_v<T, bool>) {
    ok = v.is_boolean();
  } else if constexpr (std::is_integral_v<T>) {
    ok = v.is_number_integer() && (std::is_signed_v<T> || v.is_number_unsigned());
  } else if constexpr (std::is_floating_point_v<T>) {
    ok = v.is_number();
  } else {
    ok = v.is_string();
  }
  if (!ok) return absl::InvalidArgumentError(absl::StrCat(where, ".", key, " has the wrong type"));
  *out = v.get<T>();
  return absl::OkStatus();
}

absl::Status ReadMillis(const Json& object, const std::string& key, const std::string& where,
                        Millis* out) {
  int64_t ms = out->count();
  auto status = Read(object, key, where, &ms);
  *out = Millis(ms);
  return status;
}

#define RETURN_IF_ERROR(expr)            \
  do {                                   \
    absl::Status status_ = (expr);       \
    if (!status_.ok()) return status_;   \
  } while (false)

absl::Status ReadBackend(const Json& j, BackendConfig* b) {
  const std::string where = "backend";
  RETURN_IF_ERROR(CheckKeys(j, where,
                            {"endpoint", "model", "api_key_env", "temperature", "top_p",
                             "max_output_tokens", "timeout_ms", "max_retries",
                             "backoff_base_ms", "backoff_cap_ms", "requests_per_second",
                             "jitter_seed"}));
  RETURN_IF_ERROR(Read(j, "endpoint", where, &b->endpoint));
  RETURN_IF_ERROR(Read(j, "model", where, &b->model));
  RETURN_IF_ERROR(Read(j, "api_key_env", where, &b->api_key_env));
  RETURN_IF_ERROR(Read(j, "temperature", where, &b->temperature));
  RETURN_IF_ERROR(Read(j, "top_p", where, &b->top_p));
  RETURN_IF_ERROR(Read(j, "max_output_tokens", where, &b->max_output_tokens));
  RETURN_IF_ERROR(ReadMillis(j, "timeout_ms", where, &b->timeout));
  RETURN_IF_ERROR(Read(j, "max_retries", where, &b->max_retries));
  RETURN_IF_ERROR(ReadMillis(j, "backoff_base_ms", where, &b->backoff_base));
  RETURN_IF_ERROR(ReadMillis(j, "backoff_cap_ms", where, &b->backoff_cap));
  RETURN_IF_ERROR(Read(j, "requests_per_second", where, &b->requests_per_second));
  RETURN_IF_ERROR(Read(j, "jitter_seed", where, &b->jitter_seed));
  return absl::OkStatus();
}

absl::Status ReadPrompt(const Json& j, ExperimentConfig* p) {
  const std::string where = "prompt";
  RETURN_IF_ERROR(CheckKeys(j, where, {"taxonomy", "multi_response", "shots"}));
  std::string taxonomy = TaxonomyName(p->taxonomy);
  RETURN_IF_ERROR(Read(j, "taxonomy", where, &taxonomy));
  auto parsed = ParseTaxonomy(taxonomy);
  if (!parsed) {
    return absl::InvalidArgumentError(
        absl::StrCat("prompt.taxonomy must be six-class or three-class, got ", taxonomy));
  }
  p->taxonomy = *parsed;
  RETURN_IF_ERROR(Read(j, "multi_response", where, &p->multi_response));
  RETURN_IF_ERROR(Read(j, "shots", where, &p->shots));
  return absl::OkStatus();
}

}  // namespace

const char* OutputFormatName(OutputFormat format) {
  return format == OutputFormat::kText ? "text" : "structured";
}

std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "structured") return OutputFormat::kStructured;
  return std::nullopt;
}

absl::Status ToolConfig::Validate() const {
  if (max_in_flight < 1) return absl::InvalidArgumentError("max_in_flight must be at least 1");
  RETURN_IF_ERROR(backend.Validate());
  return prompt.Validate();
}

absl::StatusOr<ToolConfig> ParseToolConfig(const std::string& json_text) {
  Json j = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("config is not valid JSON");
  ToolConfig c;
  const std::string where = "config";
  RETURN_IF_ERROR(CheckKeys(j, where,
                            {"strict_event_matching", "routed_set", "max_in_flight", "format",
                             "backend", "prompt"}));
  RETURN_IF_ERROR(Read(j, "strict_event_matching", where, &c.strict_event_matching));
  RETURN_IF_ERROR(Read(j, "max_in_flight", where, &c.max_in_flight));
  if (j.contains("routed_set")) {
    if (!j["routed_set"].is_array()) {
      return absl::InvalidArgumentError("config.routed_set must be a list of categories");
    }
    c.routed.clear();
    for (const Json& item : j["routed_set"]) {
      auto category = item.is_string() ? ParseCategory(item.get<std::string>()) : std::nullopt;
      if (!category) {
        return absl::InvalidArgumentError(
            absl::StrCat("config.routed_set: unknown category ", item.dump()));
      }
      c.routed.insert(*category);
    }
  }
  std::string format = OutputFormatName(c.format);
  RETURN_IF_ERROR(Read(j, "format", where, &format));
  auto parsed = ParseOutputFormat(format);
  if (!parsed) {
    return absl::InvalidArgumentError("config.format must be text or structured");
  }
  c.format = *parsed;
  if (j.contains("backend")) RETURN_IF_ERROR(ReadBackend(j["backend"], &c.backend));
  if (j.contains("prompt")) RETURN_IF_ERROR(ReadPrompt(j["prompt"], &c.prompt));
  RETURN_IF_ERROR(c.Validate());
  return c;
}

absl::StatusOr<ToolConfig> LoadToolConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  std::stringstream text;
  text << in.rdbuf();
  auto config = ParseToolConfig(text.str());
  if (!config.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

std::string ToolConfigJson(const ToolConfig& c) {
  Json routed = Json::array();
  for (ThreatCategory category : c.routed) routed.push_back(CategoryName(category));
  const BackendConfig& b = c.backend;
  Json j{{"strict_event_matching", c.strict_event_matching},
         {"routed_set", routed},
         {"max_in_flight", c.max_in_flight},
         {"format", OutputFormatName(c.format)},
         {"backend",
          {{"endpoint", b.endpoint},
           {"model", b.model},
           {"api_key_env", b.api_key_env},
           {"temperature", b.temperature},
           {"top_p", b.top_p},
           {"max_output_tokens", b.max_output_tokens},
           {"timeout_ms", b.timeout.count()},
           {"max_retries", b.max_retries},
           {"backoff_base_ms", b.backoff_base.count()},
           {"backoff_cap_ms", b.backoff_cap.count()},
           {"requests_per_second", b.requests_per_second},
           {"jitter_seed", b.jitter_seed}}},
         {"prompt",
          {{"taxonomy", TaxonomyName(c.prompt.taxonomy)},
           {"multi_response", c.prompt.multi_response},
           {"shots", c.prompt.shots}}}};
  return j.dump(2) + "\n";
}

}  // namespace ritscan
