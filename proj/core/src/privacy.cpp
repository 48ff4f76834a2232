// Copyright 2026 The IoT Exchange Authors
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

#include "iotx/privacy.hpp"

namespace iotx {
namespace {

const char* kBuiltinNames[] = {"redact_location", "redact_device_id"};

bool is_builtin(std::string_view name) {
  for (const char* b : kBuiltinNames) {
    if (name == b) return true;
  }
  return false;
}

bool pattern_matches(std::string_view pattern, std::string_view field) {
  if (!pattern.empty() && pattern.back() == '*') {
    return field.substr(0, pattern.size() - 1) == pattern.substr(0, pattern.size() - 1);
  }
  return pattern == field;
}

bool filter_matches(const FilterDef& f, std::string_view field) {
  for (const auto& p : f.target_fields) {
    if (pattern_matches(p, field)) return true;
  }
  return false;
}

}  // namespace

FilterRegistry::FilterRegistry() {
  filters_["redact_location"] =
      FilterDef{"redact_location", {"lat", "lon", "location"}, FilterMode::kRedact};
  filters_["redact_device_id"] =
      FilterDef{"redact_device_id",
                {"loraId", "macAddress", "deviceSerial"},
                FilterMode::kRedact};
}

Status FilterRegistry::add(FilterDef def) {
  if (def.name.empty()) {
    return fail(ErrorCode::kFilterInvalid, "filter name must be nonempty");
  }
  if (def.target_fields.empty()) {
    return fail(ErrorCode::kFilterInvalid,
                "filter must target at least one field: " + def.name);
  }
  if (is_builtin(def.name)) {
    return fail(ErrorCode::kFilterInvalid,
                "config may not shadow built-in filter " + def.name);
  }
  if (filters_.count(def.name) != 0) {
    return fail(ErrorCode::kFilterInvalid, "duplicate filter name " + def.name);
  }
  filters_[def.name] = std::move(def);
  return ok_status();
}

Status FilterRegistry::load_config(const Json& entries) {
  if (!entries.is_array()) {
    return fail(ErrorCode::kFilterInvalid, "filter config must be a list");
  }
  for (const auto& e : entries) {
    FilterDef def;
    try {
      def.name = e.at("name").get<std::string>();
      for (const auto& t : e.at("targetFields")) {
        def.target_fields.push_back(t.get<std::string>());
      }
      const std::string mode = e.at("mode").get<std::string>();
      if (mode == "redact") {
        def.mode = FilterMode::kRedact;
      } else if (mode == "drop") {
        def.mode = FilterMode::kDrop;
      } else {
        return fail(ErrorCode::kFilterInvalid, "unknown filter mode " + mode);
      }
    } catch (const Json::exception& ex) {
      return fail(ErrorCode::kFilterInvalid,
                  std::string("bad filter config entry: ") + ex.what());
    }
    if (auto st = add(std::move(def)); !st.ok()) return st;
  }
  return ok_status();
}

Result<FilterDef> FilterRegistry::get(std::string_view name) const {
  auto it = filters_.find(name);
  if (it == filters_.end()) {
    return fail(ErrorCode::kUnknownFilter,
                "no filter named " + std::string(name));
  }
  return it->second;
}

bool FilterRegistry::has(std::string_view name) const {
  return filters_.find(name) != filters_.end();
}

TelemetryRecord apply_filter(const FilterDef& filter,
                             const TelemetryRecord& record) {
  TelemetryRecord out{record.device_did, record.timestamp, Json::object()};
  for (auto it = record.fields.begin(); it != record.fields.end(); ++it) {
    if (filter_matches(filter, it.key())) {
      if (filter.mode == FilterMode::kRedact) {
        out.fields[it.key()] = std::string(kRedactedValue);
      }
      // Drop: omit the field.
    } else {
      out.fields[it.key()] = it.value();
    }
  }
  return out;
}

Result<TelemetryRecord> apply_chain(const FilterRegistry& registry,
                                    std::span<const std::string> chain,
                                    const TelemetryRecord& record) {
  TelemetryRecord current = record;
  for (const auto& name : chain) {
    auto filter = registry.get(name);
    if (!filter.ok()) return filter.error();
    current = apply_filter(filter.value(), current);
  }
  return current;
}

}  // namespace iotx
