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

#ifndef IOTX_PRIVACY_HPP
#define IOTX_PRIVACY_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iotx/storage.hpp"

namespace iotx {

enum class FilterMode { kRedact, kDrop };

/// Redaction sentinel. A redacted field stays visible as "***" so consumers
/// can tell it existed; Drop removes it outright.
inline constexpr std::string_view kRedactedValue = "***";

/// A named field-level sanitizer. Target patterns are exact field names or
/// prefix patterns with a trailing `*` (`geo.*` matches `geo.lat`).
struct FilterDef {
  std::string name;
  std::vector<std::string> target_fields;
  FilterMode mode = FilterMode::kRedact;
};

/// Named filters available to policy chains. Built-ins `redact_location`
/// (lat, lon, location) and `redact_device_id` (loraId, macAddress,
/// deviceSerial) are preloaded; config entries may not shadow them.
class FilterRegistry {
 public:
  FilterRegistry();

  Status add(FilterDef def);

  /// Config format: JSON list of {"name", "targetFields", "mode"} with mode
  /// "redact" or "drop".
  Status load_config(const Json& entries);

  Result<FilterDef> get(std::string_view name) const;
  bool has(std::string_view name) const;

 private:
  std::map<std::string, FilterDef, std::less<>> filters_;
};

/// Pure per-record application. Redact replaces matched values with "***";
/// Drop removes matched fields. deviceDid and timestamp pass through
/// untouched; one record in, one record out.
TelemetryRecord apply_filter(const FilterDef& filter,
                             const TelemetryRecord& record);

/// Left fold of apply_filter over the chain, in order.
Result<TelemetryRecord> apply_chain(const FilterRegistry& registry,
                                    std::span<const std::string> chain,
                                    const TelemetryRecord& record);

}  // namespace iotx

#endif  // IOTX_PRIVACY_HPP
