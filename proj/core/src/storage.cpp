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

#include "iotx/storage.hpp"

#include <mutex>

#include "iotx/timeparse.hpp"

namespace iotx {

Json TelemetryRecord::to_json() const {
  return Json{{"deviceDid", device_did.to_string()},
              {"timestamp", format_timestamp(timestamp)},
              {"fields", fields}};
}

Status TelemetryRecord::validate_fields() const {
  if (!fields.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "fields must be a flat object");
  }
  for (auto it = fields.begin(); it != fields.end(); ++it) {
    if (it.key().empty()) {
      return fail(ErrorCode::kMalformedRequest, "empty field name");
    }
    const auto& v = it.value();
    if (!v.is_string() && !v.is_number_integer() && !v.is_number_unsigned()) {
      return fail(ErrorCode::kMalformedRequest,
                  "field values must be strings or integers: " + it.key());
    }
  }
  return ok_status();
}

Status MemoryEdgeStore::put(const TelemetryRecord& record) {
  if (auto st = record.validate_fields(); !st.ok()) return st;
  std::unique_lock lock(mu_);
  partitions_[record.device_did.to_string()][record.timestamp] = record.fields;
  return ok_status();
}

std::vector<TelemetryRecord> MemoryEdgeStore::scan(const Did& device,
                                                   int64_t from, int64_t to,
                                                   bool from_exclusive) const {
  std::shared_lock lock(mu_);
  std::vector<TelemetryRecord> out;
  auto it = partitions_.find(device.to_string());
  if (it == partitions_.end()) return out;
  const auto& rows = it->second;
  auto lo = from_exclusive ? rows.upper_bound(from) : rows.lower_bound(from);
  for (; lo != rows.end() && lo->first <= to; ++lo) {
    out.push_back(TelemetryRecord{device, lo->first, lo->second});
  }
  return out;
}

std::optional<int64_t> MemoryEdgeStore::latest_timestamp(
    const Did& device) const {
  std::shared_lock lock(mu_);
  auto it = partitions_.find(device.to_string());
  if (it == partitions_.end() || it->second.empty()) return std::nullopt;
  return it->second.rbegin()->first;
}

}  // namespace iotx
