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

#ifndef IOTX_STORAGE_HPP
#define IOTX_STORAGE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotx/canonical.hpp"
#include "iotx/did.hpp"

namespace iotx {

/// One timestamped device reading. Fields are a flat map of string ->
/// (string | integer); decimals travel as strings so records stay inside
/// the canonicalizable value domain.
struct TelemetryRecord {
  Did device_did;
  int64_t timestamp = 0;
  Json fields = Json::object();

  Json to_json() const;

  /// Field names nonempty; values strings or integers; no nesting.
  Status validate_fields() const;
};

/// Edge store: ordered scans by (device, timestamp range), one partition
/// per device. Wide-column semantics — a put at an existing (device,
/// timestamp) upserts. Distribution and replication live outside this
/// interface.
class EdgeStore {
 public:
  virtual ~EdgeStore() = default;

  virtual Status put(const TelemetryRecord& record) = 0;

  /// Records with from <= ts <= to (from exclusive when from_exclusive),
  /// in ascending timestamp order.
  virtual std::vector<TelemetryRecord> scan(const Did& device, int64_t from,
                                            int64_t to,
                                            bool from_exclusive = false) const = 0;

  virtual std::optional<int64_t> latest_timestamp(const Did& device) const = 0;
};

class MemoryEdgeStore final : public EdgeStore {
 public:
  Status put(const TelemetryRecord& record) override;
  std::vector<TelemetryRecord> scan(const Did& device, int64_t from,
                                    int64_t to,
                                    bool from_exclusive = false) const override;
  std::optional<int64_t> latest_timestamp(const Did& device) const override;

 private:
  mutable std::shared_mutex mu_;
  // partition key: DID text; clustering key: timestamp
  std::unordered_map<std::string, std::map<int64_t, Json>> partitions_;
};

}  // namespace iotx

#endif  // IOTX_STORAGE_HPP
