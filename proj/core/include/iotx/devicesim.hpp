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

#ifndef IOTX_DEVICESIM_HPP
#define IOTX_DEVICESIM_HPP

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "iotx/exchange.hpp"

namespace iotx {

enum class DeviceProfile { kLoRaTempLocation, kEthernetGeneric };

Result<DeviceProfile> device_profile_from(std::string_view name);
std::string_view device_profile_name(DeviceProfile profile);
std::string_view connectivity_type_for(DeviceProfile profile);

/// One simulated device. Signing stays in the keystore; the device only
/// carries its custody handle.
struct SimDevice {
  DeviceProfile profile = DeviceProfile::kLoRaTempLocation;
  std::string connectivity_id;
  std::string key_handle;
  int64_t emit_interval = 60;  // seconds, > 0
  uint64_t rng_seed = 0;
  std::string lat;  // fixed per device, decimal string
  std::string lon;
  Did did;  // known after registration
  std::deque<Json> command_queue;
};

using SignFn = std::function<Result<Signature>(
    std::string_view key_handle, std::span<const uint8_t> message)>;
using IngestFn =
    std::function<Status(std::string_view connectivity_id, const Json& body)>;

/// One signed telemetry record for `at`. Pure function of (device config,
/// at): the LoRa profile emits {temp, lat, lon, loraId} where temp moves a
/// seeded step in [-0.5, +0.5] off the 25.0 base, lat/lon are fixed, and
/// loraId is the connectivity id. Body shape matches what the exchange
/// ingests: {"timestamp", "fields", "signature"}.
Result<Json> emit(const SimDevice& device, int64_t at, const SignFn& sign);

Status deliver_command(SimDevice& device, const Json& command);

struct FleetReport {
  std::map<std::string, int> records_per_device;  // by connectivity id
  std::vector<std::pair<std::string, Error>> errors;
  int total_ingested = 0;
};

/// A registered fleet: drives emissions and receives control commands from
/// the exchange (it implements DeviceGateway).
class Fleet final : public DeviceGateway {
 public:
  /// Config: JSON list of {"profile", "connectivityId", "emitInterval",
  /// "rngSeed", "lat", "lon"}.
  static Result<std::unique_ptr<Fleet>> from_config(const Json& config);

  /// Registers every device with the exchange under the given owner.
  Status register_all(Exchange& exchange, const Did& owner,
                      std::string_view serial_prefix = "SIM");

  void add(SimDevice device);

  /// Emits each device's schedule over [start, start + duration]: ticks at
  /// start + k * interval for k = 1..floor(duration / interval). Per-record
  /// errors are reported without halting the fleet.
  FleetReport run(int64_t start, int64_t duration, const SignFn& sign,
                  const IngestFn& ingest);

  Status deliver(const Did& device, const Json& command) override;

  SimDevice* device_by_connectivity(std::string_view connectivity_id);
  std::vector<SimDevice>& devices() { return devices_; }

 private:
  std::mutex mu_;  // guards command queues
  std::vector<SimDevice> devices_;
};

}  // namespace iotx

#endif  // IOTX_DEVICESIM_HPP
