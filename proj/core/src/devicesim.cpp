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

#include "iotx/devicesim.hpp"

#include <cstdio>

#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

// splitmix64; plenty for telemetry synthesis.
uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Step in [-0.5, +0.5], a pure function of (seed, at).
double temp_step(uint64_t seed, int64_t at) {
  const uint64_t h = mix64(seed ^ mix64(static_cast<uint64_t>(at)));
  return (static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53)) - 0.5;
}

std::string temp_string(uint64_t seed, int64_t at) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", 25.0 + temp_step(seed, at));
  return buf;
}

}  // namespace

Result<DeviceProfile> device_profile_from(std::string_view name) {
  if (name == "LoRaTempLocation") return DeviceProfile::kLoRaTempLocation;
  if (name == "EthernetGeneric") return DeviceProfile::kEthernetGeneric;
  return fail(ErrorCode::kMalformedRequest,
              "unknown device profile: " + std::string(name));
}

std::string_view device_profile_name(DeviceProfile profile) {
  return profile == DeviceProfile::kLoRaTempLocation ? "LoRaTempLocation"
                                                     : "EthernetGeneric";
}

std::string_view connectivity_type_for(DeviceProfile profile) {
  return profile == DeviceProfile::kLoRaTempLocation ? "LoRaDeviceEUI"
                                                     : "EthernetMacAddress";
}

Result<Json> emit(const SimDevice& device, int64_t at, const SignFn& sign) {
  Json fields = Json::object();
  fields["temp"] = temp_string(device.rng_seed, at);
  if (device.profile == DeviceProfile::kLoRaTempLocation) {
    fields["lat"] = device.lat;
    fields["lon"] = device.lon;
    fields["loraId"] = device.connectivity_id;
  } else {
    fields["macAddress"] = device.connectivity_id;
  }

  const std::string ts = format_timestamp(at);
  auto message =
      Exchange::telemetry_signing_bytes(device.connectivity_id, ts, fields);
  if (!message.ok()) return message.error();
  auto sig = sign(device.key_handle, message.value());
  if (!sig.ok()) return sig.error();

  return Json{{"timestamp", ts},
              {"fields", fields},
              {"signature", to_hex(sig.value())}};
}

Status deliver_command(SimDevice& device, const Json& command) {
  device.command_queue.push_back(command);
  return ok_status();
}

Result<std::unique_ptr<Fleet>> Fleet::from_config(const Json& config) {
  if (!config.is_array()) {
    return fail(ErrorCode::kMalformedRequest, "fleet config must be a list");
  }
  auto fleet = std::make_unique<Fleet>();
  for (const auto& e : config) {
    try {
      SimDevice d;
      auto profile = device_profile_from(e.at("profile").get<std::string>());
      if (!profile.ok()) return profile.error();
      d.profile = profile.value();
      d.connectivity_id = e.at("connectivityId").get<std::string>();
      d.emit_interval = e.at("emitInterval").get<int64_t>();
      if (d.emit_interval <= 0) {
        return fail(ErrorCode::kMalformedRequest, "emitInterval must be > 0");
      }
      d.rng_seed = e.at("rngSeed").get<uint64_t>();
      if (e.contains("lat")) d.lat = e.at("lat").get<std::string>();
      if (e.contains("lon")) d.lon = e.at("lon").get<std::string>();
      if (auto st = validate_connectivity_id(connectivity_type_for(d.profile),
                                             d.connectivity_id);
          !st.ok()) {
        return st.error();
      }
      fleet->devices_.push_back(std::move(d));
    } catch (const Json::exception& ex) {
      return fail(ErrorCode::kMalformedRequest,
                  std::string("bad fleet entry: ") + ex.what());
    }
  }
  return fleet;
}

Status Fleet::register_all(Exchange& exchange, const Did& owner,
                           std::string_view serial_prefix) {
  int n = 0;
  for (auto& d : devices_) {
    auto reg = exchange.register_device(
        owner, connectivity_type_for(d.profile), d.connectivity_id,
        std::string(serial_prefix) + "-" + std::to_string(n++));
    if (!reg.ok()) return reg.error();
    d.did = reg.value().did;
    auto mapping = exchange.keystore().lookup_by_connectivity(d.connectivity_id);
    if (!mapping.ok()) return mapping.error();
    d.key_handle = mapping.value().key_handle;
  }
  return ok_status();
}

void Fleet::add(SimDevice device) { devices_.push_back(std::move(device)); }

FleetReport Fleet::run(int64_t start, int64_t duration, const SignFn& sign,
                       const IngestFn& ingest) {
  FleetReport report;
  for (auto& d : devices_) {
    report.records_per_device[d.connectivity_id] = 0;
    const int64_t ticks = duration / d.emit_interval;
    for (int64_t k = 1; k <= ticks; ++k) {
      const int64_t at = start + k * d.emit_interval;
      auto body = emit(d, at, sign);
      if (!body.ok()) {
        report.errors.emplace_back(d.connectivity_id, body.error());
        continue;  // this device is unhealthy; others are unaffected
      }
      auto st = ingest(d.connectivity_id, body.value());
      if (!st.ok()) {
        report.errors.emplace_back(d.connectivity_id, st.error());
        continue;
      }
      ++report.records_per_device[d.connectivity_id];
      ++report.total_ingested;
    }
  }
  return report;
}

Status Fleet::deliver(const Did& device, const Json& command) {
  std::lock_guard lock(mu_);
  for (auto& d : devices_) {
    if (d.did == device) {
      return deliver_command(d, command);
    }
  }
  return fail(ErrorCode::kUnknownDevice, device.to_string());
}

SimDevice* Fleet::device_by_connectivity(std::string_view connectivity_id) {
  for (auto& d : devices_) {
    if (d.connectivity_id == connectivity_id) return &d;
  }
  return nullptr;
}

}  // namespace iotx
