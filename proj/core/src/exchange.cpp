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

#include "iotx/exchange.hpp"

#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

std::string connectivity_key(std::string_view type, std::string_view id) {
  return std::string(type) + "|" + std::string(id);
}

}  // namespace

Json DeviceRegistration::to_json() const {
  return Json{{"did", did.to_string()},
              {"connectivityType", connectivity_type},
              {"connectivityId", connectivity_id},
              {"ownerDid", owner_did.to_string()},
              {"registeredAt", format_timestamp(registered_at)}};
}

Json AccessGrant::summary_json() const {
  Json devices = Json::array();
  for (const auto& d : device_ids) devices.push_back(d.to_string());
  Json perms = Json::array();
  for (const auto& p : permissions) perms.push_back(p);
  Json chains = Json::object();
  for (const auto& [did, chain] : filter_chains) {
    Json names = Json::array();
    for (const auto& f : chain) names.push_back(f);
    chains[did.to_string()] = names;
  }
  return Json{{"ready", state == GrantState::kActive},
              {"vcId", vc_id},
              {"customerDid", customer_did.to_string()},
              {"deviceIds", devices},
              {"window", Json{{"start", format_timestamp(window_start)},
                              {"end", format_timestamp(window_end)}}},
              {"period", period},
              {"permissions", perms},
              {"filterChains", chains},
              {"state", state == GrantState::kActive ? "Active" : "Expired"}};
}

Status QueueGateway::deliver(const Did& device, const Json& command) {
  std::lock_guard lock(mu_);
  queues_[device.to_string()].push_back(command);
  return ok_status();
}

std::vector<Json> QueueGateway::drain(const Did& device) {
  std::lock_guard lock(mu_);
  auto& q = queues_[device.to_string()];
  std::vector<Json> out(q.begin(), q.end());
  q.clear();
  return out;
}

Exchange::Exchange(ExchangeConfig config, const Clock& clock,
                   Keystore& keystore, Resolver& resolver,
                   std::string device_method, const FilterRegistry& filters,
                   EdgeStore& store, DeviceGateway* gateway)
    : config_(config),
      clock_(clock),
      keystore_(keystore),
      resolver_(resolver),
      device_method_(std::move(device_method)),
      filters_(filters),
      store_(store),
      gateway_(gateway == nullptr ? &default_gateway_ : gateway) {}

Result<DeviceRegistration> Exchange::register_device(
    const Did& owner_did, std::string_view connectivity_type,
    std::string_view connectivity_id, std::string_view device_unique_id) {
  if (auto st = validate_connectivity_id(connectivity_type, connectivity_id);
      !st.ok()) {
    return st.error();
  }
  if (!resolver_.resolve(owner_did).ok()) {
    return fail(ErrorCode::kOwnerUnresolvable, owner_did.to_string());
  }

  std::lock_guard lock(mu_);
  const std::string conn_key =
      connectivity_key(connectivity_type, connectivity_id);
  if (connectivity_index_.count(conn_key) != 0) {
    return fail(ErrorCode::kDuplicateConnectivityId,
                "connectivity pair already registered: " + conn_key);
  }
  if (keystore_.lookup_by_serial(device_unique_id).ok()) {
    return fail(ErrorCode::kDuplicateIdentity,
                "serial already registered: " + std::string(device_unique_id));
  }
  if (keystore_.lookup_by_connectivity(connectivity_id).ok()) {
    return fail(ErrorCode::kDuplicateIdentity,
                "connectivity id already mapped: " + std::string(connectivity_id));
  }

  // Step 1 validated the connectivity enrollment; step 2 creates the DID.
  // All uniqueness checks passed under the lock, so the commits below
  // cannot collide and the sequence is atomic.
  KeyRecord key = keystore_.generate_key(clock_);
  auto signer = keystore_.signer(key.key_handle);
  if (!signer.ok()) return signer.error();
  auto doc = resolver_.create_did(
      device_method_, key.public_key,
      {ServiceEntry{Did{}, std::string(connectivity_type),
                    std::string(connectivity_id)}},
      *signer.value());
  if (!doc.ok()) return doc.error();

  IdentityMapping mapping;
  mapping.device_unique_id = std::string(device_unique_id);
  mapping.did = doc.value().id;
  mapping.connectivity_id = std::string(connectivity_id);
  mapping.key_handle = key.key_handle;
  if (auto st = keystore_.map_identity(mapping); !st.ok()) return st.error();

  DeviceRegistration reg;
  reg.did = doc.value().id;
  reg.connectivity_type = std::string(connectivity_type);
  reg.connectivity_id = std::string(connectivity_id);
  reg.owner_did = owner_did;
  reg.registered_at = clock_.now();
  devices_[reg.did.to_string()] = reg;
  connectivity_index_[conn_key] = reg.did.to_string();
  return reg;
}

Result<std::string> Exchange::issue_vc_id(const Did& owner_did) {
  if (!resolver_.resolve(owner_did).ok()) {
    return fail(ErrorCode::kOwnerUnresolvable, owner_did.to_string());
  }
  std::lock_guard lock(mu_);
  std::string id = random_hex(16);
  while (ledger_.count(id) != 0) id = random_hex(16);
  ledger_[id] = VcIdLedgerEntry{id, owner_did, clock_.now(), false};
  return id;
}

Result<Json> Exchange::present_credential(const VerifiableCredential& vc) {
  // (1) verify the credential and every DID it names
  if (auto st = verify_credential(vc, resolver_); !st.ok()) {
    return fail(ErrorCode::kVerificationFailed,
                std::string(st.error().token()), 1);
  }

  std::lock_guard lock(mu_);
  // (2) the vcId must be one this exchange handed out, to this issuer,
  // and never used before
  auto entry = ledger_.find(vc.vc_id);
  if (entry == ledger_.end()) {
    return fail(ErrorCode::kUnknownVcId, vc.vc_id, 2);
  }
  if (entry->second.issued_to != vc.issuer) {
    return fail(ErrorCode::kVcIdIssuerMismatch,
                "vcId was issued to " + entry->second.issued_to.to_string(), 2);
  }
  if (entry->second.consumed) {
    return fail(ErrorCode::kVcIdAlreadyUsed, vc.vc_id, 2);
  }
  entry->second.consumed = true;  // stays consumed even if a later step fails

  // (3) capacity re-check, then device programming
  const auto& subject = vc.credential_subject;
  for (const auto& device : subject.device_ids) {
    auto reg = devices_.find(device.to_string());
    if (reg == devices_.end()) {
      return fail(ErrorCode::kUnknownDevice,
                  "device not registered here: " + device.to_string(), 3);
    }
    int active = 0;
    for (const auto& [_, g] : grants_) {
      if (g.state != GrantState::kActive) continue;
      for (const auto& d : g.device_ids) {
        if (d == device) {
          ++active;
          break;
        }
      }
    }
    if (active + 1 > config_.default_capacity) {
      return fail(ErrorCode::kCapacityExceeded, device.to_string(), 3);
    }
  }

  AccessGrant grant;
  grant.vc_id = vc.vc_id;
  grant.customer_did = subject.id;
  grant.device_ids = subject.device_ids;
  grant.window_start = subject.start;
  grant.window_end = subject.end;
  grant.period = subject.period;
  grant.permissions = subject.permissions;
  for (const auto& device : subject.device_ids) {
    grant.last_access[device] = std::nullopt;
  }

  // (4) filter pipeline, only for privacy-preserving credentials
  if (subject.privacy_preserving) {
    auto policy = policies_.find(vc.issuer.to_string());
    if (policy != policies_.end()) {
      for (const auto& device : subject.device_ids) {
        auto chain = filter_chain_for(device, policy->second);
        if (!chain.empty()) grant.filter_chains[device] = std::move(chain);
      }
    }
  }

  grant.state = GrantState::kActive;
  grants_[grant.vc_id] = grant;

  // (5) the summary is the ready notification
  return grant.summary_json();
}

Result<std::vector<TelemetryRecord>> Exchange::access_gate(
    const std::optional<Did>& customer_did, std::string_view vc_id,
    const Did& device_did, int64_t as_of, std::string_view permission,
    const Json* command) {
  std::lock_guard lock(mu_);
  auto it = grants_.find(std::string(vc_id));
  if (it == grants_.end() || it->second.state != GrantState::kActive) {
    return fail(ErrorCode::kGrantNotActive, std::string(vc_id), 1);
  }
  AccessGrant& grant = it->second;

  bool in_grant = false;
  for (const auto& d : grant.device_ids) {
    if (d == device_did) {
      in_grant = true;
      break;
    }
  }
  if (!in_grant) {
    return fail(ErrorCode::kDeviceNotInGrant, device_did.to_string(), 2);
  }

  if (grant.permissions.count(std::string(permission)) == 0) {
    return fail(ErrorCode::kPermissionDenied,
                "grant lacks permission: " + std::string(permission), 3);
  }
  if (customer_did && *customer_did != grant.customer_did) {
    return fail(ErrorCode::kPermissionDenied,
                "credential belongs to a different customer", 3);
  }

  if (as_of < grant.window_start || as_of > grant.window_end) {
    return fail(ErrorCode::kOutsideWindow, format_timestamp(as_of), 4);
  }

  auto& last = grant.last_access[device_did];
  if (last.has_value() && as_of - *last < grant.period) {
    return fail(ErrorCode::kPeriodNotElapsed,
                "next access at " + format_timestamp(*last + grant.period), 5);
  }

  std::vector<std::string> chain;
  if (auto fc = grant.filter_chains.find(device_did);
      fc != grant.filter_chains.end()) {
    chain = fc->second;
  }

  std::vector<TelemetryRecord> out;
  if (command == nullptr) {
    // Data flow: records since the previous access, filtered on the way out.
    const int64_t from = last.has_value() ? *last : grant.window_start;
    auto records = store_.scan(device_did, from, as_of,
                               /*from_exclusive=*/last.has_value());
    out.reserve(records.size());
    for (const auto& r : records) {
      auto filtered = apply_chain(filters_, chain, r);
      if (!filtered.ok()) return filtered.error();
      out.push_back(filtered.take());
    }
  } else {
    // Control flow: the command is pre-processed through the same chain.
    TelemetryRecord wrapped{device_did, as_of, *command};
    auto filtered = apply_chain(filters_, chain, wrapped);
    if (!filtered.ok()) return filtered.error();
    if (auto st = gateway_->deliver(device_did, filtered.value().fields);
        !st.ok()) {
      return st.error();
    }
  }
  last = as_of;
  return out;
}

Result<std::vector<TelemetryRecord>> Exchange::access_data(
    const std::optional<Did>& customer_did, std::string_view vc_id,
    const Did& device_did, int64_t as_of) {
  return access_gate(customer_did, vc_id, device_did, as_of, kPermissionData,
                     nullptr);
}

Status Exchange::access_control(const std::optional<Did>& customer_did,
                                std::string_view vc_id, const Did& device_did,
                                const Json& command, int64_t as_of) {
  if (!command.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "command must be a flat object");
  }
  auto r = access_gate(customer_did, vc_id, device_did, as_of,
                       kPermissionControl, &command);
  if (!r.ok()) return r.error();
  return ok_status();
}

Result<std::vector<uint8_t>> Exchange::telemetry_signing_bytes(
    std::string_view connectivity_id, const std::string& timestamp_text,
    const Json& fields) {
  return canonical_bytes(Json{{"connectivityId", std::string(connectivity_id)},
                              {"timestamp", timestamp_text},
                              {"fields", fields}});
}

Status Exchange::ingest_telemetry(std::string_view connectivity_id,
                                  const Json& body) {
  auto mapping = keystore_.lookup_by_connectivity(connectivity_id);
  if (!mapping.ok()) {
    return fail(ErrorCode::kUnknownDevice,
                "no device mapped to connectivity id " +
                    std::string(connectivity_id));
  }
  if (!body.is_object() || !body.contains("timestamp") ||
      !body.contains("fields") || !body.contains("signature")) {
    return fail(ErrorCode::kMalformedRequest,
                "record needs timestamp, fields, signature");
  }
  if (!body.at("timestamp").is_string()) {
    return fail(ErrorCode::kMalformedRequest, "timestamp must be a string");
  }
  const std::string ts_text = body.at("timestamp").get<std::string>();
  auto ts = parse_timestamp(ts_text);
  if (!ts.ok()) return ts.error();

  auto sig = from_hex_array<kSignatureBytes>(
      body.at("signature").get<std::string>());
  if (!sig.ok()) return sig.error();

  auto key = keystore_.public_key_of(mapping.value().key_handle);
  if (!key.ok()) return key.error();

  auto message =
      telemetry_signing_bytes(connectivity_id, ts_text, body.at("fields"));
  if (!message.ok()) return message.error();
  if (!ed25519_verify(message.value(), sig.value(), key.value())) {
    return fail(ErrorCode::kSignatureInvalid,
                "record not signed by the mapped device key");
  }

  TelemetryRecord record{mapping.value().did, ts.value(), body.at("fields")};
  if (auto st = record.validate_fields(); !st.ok()) return st;

  std::lock_guard lock(mu_);
  auto latest = store_.latest_timestamp(record.device_did);
  if (latest.has_value() && record.timestamp < *latest) {
    return fail(ErrorCode::kNonMonotoneTimestamp,
                "record predates the device's latest at " +
                    format_timestamp(*latest));
  }
  return store_.put(record);
}

int Exchange::expire_grants(int64_t now) {
  std::lock_guard lock(mu_);
  int expired = 0;
  for (auto& [_, grant] : grants_) {
    if (grant.state == GrantState::kActive && grant.window_end < now) {
      grant.state = GrantState::kExpired;
      ++expired;
    }
  }
  return expired;
}

int Exchange::active_grant_count(const Did& device) const {
  std::lock_guard lock(mu_);
  int count = 0;
  for (const auto& [_, g] : grants_) {
    if (g.state != GrantState::kActive) continue;
    for (const auto& d : g.device_ids) {
      if (d == device) {
        ++count;
        break;
      }
    }
  }
  return count;
}

void Exchange::set_owner_policy(const Did& owner, OwnerPolicy policy) {
  std::lock_guard lock(mu_);
  policies_[owner.to_string()] = std::move(policy);
}

std::optional<OwnerPolicy> Exchange::owner_policy(const Did& owner) const {
  std::lock_guard lock(mu_);
  auto it = policies_.find(owner.to_string());
  if (it == policies_.end()) return std::nullopt;
  return it->second;
}

std::optional<AccessGrant> Exchange::grant(std::string_view vc_id) const {
  std::lock_guard lock(mu_);
  auto it = grants_.find(std::string(vc_id));
  if (it == grants_.end()) return std::nullopt;
  return it->second;
}

std::optional<VcIdLedgerEntry> Exchange::ledger_entry(
    std::string_view vc_id) const {
  std::lock_guard lock(mu_);
  auto it = ledger_.find(std::string(vc_id));
  if (it == ledger_.end()) return std::nullopt;
  return it->second;
}

Result<DeviceRegistration> Exchange::registration(const Did& device) const {
  std::lock_guard lock(mu_);
  auto it = devices_.find(device.to_string());
  if (it == devices_.end()) {
    return fail(ErrorCode::kUnknownDevice, device.to_string());
  }
  return it->second;
}

}  // namespace iotx
