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

#ifndef IOTX_EXCHANGE_HPP
#define IOTX_EXCHANGE_HPP

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iotx/credential.hpp"
#include "iotx/keystore.hpp"
#include "iotx/policy.hpp"
#include "iotx/privacy.hpp"
#include "iotx/storage.hpp"

namespace iotx {

struct DeviceRegistration {
  Did did;
  std::string connectivity_type;
  std::string connectivity_id;
  Did owner_did;
  int64_t registered_at = 0;

  Json to_json() const;
};

struct VcIdLedgerEntry {
  std::string vc_id;
  Did issued_to;
  int64_t issued_at = 0;
  bool consumed = false;  // transitions false -> true at most once
};

enum class GrantState { kActive, kExpired };

/// Exchange-side state for an accepted credential.
struct AccessGrant {
  std::string vc_id;
  Did customer_did;
  std::vector<Did> device_ids;
  int64_t window_start = 0;
  int64_t window_end = 0;
  int64_t period = 0;
  std::set<std::string> permissions;
  // Empty map when the credential had privacyPreserving = false.
  std::map<Did, std::vector<std::string>> filter_chains;
  std::map<Did, std::optional<int64_t>> last_access;
  GrantState state = GrantState::kActive;

  Json summary_json() const;
};

/// Where accepted control commands go. The device simulator implements
/// this; the default sink below queues per device for inspection.
class DeviceGateway {
 public:
  virtual ~DeviceGateway() = default;
  virtual Status deliver(const Did& device, const Json& command) = 0;
};

class QueueGateway final : public DeviceGateway {
 public:
  Status deliver(const Did& device, const Json& command) override;
  std::vector<Json> drain(const Did& device);

 private:
  std::mutex mu_;
  std::map<std::string, std::deque<Json>> queues_;
};

struct ExchangeConfig {
  int default_capacity = 16;
};

/// The IoT Exchange service core: device registration, the vcId ledger,
/// credential presentation and grant activation, access enforcement,
/// telemetry ingestion, and filter-pipeline dispatch.
class Exchange {
 public:
  Exchange(ExchangeConfig config, const Clock& clock, Keystore& keystore,
           Resolver& resolver, std::string device_method,
           const FilterRegistry& filters, EdgeStore& store,
           DeviceGateway* gateway = nullptr);

  /// Two-step registration: connectivity enrollment, then DID creation with
  /// the connectivity identifier bound as a serviceEndpoint. Atomic —
  /// failure leaves no residue.
  Result<DeviceRegistration> register_device(const Did& owner_did,
                                             std::string_view connectivity_type,
                                             std::string_view connectivity_id,
                                             std::string_view device_unique_id);

  Result<std::string> issue_vc_id(const Did& owner_did);

  /// Presentation flow, in order: (1) verify the credential; (2) ledger
  /// check and consumption; (3) capacity re-check and device programming;
  /// (4) filter pipeline setup when privacyPreserving; (5) ready
  /// notification (the returned summary). A consumed vcId is not returned
  /// on capacity failure — replay probing buys nothing; the owner reissues.
  Result<Json> present_credential(const VerifiableCredential& vc);

  /// Gate order: grant active, device in grant, permission, window, period
  /// (asOf - lastAccess >= period). On success returns records since the
  /// previous access (window start on first access), run through the
  /// device's filter chain, and advances lastAccess.
  Result<std::vector<TelemetryRecord>> access_data(
      const std::optional<Did>& customer_did, std::string_view vc_id,
      const Did& device_did, int64_t as_of);

  /// Same gates with the control permission; the command runs through the
  /// device's chain (pre-processing) and lands in the gateway queue.
  Status access_control(const std::optional<Did>& customer_did,
                        std::string_view vc_id, const Did& device_did,
                        const Json& command, int64_t as_of);

  /// Verifies the record signature under the key mapped to the
  /// connectivity id, enforces per-device timestamp monotonicity, writes to
  /// storage. Body: {"timestamp", "fields", "signature"}.
  Status ingest_telemetry(std::string_view connectivity_id, const Json& body);

  /// Transitions every Active grant whose window has passed. Idempotent;
  /// returns the number expired by this call.
  int expire_grants(int64_t now);

  int active_grant_count(const Did& device) const;

  void set_owner_policy(const Did& owner, OwnerPolicy policy);
  std::optional<OwnerPolicy> owner_policy(const Did& owner) const;

  std::optional<AccessGrant> grant(std::string_view vc_id) const;
  std::optional<VcIdLedgerEntry> ledger_entry(std::string_view vc_id) const;
  Result<DeviceRegistration> registration(const Did& device) const;

  const Clock& clock() const { return clock_; }
  Keystore& keystore() { return keystore_; }
  Resolver& resolver() { return resolver_; }
  EdgeStore& store() { return store_; }

  /// Message a device signs for one telemetry record; also used by the
  /// simulator so both sides agree byte-for-byte.
  static Result<std::vector<uint8_t>> telemetry_signing_bytes(
      std::string_view connectivity_id, const std::string& timestamp_text,
      const Json& fields);

 private:
  Result<std::vector<TelemetryRecord>> access_gate(
      const std::optional<Did>& customer_did, std::string_view vc_id,
      const Did& device_did, int64_t as_of, std::string_view permission,
      const Json* command);

  ExchangeConfig config_;
  const Clock& clock_;
  Keystore& keystore_;
  Resolver& resolver_;
  std::string device_method_;
  const FilterRegistry& filters_;
  EdgeStore& store_;
  QueueGateway default_gateway_;
  DeviceGateway* gateway_;

  mutable std::mutex mu_;
  std::map<std::string, DeviceRegistration> devices_;       // by DID text
  std::map<std::string, std::string> connectivity_index_;   // conn key -> DID text
  std::map<std::string, VcIdLedgerEntry> ledger_;           // by vcId
  std::map<std::string, AccessGrant> grants_;               // by vcId
  std::map<std::string, OwnerPolicy> policies_;             // by owner DID text
};

}  // namespace iotx

#endif  // IOTX_EXCHANGE_HPP
