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

#include <barrier>
#include <random>
#include <thread>

#include <doctest.h>

#include "harness.hpp"
#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

using namespace iotx;
using iotx::testing::Agent;
using iotx::testing::make_agent;
using iotx::testing::make_runtime;
using iotx::testing::random_eui;

namespace {

struct ExchangeFixture {
  std::unique_ptr<ExchangeRuntime> rt;
  Agent owner;
  Agent customer;
  std::vector<Did> devices;
  std::vector<std::string> euis;
  LocalExchangeClient client;

  explicit ExchangeFixture(int device_count = 2, int capacity = 16)
      : rt(make_runtime(1'700'000'000, capacity)),
        owner(make_agent(*rt)),
        customer(make_agent(*rt)),
        client(rt->exchange()) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < device_count; ++i) {
      euis.push_back(random_eui(rng));
      auto reg = rt->exchange().register_device(owner.did, "LoRaDeviceEUI",
                                                euis.back(),
                                                "SN-" + std::to_string(i));
      REQUIRE(reg.ok());
      devices.push_back(reg.value().did);
    }
  }

  int64_t now() const { return rt->clock().now(); }

  // Issues a VC through the real flow: resolved DIDs, exchange-minted vcId.
  VerifiableCredential issue(std::set<std::string> permissions = {"data"},
                             int64_t window_days = 30, int64_t period = 21600,
                             const OwnerPolicy* policy = nullptr) {
    OwnerPolicy defaults;
    const OwnerPolicy& p = policy != nullptr ? *policy : defaults;
    AccessRequestDraft draft;
    draft.customer_did = customer.did;
    draft.device_ids = devices;
    draft.start = now();
    draft.end = draft.start + window_days * 86400;
    draft.period = period;
    draft.permissions = std::move(permissions);
    IssueContext ctx{owner.did, *owner.signer, client, rt->resolver(), {},
                     rt->clock()};
    auto vc = owner_issue_flow(draft, p, ctx);
    REQUIRE(vc.ok());
    return vc.take();
  }

  // Signs and ingests one record for device index `i` at `ts`.
  Status ingest(size_t i, int64_t ts, Json fields) {
    auto mapping = rt->keystore().lookup_by_connectivity(euis[i]);
    REQUIRE(mapping.ok());
    const std::string ts_text = format_timestamp(ts);
    auto message = Exchange::telemetry_signing_bytes(euis[i], ts_text, fields);
    REQUIRE(message.ok());
    auto sig = rt->keystore().sign_with(mapping.value().key_handle,
                                        message.value());
    REQUIRE(sig.ok());
    return rt->exchange().ingest_telemetry(
        euis[i], Json{{"timestamp", ts_text},
                      {"fields", fields},
                      {"signature", to_hex(sig.value())}});
  }
};

}  // namespace

TEST_CASE("registration binds the connectivity id into the DID document") {
  auto rt = make_runtime();
  Agent owner = make_agent(*rt);
  auto reg = rt->exchange().register_device(owner.did, "EthernetMacAddress",
                                            "00:0a:95:9d:68:16", "SN-1");
  REQUIRE(reg.ok());
  auto doc = rt->resolver().resolve(reg.value().did);
  REQUIRE(doc.ok());
  REQUIRE(doc.value().services.size() == 1);
  CHECK(doc.value().services[0].service_endpoint == "00:0a:95:9d:68:16");
  CHECK(doc.value().services[0].type == "EthernetMacAddress");

  // Same MAC again: the connectivity pair is taken.
  auto dup = rt->exchange().register_device(owner.did, "EthernetMacAddress",
                                            "00:0a:95:9d:68:16", "SN-2");
  CHECK(dup.code() == ErrorCode::kDuplicateConnectivityId);
}

TEST_CASE("LoRa registration round-trips through resolve and the mapping") {
  auto rt = make_runtime();
  Agent owner = make_agent(*rt);
  const std::string eui = "a81758fffe03ab42";
  auto reg = rt->exchange().register_device(owner.did, "LoRaDeviceEUI", eui,
                                            "SN-LORA");
  REQUIRE(reg.ok());
  auto doc = rt->resolver().resolve(reg.value().did);
  REQUIRE(doc.ok());
  CHECK(doc.value().services[0].service_endpoint == eui);

  auto mapping = rt->keystore().lookup_by_connectivity(eui);
  REQUIRE(mapping.ok());
  CHECK(mapping.value().did == reg.value().did);
  CHECK(mapping.value().device_unique_id == "SN-LORA");
  CHECK(rt->keystore().lookup_by_did(reg.value().did).ok());
  CHECK(rt->keystore().lookup_by_serial("SN-LORA").ok());
}

TEST_CASE("registration failures leave no residue") {
  auto rt = make_runtime();
  Agent owner = make_agent(*rt);

  CHECK(rt->exchange()
            .register_device(owner.did, "EthernetMacAddress", "not-a-mac",
                             "SN-X")
            .code() == ErrorCode::kServiceSyntaxError);
  CHECK(rt->exchange()
            .register_device(Did{"iotx", "0000000000000042"},
                             "EthernetMacAddress", "00:00:00:00:00:01", "SN-X")
            .code() == ErrorCode::kOwnerUnresolvable);
  // Nothing was keyed or mapped for the failed attempts.
  CHECK(rt->keystore().key_count() == 0);
  CHECK_FALSE(rt->keystore().lookup_by_serial("SN-X").ok());
}

TEST_CASE("vc ids are unique, ledgered and owner-bound") {
  auto rt = make_runtime();
  Agent owner = make_agent(*rt);
  auto a = rt->exchange().issue_vc_id(owner.did);
  auto b = rt->exchange().issue_vc_id(owner.did);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.value() != b.value());
  CHECK(a.value().size() == 32);
  CHECK(a.value().find_first_not_of("0123456789abcdef") == std::string::npos);
  auto entry = rt->exchange().ledger_entry(a.value());
  REQUIRE(entry.has_value());
  CHECK(entry->issued_to == owner.did);
  CHECK_FALSE(entry->consumed);

  CHECK(rt->exchange().issue_vc_id(Did{"iotx", "0000000000000077"}).code() ==
        ErrorCode::kOwnerUnresolvable);
}

TEST_CASE("presentation activates a grant with the owner's filter pipeline") {
  ExchangeFixture fx;
  OwnerPolicy policy;
  policy.filter_spec = {FilterSpecEntry{
      {fx.devices.begin(), fx.devices.end()},
      {"redact_location", "redact_device_id"}}};
  fx.rt->exchange().set_owner_policy(fx.owner.did, policy);

  auto vc = fx.issue();
  REQUIRE(vc.credential_subject.privacy_preserving);
  auto summary = fx.rt->exchange().present_credential(vc);
  REQUIRE(summary.ok());
  CHECK(summary.value().at("ready") == true);
  CHECK(summary.value().at("state") == "Active");

  auto grant = fx.rt->exchange().grant(vc.vc_id);
  REQUIRE(grant.has_value());
  CHECK(grant->state == GrantState::kActive);
  REQUIRE(grant->filter_chains.count(fx.devices[0]) == 1);
  CHECK(grant->filter_chains.at(fx.devices[0]) ==
        std::vector<std::string>{"redact_location", "redact_device_id"});

  // The ledger entry is now consumed.
  CHECK(fx.rt->exchange().ledger_entry(vc.vc_id)->consumed);
}

TEST_CASE("an exempt customer's grant carries no filter chains") {
  ExchangeFixture fx;
  OwnerPolicy policy;
  policy.privacy_exempt_list.insert(fx.customer.did);
  policy.filter_spec = {FilterSpecEntry{
      {fx.devices.begin(), fx.devices.end()}, {"redact_location"}}};
  fx.rt->exchange().set_owner_policy(fx.owner.did, policy);

  auto vc = fx.issue({"data"}, 30, 21600, &policy);
  REQUIRE_FALSE(vc.credential_subject.privacy_preserving);
  auto summary = fx.rt->exchange().present_credential(vc);
  REQUIRE(summary.ok());
  CHECK(fx.rt->exchange().grant(vc.vc_id)->filter_chains.empty());
}

TEST_CASE("credentials are single use") {
  ExchangeFixture fx;
  auto vc = fx.issue();
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  auto second = fx.rt->exchange().present_credential(vc);
  CHECK(second.code() == ErrorCode::kVcIdAlreadyUsed);
  CHECK(second.error().step == 2);
}

TEST_CASE("self-invented and misissued vc ids are rejected") {
  ExchangeFixture fx;
  auto vc = fx.issue();

  auto forged_fields = UnsignedCredential{
      "00000000000000000000000000000000", vc.issuer, vc.issuance_date,
      vc.credential_subject, {}};
  auto forged = sign_credential(forged_fields, *fx.owner.signer,
                                fx.rt->resolver());
  REQUIRE(forged.ok());
  auto rejected = fx.rt->exchange().present_credential(forged.value());
  CHECK(rejected.code() == ErrorCode::kUnknownVcId);

  // A vcId minted for a different owner agent fails the issuer check. The
  // other owner signs the credential itself, so only the ledger binding is
  // at fault.
  Agent other_owner = make_agent(*fx.rt);
  auto foreign_id = fx.rt->exchange().issue_vc_id(fx.owner.did);
  REQUIRE(foreign_id.ok());
  auto mismatch_fields = UnsignedCredential{
      foreign_id.value(), other_owner.did, fx.now(), vc.credential_subject, {}};
  auto mismatch = sign_credential(mismatch_fields, *other_owner.signer,
                                  fx.rt->resolver());
  REQUIRE(mismatch.ok());
  auto rejected2 = fx.rt->exchange().present_credential(mismatch.value());
  CHECK(rejected2.code() == ErrorCode::kVcIdIssuerMismatch);
}

TEST_CASE("verification failures surface with the failing reason") {
  ExchangeFixture fx;
  auto vc = fx.issue();
  vc.credential_subject.period += 1;  // breaks the proof
  auto rejected = fx.rt->exchange().present_credential(vc);
  CHECK(rejected.code() == ErrorCode::kVerificationFailed);
  CHECK(rejected.error().step == 1);
  CHECK(rejected.error().message == "ProofInvalid");
}

TEST_CASE("capacity failure consumes the vcId without granting") {
  ExchangeFixture fx(1, /*capacity=*/1);
  auto first = fx.issue();
  REQUIRE(fx.rt->exchange().present_credential(first).ok());

  auto second = fx.issue();
  auto rejected = fx.rt->exchange().present_credential(second);
  CHECK(rejected.code() == ErrorCode::kCapacityExceeded);
  CHECK(rejected.error().step == 3);
  // No rollback: replaying the same credential cannot probe further.
  CHECK(fx.rt->exchange().ledger_entry(second.vc_id)->consumed);
  CHECK(fx.rt->exchange().present_credential(second).code() ==
        ErrorCode::kVcIdAlreadyUsed);
  CHECK(fx.rt->exchange().active_grant_count(fx.devices[0]) == 1);
}

TEST_CASE("access gates fire in order with the documented period semantics") {
  ExchangeFixture fx;
  auto vc = fx.issue();  // period 21600
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t t0 = fx.now();

  // Ingest some records inside the window.
  REQUIRE(fx.ingest(0, t0 + 10, Json{{"temp", "25.0"}}).ok());
  REQUIRE(fx.ingest(0, t0 + 20, Json{{"temp", "25.1"}}).ok());

  auto first = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                             fx.devices[0], t0 + 100);
  REQUIRE(first.ok());
  CHECK(first.value().size() == 2);

  // 21599 s after the first access: one second early.
  auto early = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                             fx.devices[0], t0 + 100 + 21599);
  CHECK(early.code() == ErrorCode::kPeriodNotElapsed);

  // Exactly one period later: the >= comparison admits it.
  auto on_time = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                               fx.devices[0], t0 + 100 + 21600);
  CHECK(on_time.ok());

  // Past the window end.
  auto outside = fx.rt->exchange().access_data(
      fx.customer.did, vc.vc_id, fx.devices[0], vc.credential_subject.end + 1);
  CHECK(outside.code() == ErrorCode::kOutsideWindow);

  // A device outside the grant.
  Agent other = make_agent(*fx.rt);
  auto not_in_grant = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                                    other.did, t0 + 100);
  CHECK(not_in_grant.code() == ErrorCode::kDeviceNotInGrant);

  // A grant that was never activated.
  auto no_grant = fx.rt->exchange().access_data(
      fx.customer.did, "ffffffffffffffffffffffffffffffff", fx.devices[0],
      t0 + 100);
  CHECK(no_grant.code() == ErrorCode::kGrantNotActive);
}

TEST_CASE("data access returns only records since the previous access") {
  ExchangeFixture fx;
  auto vc = fx.issue({"data"}, 30, /*period=*/100);
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t t0 = fx.now();

  REQUIRE(fx.ingest(0, t0 + 10, Json{{"temp", "1"}}).ok());
  REQUIRE(fx.ingest(0, t0 + 50, Json{{"temp", "2"}}).ok());
  auto first = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                             fx.devices[0], t0 + 50);
  REQUIRE(first.ok());
  CHECK(first.value().size() == 2);  // window start through asOf, inclusive

  REQUIRE(fx.ingest(0, t0 + 120, Json{{"temp", "3"}}).ok());
  auto second = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                              fx.devices[0], t0 + 150);
  REQUIRE(second.ok());
  REQUIRE(second.value().size() == 1);  // the t0+50 record is not repeated
  CHECK(second.value()[0].fields.at("temp") == "3");
}

TEST_CASE("privacy-preserving grants never leak filtered fields") {
  ExchangeFixture fx;
  OwnerPolicy policy;
  policy.filter_spec = {FilterSpecEntry{
      {fx.devices.begin(), fx.devices.end()},
      {"redact_location", "redact_device_id"}}};
  fx.rt->exchange().set_owner_policy(fx.owner.did, policy);
  auto vc = fx.issue();
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t t0 = fx.now();

  REQUIRE(fx.ingest(0, t0 + 5,
                    Json{{"temp", "24.9"},
                         {"lat", "1.3521"},
                         {"lon", "103.8198"},
                         {"loraId", fx.euis[0]}})
              .ok());
  auto records = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                               fx.devices[0], t0 + 10);
  REQUIRE(records.ok());
  REQUIRE(records.value().size() == 1);
  const auto& fields = records.value()[0].fields;
  CHECK(fields.at("lat") == "***");
  CHECK(fields.at("lon") == "***");
  CHECK(fields.at("loraId") == "***");
  CHECK(fields.at("temp") == "24.9");
}

TEST_CASE("control commands pass the gates and reach the device queue") {
  ExchangeFixture fx;
  auto vc = fx.issue({"control"});
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t t0 = fx.now();

  auto accepted = fx.rt->exchange().access_control(
      fx.customer.did, vc.vc_id, fx.devices[0],
      Json{{"setpoint", "21.5"}}, t0 + 5);
  REQUIRE(accepted.ok());
  auto queued = fx.rt->gateway().drain(fx.devices[0]);
  REQUIRE(queued.size() == 1);
  CHECK(queued[0].at("setpoint") == "21.5");

  // Data-only grants cannot control.
  auto data_vc = fx.issue({"data"});
  REQUIRE(fx.rt->exchange().present_credential(data_vc).ok());
  auto denied = fx.rt->exchange().access_control(
      fx.customer.did, data_vc.vc_id, fx.devices[0], Json{{"x", 1}}, t0 + 6);
  CHECK(denied.code() == ErrorCode::kPermissionDenied);

  // Control to a device outside the grant.
  Agent stray = make_agent(*fx.rt);
  CHECK(fx.rt->exchange()
            .access_control(fx.customer.did, vc.vc_id, stray.did,
                            Json{{"x", 1}}, t0 + 7)
            .code() == ErrorCode::kDeviceNotInGrant);
}

TEST_CASE("control commands are pre-processed through the filter chain") {
  ExchangeFixture fx;
  OwnerPolicy policy;
  policy.filter_spec = {FilterSpecEntry{
      {fx.devices.begin(), fx.devices.end()}, {"redact_location"}}};
  fx.rt->exchange().set_owner_policy(fx.owner.did, policy);
  auto vc = fx.issue({"control"});
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());

  REQUIRE(fx.rt->exchange()
              .access_control(fx.customer.did, vc.vc_id, fx.devices[0],
                              Json{{"lat", "9.9"}, {"mode", "eco"}},
                              fx.now() + 5)
              .ok());
  auto queued = fx.rt->gateway().drain(fx.devices[0]);
  REQUIRE(queued.size() == 1);
  CHECK(queued[0].at("lat") == "***");
  CHECK(queued[0].at("mode") == "eco");
}

TEST_CASE("ingestion verifies authenticity and monotonicity") {
  ExchangeFixture fx;
  const int64_t t0 = fx.now();

  SUBCASE("round trip through the store") {
    REQUIRE(fx.ingest(0, t0 + 1, Json{{"temp", "25.0"}}).ok());
    auto rows = fx.rt->store().scan(fx.devices[0], 0, t0 + 100);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields.at("temp") == "25.0");
  }

  SUBCASE("wrong key is rejected") {
    // Sign with device 1's key, submit as device 0.
    auto mapping = fx.rt->keystore().lookup_by_connectivity(fx.euis[1]);
    REQUIRE(mapping.ok());
    const std::string ts_text = format_timestamp(t0 + 1);
    const Json fields{{"temp", "25.0"}};
    auto message =
        Exchange::telemetry_signing_bytes(fx.euis[0], ts_text, fields);
    REQUIRE(message.ok());
    auto sig = fx.rt->keystore().sign_with(mapping.value().key_handle,
                                           message.value());
    REQUIRE(sig.ok());
    auto st = fx.rt->exchange().ingest_telemetry(
        fx.euis[0], Json{{"timestamp", ts_text},
                         {"fields", fields},
                         {"signature", to_hex(sig.value())}});
    CHECK(st.code() == ErrorCode::kSignatureInvalid);
  }

  SUBCASE("regressing timestamps are rejected, equal ones upsert") {
    REQUIRE(fx.ingest(0, t0 + 100, Json{{"temp", "25.0"}}).ok());
    CHECK(fx.ingest(0, t0 + 99, Json{{"temp", "25.1"}}).code() ==
          ErrorCode::kNonMonotoneTimestamp);
    CHECK(fx.ingest(0, t0 + 100, Json{{"temp", "25.2"}}).ok());
  }

  SUBCASE("unmapped connectivity ids are unknown devices") {
    CHECK(fx.rt->exchange()
              .ingest_telemetry("ffffffffffffffff",
                                Json{{"timestamp", format_timestamp(t0)},
                                     {"fields", Json{{"t", "1"}}},
                                     {"signature", std::string(128, '0')}})
              .code() == ErrorCode::kUnknownDevice);
  }
}

TEST_CASE("expiry is a clean idempotent sweep") {
  ExchangeFixture fx;
  CHECK(fx.rt->exchange().expire_grants(fx.now()) == 0);  // nothing to do

  auto vc = fx.issue({"data"}, /*window_days=*/1);
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t end = vc.credential_subject.end;

  CHECK(fx.rt->exchange().expire_grants(end) == 0);  // not yet: end == now
  CHECK(fx.rt->exchange().expire_grants(end + 1) == 1);
  CHECK(fx.rt->exchange().grant(vc.vc_id)->state == GrantState::kExpired);
  CHECK(fx.rt->exchange().expire_grants(end + 1) == 0);  // idempotent

  CHECK(fx.rt->exchange()
            .access_data(fx.customer.did, vc.vc_id, fx.devices[0], end - 1)
            .code() == ErrorCode::kGrantNotActive);
  CHECK(fx.rt->exchange().active_grant_count(fx.devices[0]) == 0);
}

TEST_CASE("successful accesses per device are always >= period apart") {
  ExchangeFixture fx(1);
  auto vc = fx.issue({"data"}, 30, /*period=*/500);
  REQUIRE(fx.rt->exchange().present_credential(vc).ok());
  const int64_t t0 = fx.now();

  // Random probing, including out-of-order attempts; collect the asOf
  // values the gate admits.
  std::mt19937_64 rng(4096);
  std::vector<int64_t> admitted;
  for (int i = 0; i < 400; ++i) {
    const int64_t as_of = t0 + static_cast<int64_t>(rng() % 100000);
    auto r = fx.rt->exchange().access_data(fx.customer.did, vc.vc_id,
                                           fx.devices[0], as_of);
    if (r.ok()) {
      admitted.push_back(as_of);
    } else {
      CHECK(r.code() == ErrorCode::kPeriodNotElapsed);
    }
  }
  REQUIRE(admitted.size() > 1);
  for (size_t i = 0; i < admitted.size(); ++i) {
    for (size_t j = i + 1; j < admitted.size(); ++j) {
      CHECK(std::abs(admitted[i] - admitted[j]) >= 500);
    }
  }
}

TEST_CASE("concurrent presentations of one credential admit exactly one") {
  ExchangeFixture fx;
  auto vc = fx.issue();

  constexpr int kThreads = 32;
  std::barrier gate(kThreads);
  std::atomic<int> successes{0};
  std::atomic<int> already_used{0};
  std::vector<std::thread> workers;
  workers.reserve(kThreads);
  for (int i = 0; i < kThreads; ++i) {
    workers.emplace_back([&] {
      gate.arrive_and_wait();
      auto r = fx.rt->exchange().present_credential(vc);
      if (r.ok()) {
        successes.fetch_add(1);
      } else if (r.code() == ErrorCode::kVcIdAlreadyUsed) {
        already_used.fetch_add(1);
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(successes.load() == 1);
  CHECK(already_used.load() == kThreads - 1);
}

TEST_CASE("active grants never exceed capacity under concurrent load") {
  ExchangeFixture fx(1, /*capacity=*/3);
  constexpr int kCredentials = 12;
  std::vector<VerifiableCredential> vcs;
  for (int i = 0; i < kCredentials; ++i) vcs.push_back(fx.issue());

  std::barrier gate(kCredentials);
  std::atomic<int> successes{0};
  std::vector<std::thread> workers;
  for (int i = 0; i < kCredentials; ++i) {
    workers.emplace_back([&, i] {
      gate.arrive_and_wait();
      if (fx.rt->exchange().present_credential(vcs[i]).ok()) {
        successes.fetch_add(1);
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(successes.load() == 3);
  CHECK(fx.rt->exchange().active_grant_count(fx.devices[0]) == 3);
}
