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

#include "iotx/policy.hpp"

#include <random>

#include <doctest.h>

#include "harness.hpp"
#include "iotx/runtime.hpp"

using namespace iotx;
using iotx::testing::Agent;
using iotx::testing::make_agent;
using iotx::testing::make_runtime;
using iotx::testing::random_eui;

namespace {

struct FlowFixture {
  std::unique_ptr<ExchangeRuntime> rt = make_runtime();
  Agent owner = make_agent(*rt);
  Agent customer = make_agent(*rt);
  std::vector<Did> devices;
  LocalExchangeClient client{rt->exchange()};

  FlowFixture() {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 2; ++i) {
      auto reg = rt->exchange().register_device(
          owner.did, "LoRaDeviceEUI", random_eui(rng),
          "SN-" + std::to_string(i));
      REQUIRE(reg.ok());
      devices.push_back(reg.value().did);
    }
  }

  AccessRequestDraft draft() const {
    AccessRequestDraft d;
    d.customer_did = customer.did;
    d.device_ids = devices;
    d.start = rt->clock().now();
    d.end = d.start + 30 * 86400;
    d.period = 21600;
    d.permissions = {"data"};
    return d;
  }

  IssueContext context(std::vector<const AuthorizingParty*> parties = {}) {
    return IssueContext{owner.did,      *owner.signer, client,
                        rt->resolver(), std::move(parties), rt->clock()};
  }
};

}  // namespace

TEST_CASE("endorse denies customers on the deny list") {
  auto rt = make_runtime();
  Agent customer = make_agent(*rt);
  Agent party_agent = make_agent(*rt);
  AuthorizingParty party(party_agent.did, DenyPolicy{{customer.did}},
                         party_agent.signer);
  AccessRequestDraft draft;
  draft.customer_did = customer.did;
  draft.device_ids = {Did{"iotx", "x"}};
  draft.start = 0;
  draft.end = 100;
  draft.period = 10;
  draft.permissions = {"data"};
  CHECK(party.endorse(draft).code() == ErrorCode::kDenied);
}

TEST_CASE("endorse signs the draft deterministically with an empty deny list") {
  auto rt = make_runtime();
  Agent customer = make_agent(*rt);
  Agent party_agent = make_agent(*rt);
  AuthorizingParty party(party_agent.did, DenyPolicy{}, party_agent.signer);
  AccessRequestDraft draft;
  draft.customer_did = customer.did;
  draft.device_ids = {Did{"iotx", "x"}};
  draft.start = 0;
  draft.end = 100;
  draft.period = 10;
  draft.permissions = {"data"};

  auto s1 = party.endorse(draft);
  auto s2 = party.endorse(draft);
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());
  CHECK(s1.value() == s2.value());
  auto bytes = canonical_bytes(draft.to_json());
  REQUIRE(bytes.ok());
  CHECK(ed25519_verify(bytes.value(), s1.value(), party_agent.signer->public_key()));
}

TEST_CASE("filter_chain_for concatenates matching entries in policy order") {
  const Did a{"iotx", "a"};
  const Did b{"iotx", "b"};
  const Did c{"iotx", "c"};
  OwnerPolicy policy;
  policy.filter_spec = {
      FilterSpecEntry{{a, b}, {"redact_location", "redact_device_id"}},
      FilterSpecEntry{{a}, {"redact_device_id"}},
  };

  CHECK(filter_chain_for(b, policy) ==
        std::vector<std::string>{"redact_location", "redact_device_id"});
  CHECK(filter_chain_for(c, policy).empty());
  // Device in both entries: first entry's chain then the second's.
  CHECK(filter_chain_for(a, policy) ==
        std::vector<std::string>{"redact_location", "redact_device_id",
                                 "redact_device_id"});
}

TEST_CASE("issue flow: privacy flag is the complement of exemption") {
  FlowFixture fx;
  OwnerPolicy policy;

  SUBCASE("customer not exempt: privacyPreserving = true") {
    auto ctx = fx.context();
    auto vc = owner_issue_flow(fx.draft(), policy, ctx);
    REQUIRE(vc.ok());
    CHECK(vc.value().credential_subject.privacy_preserving);
    CHECK(verify_credential(vc.value(), fx.rt->resolver()).ok());
    // The vcId is one the exchange minted for this owner.
    auto entry = fx.rt->exchange().ledger_entry(vc.value().vc_id);
    REQUIRE(entry.has_value());
    CHECK(entry->issued_to == fx.owner.did);
  }

  SUBCASE("exempt customer: privacyPreserving = false") {
    policy.privacy_exempt_list.insert(fx.customer.did);
    auto ctx = fx.context();
    auto vc = owner_issue_flow(fx.draft(), policy, ctx);
    REQUIRE(vc.ok());
    CHECK_FALSE(vc.value().credential_subject.privacy_preserving);
  }
}

TEST_CASE("issue flow resolves customer and devices first") {
  FlowFixture fx;
  OwnerPolicy policy;

  auto bad_customer = fx.draft();
  bad_customer.customer_did = Did{"iotx", "0000000000000001"};
  auto ctx1 = fx.context();
  auto r1 = owner_issue_flow(bad_customer, policy, ctx1);
  CHECK(r1.code() == ErrorCode::kCustomerUnresolvable);
  CHECK(r1.error().step == 1);

  auto bad_device = fx.draft();
  bad_device.device_ids.push_back(Did{"iotx", "0000000000000002"});
  auto ctx2 = fx.context();
  auto r2 = owner_issue_flow(bad_device, policy, ctx2);
  CHECK(r2.code() == ErrorCode::kDeviceUnresolvable);
}

TEST_CASE("issue flow enforces per-device capacity against active grants") {
  FlowFixture fx;
  OwnerPolicy policy;
  policy.default_capacity = 1;

  // Hold one grant via the exchange, then replay the request.
  auto ctx = fx.context();
  auto vc = owner_issue_flow(fx.draft(), policy, ctx);
  REQUIRE(vc.ok());
  REQUIRE(fx.rt->exchange().present_credential(vc.value()).ok());
  REQUIRE(fx.rt->exchange().active_grant_count(fx.devices[0]) == 1);

  auto ctx2 = fx.context();
  auto second = owner_issue_flow(fx.draft(), policy, ctx2);
  CHECK(second.code() == ErrorCode::kCapacityExceeded);
  CHECK(second.error().step == 2);
}

TEST_CASE("any authorizing party's denial is categorical") {
  FlowFixture fx;
  Agent p1 = make_agent(*fx.rt);
  Agent p2 = make_agent(*fx.rt);
  AuthorizingParty approving(p1.did, DenyPolicy{}, p1.signer);
  AuthorizingParty denying(p2.did, DenyPolicy{{fx.customer.did}}, p2.signer);

  OwnerPolicy policy;
  // Even with the customer exempt from privacy processing and capacity
  // free, the deny list wins.
  policy.privacy_exempt_list.insert(fx.customer.did);

  auto ctx = fx.context({&approving, &denying});
  auto rejected = owner_issue_flow(fx.draft(), policy, ctx);
  CHECK(rejected.code() == ErrorCode::kPolicyDenied);
  CHECK(rejected.error().message == p2.did.to_string());
  CHECK(rejected.error().step == 5);

  // Without the denying party the same request issues, with both
  // endorsements embedded and verifying.
  auto ctx2 = fx.context({&approving});
  auto vc = owner_issue_flow(fx.draft(), policy, ctx2);
  REQUIRE(vc.ok());
  REQUIRE(vc.value().endorsements.size() == 1);
  CHECK(vc.value().endorsements[0].authorizing_party == p1.did);
  CHECK(verify_credential(vc.value(), fx.rt->resolver()).ok());
}

TEST_CASE("privacy-flag rule holds over randomized exemption lists") {
  FlowFixture fx;
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    OwnerPolicy policy;
    const bool exempt = (rng() % 2) == 0;
    if (exempt) policy.privacy_exempt_list.insert(fx.customer.did);
    // Noise entries in the exemption list must not affect the rule.
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i) {
      policy.privacy_exempt_list.insert(
          Did{"iotx", "noise" + std::to_string(rng() % 1000)});
    }
    auto ctx = fx.context();
    auto vc = owner_issue_flow(fx.draft(), policy, ctx);
    REQUIRE(vc.ok());
    CHECK(vc.value().credential_subject.privacy_preserving == !exempt);
  }
}

TEST_CASE("policy files validate filter names and capacities") {
  FilterRegistry filters;
  Json good = {
      {"privacyExemptList", {"did:iotx:abc"}},
      {"filterSpec",
       Json::array({Json{{"deviceIds", {"did:iotx:dev1"}},
                         {"filterChain", {"redact_location"}}}})},
      {"deviceCapacity", Json{{"did:iotx:dev1", 4}}},
      {"authorizingParties", {"did:iotx:party1"}},
  };
  auto policy = OwnerPolicy::from_json(good, filters);
  REQUIRE(policy.ok());
  CHECK(policy.value().capacity_for(Did{"iotx", "dev1"}) == 4);
  CHECK(policy.value().capacity_for(Did{"iotx", "other"}) == 16);
  CHECK(policy.value().authorizing_parties.size() == 1);

  Json unknown_filter = good;
  unknown_filter["filterSpec"][0]["filterChain"] = {"no_such"};
  CHECK(OwnerPolicy::from_json(unknown_filter, filters).code() ==
        ErrorCode::kUnknownFilter);

  Json zero_capacity = good;
  zero_capacity["deviceCapacity"]["did:iotx:dev1"] = 0;
  CHECK(OwnerPolicy::from_json(zero_capacity, filters).code() ==
        ErrorCode::kPolicyInvalid);

  auto deny = DenyPolicy::from_json(Json{{"deniedDids", {"did:iotx:evil"}}});
  REQUIRE(deny.ok());
  CHECK(deny.value().denied_dids.count(Did{"iotx", "evil"}) == 1);
}
