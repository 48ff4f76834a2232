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

#include <algorithm>

#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

Result<int64_t> timestamp_from(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<int64_t>();
  if (v.is_string()) return parse_timestamp(v.get<std::string>());
  return fail(ErrorCode::kMalformedTimestamp,
              "timestamp must be string or integer");
}

Result<int64_t> period_from(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<int64_t>();
  if (v.is_string()) return parse_period(v.get<std::string>());
  return fail(ErrorCode::kMalformedPeriod, "period must be string or integer");
}

Result<std::set<Did>> did_set_from(const Json& arr) {
  std::set<Did> out;
  for (const auto& d : arr) {
    auto did = parse_did(d.get<std::string>());
    if (!did.ok()) return did.error();
    out.insert(did.take());
  }
  return out;
}

}  // namespace

int OwnerPolicy::capacity_for(const Did& device) const {
  auto it = device_capacity.find(device);
  return it == device_capacity.end() ? default_capacity : it->second;
}

Json OwnerPolicy::to_json() const {
  Json exempt = Json::array();
  for (const auto& d : privacy_exempt_list) exempt.push_back(d.to_string());
  Json spec = Json::array();
  for (const auto& e : filter_spec) {
    Json devices = Json::array();
    for (const auto& d : e.device_ids) devices.push_back(d.to_string());
    Json chain = Json::array();
    for (const auto& f : e.filter_chain) chain.push_back(f);
    spec.push_back({{"deviceIds", devices}, {"filterChain", chain}});
  }
  Json capacity = Json::object();
  for (const auto& [did, cap] : device_capacity) {
    capacity[did.to_string()] = cap;
  }
  Json parties = Json::array();
  for (const auto& p : authorizing_parties) parties.push_back(p.to_string());
  return Json{{"privacyExemptList", exempt},
              {"filterSpec", spec},
              {"deviceCapacity", capacity},
              {"defaultCapacity", default_capacity},
              {"authorizingParties", parties}};
}

Result<OwnerPolicy> OwnerPolicy::from_json(const Json& j,
                                           const FilterRegistry& filters) {
  if (!j.is_object()) {
    return fail(ErrorCode::kPolicyInvalid, "policy must be an object");
  }
  try {
    OwnerPolicy p;
    if (j.contains("privacyExemptList")) {
      auto exempt = did_set_from(j.at("privacyExemptList"));
      if (!exempt.ok()) return exempt.error();
      p.privacy_exempt_list = exempt.take();
    }
    if (j.contains("filterSpec")) {
      for (const auto& e : j.at("filterSpec")) {
        FilterSpecEntry entry;
        auto devices = did_set_from(e.at("deviceIds"));
        if (!devices.ok()) return devices.error();
        entry.device_ids = devices.take();
        for (const auto& f : e.at("filterChain")) {
          const std::string name = f.get<std::string>();
          if (!filters.has(name)) {
            return fail(ErrorCode::kUnknownFilter,
                        "filterSpec names unregistered filter " + name);
          }
          entry.filter_chain.push_back(name);
        }
        p.filter_spec.push_back(std::move(entry));
      }
    }
    if (j.contains("deviceCapacity")) {
      for (auto it = j.at("deviceCapacity").begin();
           it != j.at("deviceCapacity").end(); ++it) {
        auto did = parse_did(it.key());
        if (!did.ok()) return did.error();
        const int cap = it.value().get<int>();
        if (cap < 1) {
          return fail(ErrorCode::kPolicyInvalid,
                      "deviceCapacity must be >= 1 for " + it.key());
        }
        p.device_capacity[did.take()] = cap;
      }
    }
    if (j.contains("defaultCapacity")) {
      p.default_capacity = j.at("defaultCapacity").get<int>();
      if (p.default_capacity < 1) {
        return fail(ErrorCode::kPolicyInvalid, "defaultCapacity must be >= 1");
      }
    }
    if (j.contains("authorizingParties")) {
      for (const auto& d : j.at("authorizingParties")) {
        auto did = parse_did(d.get<std::string>());
        if (!did.ok()) return did.error();
        p.authorizing_parties.push_back(did.take());
      }
    }
    return p;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kPolicyInvalid,
                std::string("bad policy file: ") + e.what());
  }
}

Json DenyPolicy::to_json() const {
  Json denied = Json::array();
  for (const auto& d : denied_dids) denied.push_back(d.to_string());
  return Json{{"deniedDids", denied}};
}

Result<DenyPolicy> DenyPolicy::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("deniedDids")) {
    return fail(ErrorCode::kPolicyInvalid,
                "deny policy must be an object with deniedDids");
  }
  auto denied = did_set_from(j.at("deniedDids"));
  if (!denied.ok()) return denied.error();
  return DenyPolicy{denied.take()};
}

Status AccessRequestDraft::validate() const {
  // Reuse the subject invariants; the privacy flag has no bearing here.
  return to_subject(false).validate();
}

Json AccessRequestDraft::to_json() const {
  Json devices = Json::array();
  for (const auto& d : device_ids) devices.push_back(d.to_string());
  Json perms = Json::array();
  for (const auto& p : permissions) perms.push_back(p);
  return Json{{"id", customer_did.to_string()},
              {"deviceIds", devices},
              {"start", format_timestamp(start)},
              {"end", format_timestamp(end)},
              {"period", period},
              {"permissions", perms}};
}

Result<AccessRequestDraft> AccessRequestDraft::from_json(const Json& j) {
  if (!j.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "draft must be an object");
  }
  try {
    AccessRequestDraft d;
    auto id = parse_did(j.at("id").get<std::string>());
    if (!id.ok()) return id.error();
    d.customer_did = id.take();
    for (const auto& dev : j.at("deviceIds")) {
      auto did = parse_did(dev.get<std::string>());
      if (!did.ok()) return did.error();
      d.device_ids.push_back(did.take());
    }
    auto start = timestamp_from(j.at("start"));
    if (!start.ok()) return start.error();
    d.start = start.value();
    auto end = timestamp_from(j.at("end"));
    if (!end.ok()) return end.error();
    d.end = end.value();
    auto period = period_from(j.at("period"));
    if (!period.ok()) return period.error();
    d.period = period.value();
    for (const auto& p : j.at("permissions")) {
      d.permissions.insert(p.get<std::string>());
    }
    return d;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kMalformedRequest,
                std::string("bad draft: ") + e.what());
  }
}

AccessRequestSubject AccessRequestDraft::to_subject(
    bool privacy_preserving) const {
  AccessRequestSubject s;
  s.id = customer_did;
  s.device_ids = device_ids;
  s.start = start;
  s.end = end;
  s.period = period;
  s.permissions = permissions;
  s.privacy_preserving = privacy_preserving;
  return s;
}

std::vector<std::string> filter_chain_for(const Did& device,
                                          const OwnerPolicy& policy) {
  std::vector<std::string> chain;
  for (const auto& entry : policy.filter_spec) {
    if (entry.device_ids.count(device) != 0) {
      chain.insert(chain.end(), entry.filter_chain.begin(),
                   entry.filter_chain.end());
    }
  }
  return chain;
}

Result<Signature> AuthorizingParty::endorse(
    const AccessRequestDraft& draft) const {
  return endorse_document(draft.customer_did, draft.to_json());
}

Result<Signature> AuthorizingParty::endorse_document(
    const Did& customer, const Json& document) const {
  if (policy_.denied_dids.count(customer) != 0) {
    return fail(ErrorCode::kDenied,
                "customer is on the deny list of " + did_.to_string());
  }
  auto bytes = canonical_bytes(document);
  if (!bytes.ok()) return bytes.error();
  return signer_->sign(bytes.value());
}

Result<VerifiableCredential> owner_issue_flow(const AccessRequestDraft& draft,
                                              const OwnerPolicy& policy,
                                              IssueContext& ctx) {
  // (1) verify the customer's DID and the device DIDs
  if (!ctx.resolver.resolve(draft.customer_did).ok()) {
    return fail(ErrorCode::kCustomerUnresolvable,
                draft.customer_did.to_string(), 1);
  }
  for (const auto& device : draft.device_ids) {
    if (!ctx.resolver.resolve(device).ok()) {
      return fail(ErrorCode::kDeviceUnresolvable, device.to_string(), 1);
    }
  }

  // (2) can the devices handle the load
  for (const auto& device : draft.device_ids) {
    auto active = ctx.exchange.active_grant_count(device);
    if (!active.ok()) {
      return fail(ErrorCode::kExchangeUnavailable, active.error().message, 2);
    }
    if (active.value() + 1 > policy.capacity_for(device)) {
      return fail(ErrorCode::kCapacityExceeded, device.to_string(), 2);
    }
  }

  // (3) privacy determination: exempt customers get the raw stream
  const bool privacy_preserving =
      policy.privacy_exempt_list.count(draft.customer_did) == 0;

  // (4) the exchange mints the credential identifier
  auto vc_id = ctx.exchange.issue_vc_id(ctx.owner_did);
  if (!vc_id.ok()) {
    if (vc_id.code() == ErrorCode::kOwnerUnresolvable) {
      return fail(ErrorCode::kOwnerUnresolvable, vc_id.error().message, 4);
    }
    return fail(ErrorCode::kExchangeUnavailable, vc_id.error().message, 4);
  }

  UnsignedCredential fields;
  fields.vc_id = vc_id.take();
  fields.issuer = ctx.owner_did;
  fields.issuance_date = ctx.clock.now();
  fields.credential_subject = draft.to_subject(privacy_preserving);

  // (5) endorsements over the assembled payload; any denial aborts
  VerifiableCredential staged;
  staged.vc_id = fields.vc_id;
  staged.issuer = fields.issuer;
  staged.issuance_date = fields.issuance_date;
  staged.credential_subject = fields.credential_subject;
  const Json endorsement_payload = staged.endorsement_payload_json();
  for (const auto* party : ctx.parties) {
    auto sig = party->endorse_document(draft.customer_did, endorsement_payload);
    if (!sig.ok()) {
      if (sig.code() == ErrorCode::kDenied) {
        return fail(ErrorCode::kPolicyDenied, party->did().to_string(), 5);
      }
      return sig.error();
    }
    fields.endorsements.push_back(Endorsement{party->did(), sig.value()});
  }

  // (6) sign and return
  auto vc = sign_credential(fields, ctx.signer, ctx.resolver);
  if (!vc.ok()) {
    Error e = vc.error();
    e.step = 6;
    return e;
  }
  return vc;
}

}  // namespace iotx
