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

#include "iotx/credential.hpp"

#include <algorithm>

#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

Result<int64_t> timestamp_from(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return v.get<int64_t>();
  }
  if (v.is_string()) {
    return parse_timestamp(v.get<std::string>());
  }
  return fail(ErrorCode::kMalformedTimestamp, "timestamp must be string or integer");
}

Result<int64_t> period_from(const Json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return v.get<int64_t>();
  }
  if (v.is_string()) {
    return parse_period(v.get<std::string>());
  }
  return fail(ErrorCode::kMalformedPeriod, "period must be string or integer");
}

}  // namespace

Status AccessRequestSubject::validate() const {
  if (device_ids.empty()) {
    return fail(ErrorCode::kSubjectInvalid, "deviceIds must be nonempty");
  }
  std::vector<Did> sorted = device_ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return fail(ErrorCode::kSubjectInvalid, "deviceIds contains duplicates");
  }
  if (start >= end) {
    return fail(ErrorCode::kSubjectInvalid, "start must precede end");
  }
  if (period <= 0 || period > end - start) {
    return fail(ErrorCode::kSubjectInvalid,
                "period must be positive and fit in the window");
  }
  if (permissions.empty()) {
    return fail(ErrorCode::kSubjectInvalid, "permissions must be nonempty");
  }
  for (const auto& p : permissions) {
    if (p != kPermissionData && p != kPermissionControl) {
      return fail(ErrorCode::kSubjectInvalid, "unknown permission: " + p);
    }
  }
  return ok_status();
}

Json AccessRequestSubject::to_json() const {
  Json devices = Json::array();
  for (const auto& d : device_ids) devices.push_back(d.to_string());
  Json perms = Json::array();
  for (const auto& p : permissions) perms.push_back(p);  // set: sorted
  return Json{{"id", id.to_string()},
              {"deviceIds", devices},
              {"start", format_timestamp(start)},
              {"end", format_timestamp(end)},
              {"period", period},
              {"permissions", perms},
              {"privacyPreserving", privacy_preserving}};
}

Result<AccessRequestSubject> AccessRequestSubject::from_json(const Json& j) {
  if (!j.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "credentialSubject must be an object");
  }
  try {
    AccessRequestSubject s;
    auto id = parse_did(j.at("id").get<std::string>());
    if (!id.ok()) return id.error();
    s.id = id.take();
    for (const auto& d : j.at("deviceIds")) {
      auto did = parse_did(d.get<std::string>());
      if (!did.ok()) return did.error();
      s.device_ids.push_back(did.take());
    }
    auto start = timestamp_from(j.at("start"));
    if (!start.ok()) return start.error();
    s.start = start.value();
    auto end = timestamp_from(j.at("end"));
    if (!end.ok()) return end.error();
    s.end = end.value();
    auto period = period_from(j.at("period"));
    if (!period.ok()) return period.error();
    s.period = period.value();
    for (const auto& p : j.at("permissions")) {
      s.permissions.insert(p.get<std::string>());
    }
    s.privacy_preserving = j.at("privacyPreserving").get<bool>();
    return s;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kMalformedRequest,
                std::string("bad credentialSubject: ") + e.what());
  }
}

Json VerifiableCredential::endorsement_payload_json() const {
  return Json{{"vcId", vc_id},
              {"issuer", issuer.to_string()},
              {"issuanceDate", format_timestamp(issuance_date)},
              {"credentialSubject", credential_subject.to_json()}};
}

Json VerifiableCredential::pre_proof_json() const {
  Json j = endorsement_payload_json();
  Json ends = Json::array();
  for (const auto& e : endorsements) {
    ends.push_back({{"authorizingParty", e.authorizing_party.to_string()},
                    {"signature", to_hex(e.signature)}});
  }
  j["endorsements"] = ends;
  return j;
}

Json VerifiableCredential::to_json() const {
  Json j = pre_proof_json();
  j["proof"] = to_hex(proof);
  return j;
}

Result<VerifiableCredential> VerifiableCredential::from_json(const Json& j) {
  if (!j.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "credential must be an object");
  }
  try {
    VerifiableCredential vc;
    vc.vc_id = j.at("vcId").get<std::string>();
    auto issuer = parse_did(j.at("issuer").get<std::string>());
    if (!issuer.ok()) return issuer.error();
    vc.issuer = issuer.take();
    auto date = timestamp_from(j.at("issuanceDate"));
    if (!date.ok()) return date.error();
    vc.issuance_date = date.value();
    auto subject = AccessRequestSubject::from_json(j.at("credentialSubject"));
    if (!subject.ok()) return subject.error();
    vc.credential_subject = subject.take();
    for (const auto& e : j.at("endorsements")) {
      auto party = parse_did(e.at("authorizingParty").get<std::string>());
      if (!party.ok()) return party.error();
      auto sig = from_hex_array<kSignatureBytes>(e.at("signature").get<std::string>());
      if (!sig.ok()) return sig.error();
      vc.endorsements.push_back(Endorsement{party.take(), sig.value()});
    }
    auto proof = from_hex_array<kSignatureBytes>(j.at("proof").get<std::string>());
    if (!proof.ok()) return proof.error();
    vc.proof = proof.value();
    return vc;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kMalformedRequest,
                std::string("bad credential: ") + e.what());
  }
}

Result<VerifiableCredential> sign_credential(const UnsignedCredential& fields,
                                             const Signer& signer,
                                             const DidResolver& resolver) {
  if (auto st = fields.credential_subject.validate(); !st.ok()) {
    return st.error();
  }
  auto issuer_doc = resolver.resolve(fields.issuer);
  if (!issuer_doc.ok()) {
    return fail(ErrorCode::kIssuerUnresolvable,
                "issuer does not resolve: " + fields.issuer.to_string());
  }
  if (issuer_doc.value().public_key != signer.public_key()) {
    return fail(ErrorCode::kSignerMismatch,
                "signer key does not match the issuer document");
  }

  VerifiableCredential vc;
  vc.vc_id = fields.vc_id;
  vc.issuer = fields.issuer;
  vc.issuance_date = fields.issuance_date;
  vc.credential_subject = fields.credential_subject;
  vc.endorsements = fields.endorsements;

  auto bytes = canonical_bytes(vc.pre_proof_json());
  if (!bytes.ok()) return bytes.error();
  auto sig = signer.sign(bytes.value());
  if (!sig.ok()) return sig.error();
  vc.proof = sig.value();
  return vc;
}

Status verify_credential(const VerifiableCredential& vc,
                         const DidResolver& resolver) {
  // (a) issuer resolves
  auto issuer_doc = resolver.resolve(vc.issuer);
  if (!issuer_doc.ok()) {
    return fail(ErrorCode::kIssuerUnresolvable,
                "issuer does not resolve: " + vc.issuer.to_string());
  }
  // (b) proof over canonical bytes
  auto proof_bytes = canonical_bytes(vc.pre_proof_json());
  if (!proof_bytes.ok()) return proof_bytes.error();
  if (!ed25519_verify(proof_bytes.value(), vc.proof,
                      issuer_doc.value().public_key)) {
    return fail(ErrorCode::kProofInvalid, "credential proof does not verify");
  }
  // (c) endorsements
  auto endorsement_bytes = canonical_bytes(vc.endorsement_payload_json());
  if (!endorsement_bytes.ok()) return endorsement_bytes.error();
  for (const auto& e : vc.endorsements) {
    auto party_doc = resolver.resolve(e.authorizing_party);
    if (!party_doc.ok()) {
      return fail(ErrorCode::kEndorsementInvalid,
                  "endorsing party does not resolve: " +
                      e.authorizing_party.to_string());
    }
    if (!ed25519_verify(endorsement_bytes.value(), e.signature,
                        party_doc.value().public_key)) {
      return fail(ErrorCode::kEndorsementInvalid,
                  "endorsement by " + e.authorizing_party.to_string() +
                      " does not verify");
    }
  }
  // (d) subject invariants
  if (auto st = vc.credential_subject.validate(); !st.ok()) return st;
  // (e) device DIDs resolve
  for (const auto& d : vc.credential_subject.device_ids) {
    if (!resolver.resolve(d).ok()) {
      return fail(ErrorCode::kDeviceUnresolvable,
                  "device does not resolve: " + d.to_string());
    }
  }
  return ok_status();
}

}  // namespace iotx
