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

#include "iotx/identity.hpp"

#include <fstream>
#include <set>

#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

bool hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
         (c >= 'A' && c <= 'F');
}

// Six colon-separated hex octets, e.g. 00:0a:95:9d:68:16.
bool valid_mac(std::string_view s) {
  if (s.size() != 17) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i % 3 == 2) {
      if (s[i] != ':') return false;
    } else if (!hex_digit(s[i])) {
      return false;
    }
  }
  return true;
}

// 16 hex chars (EUI-64).
bool valid_eui(std::string_view s) {
  if (s.size() != 16) return false;
  for (char c : s) {
    if (!hex_digit(c)) return false;
  }
  return true;
}

}  // namespace

bool connectivity_type_known(std::string_view type) {
  return type == "EthernetMacAddress" || type == "WiFiMacAddress" ||
         type == "LoRaDeviceEUI";
}

std::vector<std::string_view> connectivity_types() {
  return {"EthernetMacAddress", "WiFiMacAddress", "LoRaDeviceEUI"};
}

Status validate_connectivity_id(std::string_view type,
                                std::string_view endpoint) {
  if (type == "EthernetMacAddress" || type == "WiFiMacAddress") {
    if (!valid_mac(endpoint)) {
      return fail(ErrorCode::kServiceSyntaxError,
                  "endpoint is not a MAC address: " + std::string(endpoint));
    }
    return ok_status();
  }
  if (type == "LoRaDeviceEUI") {
    if (!valid_eui(endpoint)) {
      return fail(ErrorCode::kServiceSyntaxError,
                  "endpoint is not a 16-hex-char EUI: " + std::string(endpoint));
    }
    return ok_status();
  }
  return fail(ErrorCode::kServiceSyntaxError,
              "unregistered connectivity type: " + std::string(type));
}

Json DidDocument::pre_proof_json() const {
  Json services_json = Json::array();
  for (const auto& s : services) {
    services_json.push_back({{"id", s.id.to_string()},
                             {"type", s.type},
                             {"serviceEndpoint", s.service_endpoint}});
  }
  return Json{{"id", id.to_string()},
              {"publicKey", to_hex(public_key)},
              {"verificationMethod", verification_method},
              {"services", services_json},
              {"created", format_timestamp(created)}};
}

Json DidDocument::to_json() const {
  Json j = pre_proof_json();
  j["proof"] = to_hex(proof);
  return j;
}

Result<std::string> DidDocument::canonical_text() const {
  return canonicalize(to_json());
}

Result<DidDocument> DidDocument::from_json(const Json& j) {
  if (!j.is_object()) {
    return fail(ErrorCode::kMalformedRequest, "document must be an object");
  }
  try {
    DidDocument doc;
    auto did = parse_did(j.at("id").get<std::string>());
    if (!did.ok()) return did.error();
    doc.id = did.take();
    auto pk = from_hex_array<kPublicKeyBytes>(j.at("publicKey").get<std::string>());
    if (!pk.ok()) return pk.error();
    doc.public_key = pk.value();
    doc.verification_method = j.at("verificationMethod").get<std::string>();
    auto created = parse_timestamp(j.at("created").get<std::string>());
    if (!created.ok()) return created.error();
    doc.created = created.value();
    for (const auto& s : j.at("services")) {
      auto sid = parse_did(s.at("id").get<std::string>());
      if (!sid.ok()) return sid.error();
      doc.services.push_back(ServiceEntry{sid.take(),
                                          s.at("type").get<std::string>(),
                                          s.at("serviceEndpoint").get<std::string>()});
    }
    auto proof = from_hex_array<kSignatureBytes>(j.at("proof").get<std::string>());
    if (!proof.ok()) return proof.error();
    doc.proof = proof.value();
    return doc;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kMalformedRequest,
                std::string("bad DID document: ") + e.what());
  }
}

bool DidDocument::self_proof_ok() const {
  auto bytes = canonical_bytes(pre_proof_json());
  if (!bytes.ok()) return false;
  return ed25519_verify(bytes.value(), proof, public_key);
}

bool DidDocument::operator==(const DidDocument& other) const {
  auto a = canonical_text();
  auto b = other.canonical_text();
  return a.ok() && b.ok() && a.value() == b.value();
}

Status validate_document_services(const DidDocument& doc) {
  std::set<std::string> seen_types;
  for (const auto& s : doc.services) {
    if (s.id != doc.id) {
      return fail(ErrorCode::kServiceSyntaxError,
                  "service id does not match document id");
    }
    if (!seen_types.insert(s.type).second) {
      return fail(ErrorCode::kDuplicateServiceType,
                  "more than one service of type " + s.type);
    }
    if (auto st = validate_connectivity_id(s.type, s.service_endpoint); !st.ok()) {
      return st;
    }
  }
  return ok_status();
}

Status IdentityHub::attach_file(const std::string& path) {
  std::lock_guard lock(mu_);
  std::ifstream in(path);
  if (in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        return fail(ErrorCode::kIoError, "corrupt hub line in " + path);
      }
      auto doc = DidDocument::from_json(j);
      if (!doc.ok()) return doc.error();
      docs_[doc.value().id.to_string()].push_back(doc.take());
    }
  }
  path_ = path;
  return ok_status();
}

Status IdentityHub::append_line(const DidDocument& doc) {
  if (path_.empty()) return ok_status();
  auto text = doc.canonical_text();
  if (!text.ok()) return text.error();
  std::ofstream out(path_, std::ios::app);
  if (!out) {
    return fail(ErrorCode::kIoError, "cannot append to hub file: " + path_);
  }
  out << text.value() << "\n";
  return ok_status();
}

Result<int> IdentityHub::store(const DidDocument& doc) {
  if (!doc.self_proof_ok()) {
    return fail(ErrorCode::kProofInvalid, "document self-proof does not verify");
  }
  if (auto st = validate_document_services(doc); !st.ok()) return st.error();

  std::lock_guard lock(mu_);
  auto& revs = docs_[doc.id.to_string()];
  if (!revs.empty()) {
    // Owner-controlled update: the new revision's proof must verify under
    // the key currently on record.
    const auto& current = revs.back();
    auto bytes = canonical_bytes(doc.pre_proof_json());
    if (!bytes.ok()) return bytes.error();
    if (!ed25519_verify(bytes.value(), doc.proof, current.public_key)) {
      return fail(ErrorCode::kUpdateUnauthorized,
                  "revision not signed by the current document key");
    }
  }
  revs.push_back(doc);
  if (auto st = append_line(doc); !st.ok()) return st.error();
  return static_cast<int>(revs.size() - 1);
}

Result<DidDocument> IdentityHub::fetch(const Did& did) const {
  std::lock_guard lock(mu_);
  auto it = docs_.find(did.to_string());
  if (it == docs_.end() || it->second.empty()) {
    return fail(ErrorCode::kNotFound, "no document for " + did.to_string());
  }
  return it->second.back();
}

std::vector<DidDocument> IdentityHub::revisions(const Did& did) const {
  std::lock_guard lock(mu_);
  auto it = docs_.find(did.to_string());
  if (it == docs_.end()) return {};
  return it->second;
}

Result<DidDocument> make_self_signed_document(
    std::string_view method, const PublicKey& public_key,
    std::vector<ServiceEntry> services, const Signer& signer,
    int64_t created) {
  if (signer.public_key() != public_key) {
    return fail(ErrorCode::kSignerMismatch,
                "signer does not correspond to the given public key");
  }

  // id = hex(SHA-256(publicKey || created)[0..16]); created uses the same
  // serialized form that appears in the document.
  const std::string created_text = format_timestamp(created);
  std::vector<uint8_t> digest_input(public_key.begin(), public_key.end());
  digest_input.insert(digest_input.end(), created_text.begin(),
                      created_text.end());
  const auto digest = sha256(digest_input);

  DidDocument doc;
  doc.id = Did{std::string(method),
               to_hex(std::span(digest.data(), 16))};
  doc.public_key = public_key;
  doc.verification_method = std::string(kVerificationMethod);
  doc.created = created;
  for (auto& s : services) {
    s.id = doc.id;  // service ids always equal the document id
    doc.services.push_back(std::move(s));
  }
  if (auto st = validate_document_services(doc); !st.ok()) return st.error();

  auto bytes = canonical_bytes(doc.pre_proof_json());
  if (!bytes.ok()) return bytes.error();
  auto sig = signer.sign(bytes.value());
  if (!sig.ok()) return sig.error();
  doc.proof = sig.value();
  return doc;
}

Result<DidDocument> LocalMethodPlugin::create(const PublicKey& public_key,
                                              std::vector<ServiceEntry> services,
                                              const Signer& signer) {
  auto doc = make_self_signed_document(method_, public_key,
                                       std::move(services), signer,
                                       clock_.now());
  if (!doc.ok()) return doc;
  if (auto stored = hub_.store(doc.value()); !stored.ok()) {
    return stored.error();
  }
  return doc;
}

Result<DidDocument> LocalMethodPlugin::resolve(const Did& did) const {
  return hub_.fetch(did);
}

Status Resolver::register_plugin(std::shared_ptr<MethodPlugin> plugin) {
  const std::string name(plugin->method_name());
  if (!plugins_.emplace(name, std::move(plugin)).second) {
    return fail(ErrorCode::kDuplicatePlugin,
                "plugin already registered for method " + name);
  }
  return ok_status();
}

Result<DidDocument> Resolver::create_did(std::string_view method,
                                         const PublicKey& public_key,
                                         std::vector<ServiceEntry> services,
                                         const Signer& signer) {
  auto it = plugins_.find(method);
  if (it == plugins_.end()) {
    return fail(ErrorCode::kUnknownMethod,
                "no plugin for method " + std::string(method));
  }
  return it->second->create(public_key, std::move(services), signer);
}

Result<DidDocument> Resolver::resolve(const Did& did) const {
  auto it = plugins_.find(did.method);
  if (it == plugins_.end()) {
    return fail(ErrorCode::kUnknownMethod,
                "no plugin for method " + did.method);
  }
  return it->second->resolve(did);
}

}  // namespace iotx
