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

#ifndef IOTX_IDENTITY_HPP
#define IOTX_IDENTITY_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "iotx/canonical.hpp"
#include "iotx/clock.hpp"
#include "iotx/crypto.hpp"
#include "iotx/did.hpp"

namespace iotx {

/// Binding of a DID to one connectivity-specific identifier.
struct ServiceEntry {
  Did id;                        // always the owning document's id
  std::string type;              // registered connectivity-type token
  std::string service_endpoint;  // connectivity-specific identifier
};

// Connectivity-type registry. Ships with EthernetMacAddress / WiFiMacAddress
// (six colon-separated hex octets) and LoRaDeviceEUI (16 hex chars).
// Unknown types are rejected rather than passed through.
bool connectivity_type_known(std::string_view type);
Status validate_connectivity_id(std::string_view type,
                                std::string_view endpoint);
std::vector<std::string_view> connectivity_types();

/// Resolvable identity record: public key, verification method, service
/// endpoints, and a self-signature over the canonical document bytes
/// excluding the proof field.
struct DidDocument {
  Did id;
  PublicKey public_key{};
  std::string verification_method{kVerificationMethod};
  std::vector<ServiceEntry> services;
  int64_t created = 0;
  Signature proof{};

  Json to_json() const;
  Json pre_proof_json() const;
  static Result<DidDocument> from_json(const Json& j);

  /// Canonical wire form (the hub's persistence line format).
  Result<std::string> canonical_text() const;

  bool self_proof_ok() const;

  bool operator==(const DidDocument& other) const;
};

/// Checks the document invariants that do not involve the proof: service
/// ids match the document id, at most one service per connectivity type,
/// every endpoint satisfies its type's syntax rule.
Status validate_document_services(const DidDocument& doc);

/// Repository for DID documents, keyed by DID text, holding full revision
/// history. Updates are owner-controlled: a new revision must verify under
/// the previously stored public key. Optional append-only JSONL persistence
/// (one canonical document per line).
class IdentityHub {
 public:
  IdentityHub() = default;
  IdentityHub(const IdentityHub&) = delete;
  IdentityHub& operator=(const IdentityHub&) = delete;

  /// Loads existing revisions from `path` and appends subsequent stores.
  Status attach_file(const std::string& path);

  /// Returns the revision index of the stored document.
  Result<int> store(const DidDocument& doc);

  Result<DidDocument> fetch(const Did& did) const;

  std::vector<DidDocument> revisions(const Did& did) const;

 private:
  Status append_line(const DidDocument& doc);

  mutable std::mutex mu_;
  std::map<std::string, std::vector<DidDocument>> docs_;
  std::string path_;
};

/// One DID method: how documents of that family are created and resolved.
class MethodPlugin {
 public:
  virtual ~MethodPlugin() = default;
  virtual std::string_view method_name() const = 0;
  virtual Result<DidDocument> create(const PublicKey& public_key,
                                     std::vector<ServiceEntry> services,
                                     const Signer& signer) = 0;
  virtual Result<DidDocument> resolve(const Did& did) const = 0;
};

/// Hub-backed method. The method-specific id is the lowercase hex of the
/// first 16 bytes of SHA-256(publicKey || created), which keeps documents
/// self-certifying without a ledger.
class LocalMethodPlugin final : public MethodPlugin {
 public:
  LocalMethodPlugin(std::string method, IdentityHub& hub, const Clock& clock)
      : method_(std::move(method)), hub_(hub), clock_(clock) {}

  std::string_view method_name() const override { return method_; }
  Result<DidDocument> create(const PublicKey& public_key,
                             std::vector<ServiceEntry> services,
                             const Signer& signer) override;
  Result<DidDocument> resolve(const Did& did) const override;

 private:
  std::string method_;
  IdentityHub& hub_;
  const Clock& clock_;
};

/// Builds the self-signed document a LocalMethodPlugin would create, without
/// storing it anywhere. Agents use this to enroll their own DIDs.
Result<DidDocument> make_self_signed_document(
    std::string_view method, const PublicKey& public_key,
    std::vector<ServiceEntry> services, const Signer& signer, int64_t created);

/// Read-only resolution surface; implemented by the plugin-dispatching
/// Resolver below and by the HTTP client.
class DidResolver {
 public:
  virtual ~DidResolver() = default;
  virtual Result<DidDocument> resolve(const Did& did) const = 0;
};

/// Universal Resolver analog: dispatches by DID method to registered
/// plugins. The plugin registry is populated at startup and then immutable.
class Resolver final : public DidResolver {
 public:
  Status register_plugin(std::shared_ptr<MethodPlugin> plugin);

  Result<DidDocument> create_did(std::string_view method,
                                 const PublicKey& public_key,
                                 std::vector<ServiceEntry> services,
                                 const Signer& signer);

  Result<DidDocument> resolve(const Did& did) const override;

 private:
  std::map<std::string, std::shared_ptr<MethodPlugin>, std::less<>> plugins_;
};

}  // namespace iotx

#endif  // IOTX_IDENTITY_HPP
