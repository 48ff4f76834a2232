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

#ifndef IOTX_KEYSTORE_HPP
#define IOTX_KEYSTORE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotx/clock.hpp"
#include "iotx/crypto.hpp"
#include "iotx/did.hpp"

namespace iotx {

struct KeyRecord {
  std::string key_handle;  // opaque token
  PublicKey public_key{};
  int64_t created_at = 0;
};

/// Row of the identity mapping table: manufacturer serial <-> DID <->
/// connectivity identifier, plus the custody handle and an opaque
/// cloud-provider key slot (stored, never interpreted).
struct IdentityMapping {
  std::string device_unique_id;
  Did did;
  std::string connectivity_id;
  std::optional<std::string> cloud_key_slot;
  std::string key_handle;
};

/// Key custody service. Private key material never leaves the store; the
/// only path to a signature is sign_with (or a Signer bound to a handle).
/// The interface is narrow enough that a remote HSM client could replace
/// this in-process implementation.
class Keystore {
 public:
  /// In-memory store, no persistence.
  Keystore();

  /// Store backed by an encrypted file. Creates the file if absent; loads
  /// and decrypts it otherwise. The passphrase normally arrives via the
  /// IOTX_KEYSTORE_PASSPHRASE environment variable.
  static Result<std::unique_ptr<Keystore>> open(const std::string& path,
                                                std::string_view passphrase);

  Keystore(const Keystore&) = delete;
  Keystore& operator=(const Keystore&) = delete;
  ~Keystore();

  KeyRecord generate_key(const Clock& clock);

  /// Deterministic for a given (key, message); Ed25519.
  Result<Signature> sign_with(std::string_view key_handle,
                              std::span<const uint8_t> message) const;

  Result<PublicKey> public_key_of(std::string_view key_handle) const;

  /// Signer bound to a stored key. Fails if the handle is unknown.
  Result<std::unique_ptr<Signer>> signer(std::string_view key_handle) const;

  Status map_identity(const IdentityMapping& mapping);

  Result<IdentityMapping> lookup_by_did(const Did& did) const;
  Result<IdentityMapping> lookup_by_serial(std::string_view serial) const;
  Result<IdentityMapping> lookup_by_connectivity(std::string_view id) const;

  size_t key_count() const;

 private:
  struct StoredKey {
    std::array<uint8_t, 64> secret{};
    PublicKey public_key{};
    int64_t created_at = 0;
  };

  Status persist_key(const std::string& handle, const StoredKey& key);
  Status persist_mapping(const IdentityMapping& mapping);
  Status append_encrypted(const std::string& plaintext);
  Status load_file();

  mutable std::mutex mu_;
  std::map<std::string, StoredKey, std::less<>> keys_;
  std::vector<IdentityMapping> mappings_;

  std::string path_;                    // empty: in-memory only
  std::array<uint8_t, 32> file_key_{};  // derived from passphrase
  bool persistent_ = false;
};

}  // namespace iotx

#endif  // IOTX_KEYSTORE_HPP
