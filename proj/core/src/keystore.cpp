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

#include "iotx/keystore.hpp"

#include <sodium.h>

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "iotx/hex.hpp"

namespace iotx {
namespace {

using Json = nlohmann::json;

constexpr char kMagic[8] = {'I', 'O', 'T', 'X', 'K', 'S', '1', '\n'};
constexpr size_t kSaltBytes = 16;

// Bound to a keystore entry; never holds key material itself.
class KeystoreSigner final : public Signer {
 public:
  KeystoreSigner(const Keystore& store, std::string handle, PublicKey pub)
      : store_(store), handle_(std::move(handle)), public_(pub) {}

  PublicKey public_key() const override { return public_; }

  Result<Signature> sign(std::span<const uint8_t> message) const override {
    return store_.sign_with(handle_, message);
  }

 private:
  const Keystore& store_;
  std::string handle_;
  PublicKey public_;
};

Result<std::array<uint8_t, 32>> derive_file_key(
    std::string_view passphrase, const std::array<uint8_t, kSaltBytes>& salt) {
  std::array<uint8_t, 32> key{};
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(),
                    passphrase.size(), salt.data(), crypto_pwhash_OPSLIMIT_MIN,
                    crypto_pwhash_MEMLIMIT_MIN, crypto_pwhash_ALG_DEFAULT) != 0) {
    return fail(ErrorCode::kKeystoreError, "passphrase derivation failed");
  }
  return key;
}

}  // namespace

Keystore::Keystore() { ensure_crypto_init(); }

Keystore::~Keystore() {
  for (auto& [_, key] : keys_) {
    sodium_memzero(key.secret.data(), key.secret.size());
  }
}

Result<std::unique_ptr<Keystore>> Keystore::open(const std::string& path,
                                                 std::string_view passphrase) {
  ensure_crypto_init();
  if (passphrase.empty()) {
    return fail(ErrorCode::kKeystoreError,
                "keystore passphrase required (IOTX_KEYSTORE_PASSPHRASE)");
  }
  auto store = std::make_unique<Keystore>();
  store->path_ = path;
  store->persistent_ = true;

  std::ifstream probe(path, std::ios::binary);
  if (!probe) {
    // Fresh store: write header with a new salt.
    std::array<uint8_t, kSaltBytes> salt{};
    randombytes_buf(salt.data(), salt.size());
    auto key = derive_file_key(passphrase, salt);
    if (!key.ok()) return key.error();
    store->file_key_ = key.value();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      return fail(ErrorCode::kIoError, "cannot create keystore file: " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(salt.data()), salt.size());
    return store;
  }

  char magic[sizeof(kMagic)];
  std::array<uint8_t, kSaltBytes> salt{};
  probe.read(magic, sizeof(magic));
  probe.read(reinterpret_cast<char*>(salt.data()), salt.size());
  if (!probe || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    return fail(ErrorCode::kKeystoreError, "not a keystore file: " + path);
  }
  auto key = derive_file_key(passphrase, salt);
  if (!key.ok()) return key.error();
  store->file_key_ = key.value();
  probe.close();
  if (auto st = store->load_file(); !st.ok()) return st.error();
  return store;
}

Status Keystore::load_file() {
  std::ifstream in(path_, std::ios::binary);
  in.seekg(sizeof(kMagic) + kSaltBytes);
  while (true) {
    uint8_t len_buf[4];
    in.read(reinterpret_cast<char*>(len_buf), 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4) {
      return fail(ErrorCode::kKeystoreError, "truncated keystore record");
    }
    const uint32_t len = (uint32_t(len_buf[0]) << 24) |
                         (uint32_t(len_buf[1]) << 16) |
                         (uint32_t(len_buf[2]) << 8) | uint32_t(len_buf[3]);
    if (len < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES ||
        len > (1u << 20)) {
      return fail(ErrorCode::kKeystoreError, "corrupt keystore record length");
    }
    std::vector<uint8_t> buf(len);
    in.read(reinterpret_cast<char*>(buf.data()), len);
    if (static_cast<uint32_t>(in.gcount()) != len) {
      return fail(ErrorCode::kKeystoreError, "truncated keystore record");
    }
    std::vector<uint8_t> plain(len - crypto_secretbox_NONCEBYTES -
                               crypto_secretbox_MACBYTES);
    if (crypto_secretbox_open_easy(
            plain.data(), buf.data() + crypto_secretbox_NONCEBYTES,
            len - crypto_secretbox_NONCEBYTES, buf.data(),
            file_key_.data()) != 0) {
      return fail(ErrorCode::kKeystoreError,
                  "keystore decryption failed (wrong passphrase?)");
    }
    Json rec = Json::parse(plain.begin(), plain.end(), nullptr, false);
    if (rec.is_discarded()) {
      return fail(ErrorCode::kKeystoreError, "corrupt keystore record");
    }
    const std::string kind = rec.value("kind", "");
    if (kind == "key") {
      StoredKey key;
      auto secret = from_hex_array<64>(rec.at("secretKey").get<std::string>());
      auto pub = from_hex_array<32>(rec.at("publicKey").get<std::string>());
      if (!secret.ok() || !pub.ok()) {
        return fail(ErrorCode::kKeystoreError, "corrupt key record");
      }
      key.secret = secret.value();
      key.public_key = pub.value();
      key.created_at = rec.at("createdAt").get<int64_t>();
      keys_[rec.at("handle").get<std::string>()] = key;
    } else if (kind == "mapping") {
      IdentityMapping m;
      m.device_unique_id = rec.at("deviceUniqueId").get<std::string>();
      auto did = parse_did(rec.at("did").get<std::string>());
      if (!did.ok()) return fail(ErrorCode::kKeystoreError, "corrupt mapping");
      m.did = did.take();
      m.connectivity_id = rec.at("connectivityId").get<std::string>();
      if (rec.contains("cloudKeySlot") && rec.at("cloudKeySlot").is_string()) {
        m.cloud_key_slot = rec.at("cloudKeySlot").get<std::string>();
      }
      m.key_handle = rec.at("keyHandle").get<std::string>();
      mappings_.push_back(std::move(m));
    } else {
      return fail(ErrorCode::kKeystoreError, "unknown keystore record kind");
    }
  }
  return ok_status();
}

Status Keystore::append_encrypted(const std::string& plaintext) {
  std::vector<uint8_t> out(crypto_secretbox_NONCEBYTES +
                           crypto_secretbox_MACBYTES + plaintext.size());
  randombytes_buf(out.data(), crypto_secretbox_NONCEBYTES);
  crypto_secretbox_easy(out.data() + crypto_secretbox_NONCEBYTES,
                        reinterpret_cast<const uint8_t*>(plaintext.data()),
                        plaintext.size(), out.data(), file_key_.data());
  std::ofstream f(path_, std::ios::binary | std::ios::app);
  if (!f) {
    return fail(ErrorCode::kIoError, "cannot append to keystore: " + path_);
  }
  const uint32_t len = static_cast<uint32_t>(out.size());
  const uint8_t len_buf[4] = {uint8_t(len >> 24), uint8_t(len >> 16),
                              uint8_t(len >> 8), uint8_t(len)};
  f.write(reinterpret_cast<const char*>(len_buf), 4);
  f.write(reinterpret_cast<const char*>(out.data()), out.size());
  return ok_status();
}

Status Keystore::persist_key(const std::string& handle, const StoredKey& key) {
  if (!persistent_) return ok_status();
  Json rec = {{"kind", "key"},
              {"handle", handle},
              {"secretKey", to_hex(key.secret)},
              {"publicKey", to_hex(key.public_key)},
              {"createdAt", key.created_at}};
  return append_encrypted(rec.dump());
}

Status Keystore::persist_mapping(const IdentityMapping& m) {
  if (!persistent_) return ok_status();
  Json rec = {{"kind", "mapping"},
              {"deviceUniqueId", m.device_unique_id},
              {"did", m.did.to_string()},
              {"connectivityId", m.connectivity_id},
              {"keyHandle", m.key_handle}};
  if (m.cloud_key_slot) rec["cloudKeySlot"] = *m.cloud_key_slot;
  return append_encrypted(rec.dump());
}

KeyRecord Keystore::generate_key(const Clock& clock) {
  ensure_crypto_init();
  StoredKey key;
  crypto_sign_keypair(key.public_key.data(), key.secret.data());
  key.created_at = clock.now();

  std::lock_guard lock(mu_);
  std::string handle = "kh-" + random_hex(16);
  while (keys_.count(handle) != 0) handle = "kh-" + random_hex(16);
  keys_[handle] = key;
  persist_key(handle, key);  // best effort; record stays live in memory
  sodium_memzero(key.secret.data(), key.secret.size());
  return KeyRecord{handle, keys_[handle].public_key, key.created_at};
}

Result<Signature> Keystore::sign_with(std::string_view handle,
                                      std::span<const uint8_t> message) const {
  std::array<uint8_t, 64> secret{};
  {
    std::lock_guard lock(mu_);
    auto it = keys_.find(handle);
    if (it == keys_.end()) {
      return fail(ErrorCode::kUnknownKeyHandle,
                  "no key for handle " + std::string(handle));
    }
    secret = it->second.secret;
  }
  // Signing happens outside the lock.
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret.data());
  sodium_memzero(secret.data(), secret.size());
  return sig;
}

Result<PublicKey> Keystore::public_key_of(std::string_view handle) const {
  std::lock_guard lock(mu_);
  auto it = keys_.find(handle);
  if (it == keys_.end()) {
    return fail(ErrorCode::kUnknownKeyHandle,
                "no key for handle " + std::string(handle));
  }
  return it->second.public_key;
}

Result<std::unique_ptr<Signer>> Keystore::signer(
    std::string_view handle) const {
  auto pub = public_key_of(handle);
  if (!pub.ok()) return pub.error();
  return std::unique_ptr<Signer>(
      new KeystoreSigner(*this, std::string(handle), pub.value()));
}

Status Keystore::map_identity(const IdentityMapping& mapping) {
  std::lock_guard lock(mu_);
  if (keys_.find(mapping.key_handle) == keys_.end()) {
    return fail(ErrorCode::kDanglingKeyHandle,
                "mapping references unknown key handle");
  }
  for (const auto& m : mappings_) {
    if (m.device_unique_id == mapping.device_unique_id) {
      return fail(ErrorCode::kDuplicateIdentity,
                  "deviceUniqueId already mapped");
    }
    if (m.did == mapping.did) {
      return fail(ErrorCode::kDuplicateIdentity, "did already mapped");
    }
    if (m.connectivity_id == mapping.connectivity_id) {
      return fail(ErrorCode::kDuplicateIdentity,
                  "connectivityId already mapped");
    }
  }
  mappings_.push_back(mapping);
  persist_mapping(mapping);
  return ok_status();
}

Result<IdentityMapping> Keystore::lookup_by_did(const Did& did) const {
  std::lock_guard lock(mu_);
  for (const auto& m : mappings_) {
    if (m.did == did) return m;
  }
  return fail(ErrorCode::kNotFound, "no mapping for " + did.to_string());
}

Result<IdentityMapping> Keystore::lookup_by_serial(
    std::string_view serial) const {
  std::lock_guard lock(mu_);
  for (const auto& m : mappings_) {
    if (m.device_unique_id == serial) return m;
  }
  return fail(ErrorCode::kNotFound,
              "no mapping for serial " + std::string(serial));
}

Result<IdentityMapping> Keystore::lookup_by_connectivity(
    std::string_view id) const {
  std::lock_guard lock(mu_);
  for (const auto& m : mappings_) {
    if (m.connectivity_id == id) return m;
  }
  return fail(ErrorCode::kNotFound,
              "no mapping for connectivity id " + std::string(id));
}

size_t Keystore::key_count() const {
  std::lock_guard lock(mu_);
  return keys_.size();
}

}  // namespace iotx
