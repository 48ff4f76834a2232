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

#include "iotx/crypto.hpp"

#include <sodium.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <sys/stat.h>

#include "iotx/hex.hpp"

namespace iotx {

void ensure_crypto_init() {
  static const int rc = sodium_init();
  if (rc < 0) {
    std::fprintf(stderr, "libsodium initialization failed\n");
    std::abort();
  }
}

bool ed25519_verify(std::span<const uint8_t> message, const Signature& sig,
                    const PublicKey& key) {
  ensure_crypto_init();
  return crypto_sign_verify_detached(sig.data(), message.data(),
                                     message.size(), key.data()) == 0;
}

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  ensure_crypto_init();
  std::array<uint8_t, 32> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::string random_hex(size_t n_bytes) {
  ensure_crypto_init();
  std::vector<uint8_t> buf(n_bytes);
  randombytes_buf(buf.data(), buf.size());
  return to_hex(buf);
}

SeedSigner SeedSigner::generate() {
  ensure_crypto_init();
  std::array<uint8_t, kSeedBytes> seed{};
  randombytes_buf(seed.data(), seed.size());
  auto signer = from_seed(seed);
  sodium_memzero(seed.data(), seed.size());
  return signer.take();
}

Result<SeedSigner> SeedSigner::from_seed(std::span<const uint8_t> seed) {
  ensure_crypto_init();
  if (seed.size() != kSeedBytes) {
    return fail(ErrorCode::kMalformedRequest, "seed must be 32 bytes");
  }
  SeedSigner s;
  crypto_sign_seed_keypair(s.public_.data(), s.secret_.data(), seed.data());
  return s;
}

Result<SeedSigner> SeedSigner::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return fail(ErrorCode::kIoError, "cannot open key file: " + path);
  }
  std::string hex;
  in >> hex;
  auto seed = from_hex_array<kSeedBytes>(hex);
  if (!seed.ok()) {
    return fail(ErrorCode::kMalformedRequest,
                "key file must hold a 32-byte hex seed: " + path);
  }
  return from_seed(seed.value());
}

Status SeedSigner::save(const std::string& path) const {
  ensure_crypto_init();
  // The seed is the first 32 bytes of the expanded secret key.
  std::array<uint8_t, kSeedBytes> seed{};
  crypto_sign_ed25519_sk_to_seed(seed.data(), secret_.data());
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    return fail(ErrorCode::kIoError, "cannot write key file: " + path);
  }
  out << to_hex(seed) << "\n";
  out.close();
  sodium_memzero(seed.data(), seed.size());
  ::chmod(path.c_str(), 0600);
  return ok_status();
}

Result<Signature> SeedSigner::sign(std::span<const uint8_t> message) const {
  ensure_crypto_init();
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_.data());
  return sig;
}

}  // namespace iotx
