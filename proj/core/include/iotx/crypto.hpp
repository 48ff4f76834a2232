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

#ifndef IOTX_CRYPTO_HPP
#define IOTX_CRYPTO_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "iotx/result.hpp"

namespace iotx {

// Ed25519 throughout: 32-byte public keys, 64-byte signatures. The single
// registered verification method token.
inline constexpr size_t kPublicKeyBytes = 32;
inline constexpr size_t kSignatureBytes = 64;
inline constexpr size_t kSeedBytes = 32;
inline constexpr std::string_view kVerificationMethod = "Ed25519-2020";

using PublicKey = std::array<uint8_t, kPublicKeyBytes>;
using Signature = std::array<uint8_t, kSignatureBytes>;

/// Signing capability. Implementations hold the secret; callers only ever
/// see public keys and signatures.
class Signer {
 public:
  virtual ~Signer() = default;
  virtual PublicKey public_key() const = 0;
  virtual Result<Signature> sign(std::span<const uint8_t> message) const = 0;
};

bool ed25519_verify(std::span<const uint8_t> message, const Signature& sig,
                    const PublicKey& key);

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

/// n random bytes as lowercase hex from the CSPRNG.
std::string random_hex(size_t n_bytes);

/// Idempotent libsodium init; aborts on failure (no RNG, no service).
void ensure_crypto_init();

/// Agent-side key: a 32-byte seed held in a file, one per CLI persona.
/// Device keys never take this path; those stay inside the keystore.
class SeedSigner final : public Signer {
 public:
  static SeedSigner generate();
  static Result<SeedSigner> from_seed(std::span<const uint8_t> seed);
  static Result<SeedSigner> load(const std::string& path);

  /// Writes the seed as hex, file mode 0600.
  Status save(const std::string& path) const;

  PublicKey public_key() const override { return public_; }
  Result<Signature> sign(std::span<const uint8_t> message) const override;

 private:
  SeedSigner() = default;
  std::array<uint8_t, 64> secret_{};  // libsodium expanded secret key
  PublicKey public_{};
};

}  // namespace iotx

#endif  // IOTX_CRYPTO_HPP
