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

#include <filesystem>

#include <doctest.h>

#include "iotx/hex.hpp"

using namespace iotx;

namespace {

struct Sandbox {
  ManualClock clock{1'000'000};
  IdentityHub hub;
  Resolver resolver;

  Sandbox() {
    REQUIRE(resolver
                .register_plugin(
                    std::make_shared<LocalMethodPlugin>("iotx", hub, clock))
                .ok());
  }
};

}  // namespace

TEST_CASE("connectivity syntax rules") {
  CHECK(validate_connectivity_id("EthernetMacAddress", "00:0a:95:9d:68:16").ok());
  CHECK(validate_connectivity_id("WiFiMacAddress", "AA:BB:CC:DD:EE:FF").ok());
  CHECK(validate_connectivity_id("LoRaDeviceEUI", "a81758fffe03ab42").ok());

  CHECK(validate_connectivity_id("EthernetMacAddress", "00:0a:95:9d:68").code() ==
        ErrorCode::kServiceSyntaxError);
  CHECK(validate_connectivity_id("EthernetMacAddress", "zz:0a:95:9d:68:16")
            .code() == ErrorCode::kServiceSyntaxError);
  CHECK(validate_connectivity_id("LoRaDeviceEUI", "too-short").code() ==
        ErrorCode::kServiceSyntaxError);
  CHECK(validate_connectivity_id("Bluetooth", "whatever").code() ==
        ErrorCode::kServiceSyntaxError);
}

TEST_CASE("create_did binds the connectivity service endpoint") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  auto doc = sb.resolver.create_did(
      "iotx", signer.public_key(),
      {ServiceEntry{Did{}, "EthernetMacAddress", "00:0a:95:9d:68:16"}}, signer);
  REQUIRE(doc.ok());
  REQUIRE(doc.value().services.size() == 1);
  CHECK(doc.value().services[0].service_endpoint == "00:0a:95:9d:68:16");
  CHECK(doc.value().services[0].type == "EthernetMacAddress");
  CHECK(doc.value().services[0].id == doc.value().id);
  CHECK(doc.value().id.method == "iotx");
  CHECK(doc.value().id.method_specific_id.size() == 32);  // 16 bytes hex
  CHECK(doc.value().self_proof_ok());
}

TEST_CASE("create_did accepts empty services") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  auto doc = sb.resolver.create_did("iotx", signer.public_key(), {}, signer);
  REQUIRE(doc.ok());
  CHECK(doc.value().services.empty());
}

TEST_CASE("create_did rejects unknown methods and bad services") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  CHECK(sb.resolver.create_did("unregistered", signer.public_key(), {}, signer)
            .code() == ErrorCode::kUnknownMethod);
  CHECK(sb.resolver
            .create_did("iotx", signer.public_key(),
                        {ServiceEntry{Did{}, "EthernetMacAddress", "nope"}},
                        signer)
            .code() == ErrorCode::kServiceSyntaxError);
  CHECK(sb.resolver
            .create_did(
                "iotx", signer.public_key(),
                {ServiceEntry{Did{}, "LoRaDeviceEUI", "a81758fffe03ab42"},
                 ServiceEntry{Did{}, "LoRaDeviceEUI", "a81758fffe03ab43"}},
                signer)
            .code() == ErrorCode::kDuplicateServiceType);
  SeedSigner other = SeedSigner::generate();
  CHECK(sb.resolver.create_did("iotx", other.public_key(), {}, signer).code() ==
        ErrorCode::kSignerMismatch);
}

TEST_CASE("resolve returns the created document byte-for-byte") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  auto doc = sb.resolver.create_did(
      "iotx", signer.public_key(),
      {ServiceEntry{Did{}, "LoRaDeviceEUI", "a81758fffe03ab42"}}, signer);
  REQUIRE(doc.ok());
  auto resolved = sb.resolver.resolve(doc.value().id);
  REQUIRE(resolved.ok());
  CHECK(resolved.value().canonical_text().value() ==
        doc.value().canonical_text().value());
}

TEST_CASE("resolution misses are typed") {
  Sandbox sb;
  CHECK(sb.resolver.resolve(Did{"iotx", "deadbeefdeadbeef"}).code() ==
        ErrorCode::kNotFound);
  CHECK(sb.resolver.resolve(Did{"nosuch", "abc"}).code() ==
        ErrorCode::kUnknownMethod);
}

TEST_CASE("method-specific id is a deterministic digest of key and time") {
  SeedSigner signer = SeedSigner::generate();
  auto a = make_self_signed_document("iotx", signer.public_key(), {}, signer,
                                     12345);
  auto b = make_self_signed_document("iotx", signer.public_key(), {}, signer,
                                     12345);
  auto c = make_self_signed_document("iotx", signer.public_key(), {}, signer,
                                     12346);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  REQUIRE(c.ok());
  CHECK(a.value().id == b.value().id);
  CHECK(a.value().id != c.value().id);
}

TEST_CASE("hub store/fetch round trip") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  auto doc = make_self_signed_document("iotx", signer.public_key(), {}, signer,
                                       sb.clock.now());
  REQUIRE(doc.ok());
  auto rev = sb.hub.store(doc.value());
  REQUIRE(rev.ok());
  CHECK(rev.value() == 0);
  auto fetched = sb.hub.fetch(doc.value().id);
  REQUIRE(fetched.ok());
  CHECK(fetched.value() == doc.value());
}

TEST_CASE("hub rejects corrupted proofs") {
  Sandbox sb;
  SeedSigner signer = SeedSigner::generate();
  auto doc = make_self_signed_document("iotx", signer.public_key(), {}, signer,
                                       sb.clock.now());
  REQUIRE(doc.ok());
  // Flip one proof byte; the verifier oracle must reject.
  DidDocument corrupted = doc.value();
  corrupted.proof[17] ^= 0x01;
  CHECK_FALSE(corrupted.self_proof_ok());
  CHECK(sb.hub.store(corrupted).code() == ErrorCode::kProofInvalid);
}

TEST_CASE("updates need the current document key") {
  Sandbox sb;
  SeedSigner owner = SeedSigner::generate();
  auto doc = make_self_signed_document("iotx", owner.public_key(), {}, owner,
                                       sb.clock.now());
  REQUIRE(doc.ok());
  REQUIRE(sb.hub.store(doc.value()).ok());

  // Same id, updated services, same key: accepted as a new revision.
  DidDocument updated = doc.value();
  updated.services = {ServiceEntry{updated.id, "EthernetMacAddress",
                                   "00:0a:95:9d:68:16"}};
  auto bytes = canonical_bytes(updated.pre_proof_json());
  REQUIRE(bytes.ok());
  updated.proof = owner.sign(bytes.value()).take();
  auto rev = sb.hub.store(updated);
  REQUIRE(rev.ok());
  CHECK(rev.value() == 1);
  CHECK(sb.hub.fetch(updated.id).value().services.size() == 1);
  CHECK(sb.hub.revisions(updated.id).size() == 2);

  // An attacker forges a revision under their own key: the document
  // self-proof verifies, but the hub demands the registered key.
  SeedSigner attacker = SeedSigner::generate();
  DidDocument forged = updated;
  forged.public_key = attacker.public_key();
  forged.services = {};
  auto forged_bytes = canonical_bytes(forged.pre_proof_json());
  REQUIRE(forged_bytes.ok());
  forged.proof = attacker.sign(forged_bytes.value()).take();
  CHECK(forged.self_proof_ok());
  CHECK(sb.hub.store(forged).code() == ErrorCode::kUpdateUnauthorized);

  // Nothing about the stored document changed.
  auto current = sb.hub.fetch(updated.id);
  REQUIRE(current.ok());
  CHECK(current.value().public_key == owner.public_key());
  CHECK(current.value().services.size() == 1);
}

TEST_CASE("hub persistence replays revisions from the JSONL file") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "iotx_hub_test.jsonl").string();
  std::filesystem::remove(path);

  SeedSigner signer = SeedSigner::generate();
  Did id;
  {
    IdentityHub hub;
    REQUIRE(hub.attach_file(path).ok());
    auto doc = make_self_signed_document("iotx", signer.public_key(), {},
                                         signer, 500);
    REQUIRE(doc.ok());
    id = doc.value().id;
    REQUIRE(hub.store(doc.value()).ok());
  }
  {
    IdentityHub hub;
    REQUIRE(hub.attach_file(path).ok());
    auto fetched = hub.fetch(id);
    REQUIRE(fetched.ok());
    CHECK(fetched.value().public_key == signer.public_key());
  }
  std::filesystem::remove(path);
}

TEST_CASE("plugin registry holds one plugin per method") {
  Sandbox sb;
  IdentityHub other_hub;
  CHECK(sb.resolver
            .register_plugin(std::make_shared<LocalMethodPlugin>(
                "iotx", other_hub, sb.clock))
            .code() == ErrorCode::kDuplicatePlugin);
  // A second method resolves independently, like an external identity hub.
  REQUIRE(sb.resolver
              .register_plugin(std::make_shared<LocalMethodPlugin>(
                  "exthub", other_hub, sb.clock))
              .ok());
  SeedSigner signer = SeedSigner::generate();
  auto doc = sb.resolver.create_did("exthub", signer.public_key(), {}, signer);
  REQUIRE(doc.ok());
  CHECK(doc.value().id.method == "exthub");
  CHECK(sb.resolver.resolve(doc.value().id).ok());
}
