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

#ifndef IOTX_CREDENTIAL_HPP
#define IOTX_CREDENTIAL_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "iotx/canonical.hpp"
#include "iotx/crypto.hpp"
#include "iotx/did.hpp"
#include "iotx/identity.hpp"

namespace iotx {

inline constexpr std::string_view kPermissionData = "data";
inline constexpr std::string_view kPermissionControl = "control";

/// The access claim carried in a credential: which devices, over which
/// window, at which polling period, with which permissions, and whether
/// privacy-preserving processing applies.
struct AccessRequestSubject {
  Did id;  // the customer
  std::vector<Did> device_ids;
  int64_t start = 0;   // UTC epoch seconds
  int64_t end = 0;     // UTC epoch seconds
  int64_t period = 0;  // seconds
  std::set<std::string> permissions;
  bool privacy_preserving = false;

  /// start < end; 0 < period <= end - start; deviceIds nonempty without
  /// duplicates; permissions a nonempty subset of {data, control}.
  Status validate() const;

  Json to_json() const;
  static Result<AccessRequestSubject> from_json(const Json& j);
};

struct Endorsement {
  Did authorizing_party;
  Signature signature{};
};

struct VerifiableCredential {
  std::string vc_id;  // exchange-minted; need not be a DID
  Did issuer;         // the owner agent
  int64_t issuance_date = 0;
  AccessRequestSubject credential_subject;
  std::vector<Endorsement> endorsements;
  Signature proof{};

  Json to_json() const;
  /// All fields except proof — the bytes the issuer signs.
  Json pre_proof_json() const;
  /// All fields except proof and endorsements — the bytes each authorizing
  /// party signs, so parties endorse the exact terms.
  Json endorsement_payload_json() const;

  static Result<VerifiableCredential> from_json(const Json& j);
};

struct UnsignedCredential {
  std::string vc_id;
  Did issuer;
  int64_t issuance_date = 0;
  AccessRequestSubject credential_subject;
  std::vector<Endorsement> endorsements;
};

/// Signs the credential. The signer's key must match the issuer's resolved
/// document key, and the subject invariants must hold.
Result<VerifiableCredential> sign_credential(const UnsignedCredential& fields,
                                             const Signer& signer,
                                             const DidResolver& resolver);

/// Valid iff the issuer resolves, the proof verifies over the canonical
/// bytes, every endorsement verifies, the subject invariants hold, and
/// every device DID resolves — checked in that order, first failure wins.
/// Read-only.
Status verify_credential(const VerifiableCredential& vc,
                         const DidResolver& resolver);

}  // namespace iotx

#endif  // IOTX_CREDENTIAL_HPP
