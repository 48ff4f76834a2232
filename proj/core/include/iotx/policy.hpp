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

#ifndef IOTX_POLICY_HPP
#define IOTX_POLICY_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "iotx/credential.hpp"
#include "iotx/privacy.hpp"

namespace iotx {

/// One filter-spec entry: a set of devices and the ordered filter chain their
/// traffic runs through.
struct FilterSpecEntry {
  std::set<Did> device_ids;
  std::vector<std::string> filter_chain;
};

/// The owner agent's issuance policy: the exemption list (DIDs exempt from
/// privacy processing), the filter spec (device -> filter chains),
/// per-device grant capacity, and the parties whose endorsement issuance requires.
struct OwnerPolicy {
  std::set<Did> privacy_exempt_list;
  std::vector<FilterSpecEntry> filter_spec;
  std::map<Did, int> device_capacity;         // max concurrent grants
  int default_capacity = 16;
  std::vector<Did> authorizing_parties;

  int capacity_for(const Did& device) const;

  Json to_json() const;

  /// Validates filter names against the registry and capacities >= 1.
  static Result<OwnerPolicy> from_json(const Json& j,
                                       const FilterRegistry& filters);
};

/// DIDs whose requests are categorically denied.
struct DenyPolicy {
  std::set<Did> denied_dids;

  Json to_json() const;
  static Result<DenyPolicy> from_json(const Json& j);
};

/// A customer's request, before the owner turns it into a credential
/// subject. Same temporal invariants as the subject.
struct AccessRequestDraft {
  Did customer_did;
  std::vector<Did> device_ids;
  int64_t start = 0;
  int64_t end = 0;
  int64_t period = 0;
  std::set<std::string> permissions;

  Status validate() const;

  Json to_json() const;
  static Result<AccessRequestDraft> from_json(const Json& j);

  AccessRequestSubject to_subject(bool privacy_preserving) const;
};

/// Ordered concatenation, in filter-spec entry order, of every entry's chain whose
/// device set contains the device. Chains concatenate rather than override:
/// filters are sanitizers, so union is the privacy-conservative reading.
std::vector<std::string> filter_chain_for(const Did& device,
                                          const OwnerPolicy& policy);

/// An authorizing party: checks requests against its deny list, then
/// signs. Denied is a policy outcome, not a fault.
class AuthorizingParty {
 public:
  AuthorizingParty(Did did, DenyPolicy policy, std::shared_ptr<Signer> signer)
      : did_(std::move(did)),
        policy_(std::move(policy)),
        signer_(std::move(signer)) {}

  const Did& did() const { return did_; }
  const DenyPolicy& policy() const { return policy_; }

  /// Signature over canonicalize(draft), or Denied when the customer is on
  /// the deny list. Deterministic: the same draft endorses to the same bytes.
  Result<Signature> endorse(const AccessRequestDraft& draft) const;

  /// Same policy gate, but over an arbitrary document — the issuance flow
  /// passes the assembled credential payload here so the endorsement that
  /// travels in the VC covers the exact terms the proof covers.
  Result<Signature> endorse_document(const Did& customer,
                                     const Json& document) const;

 private:
  Did did_;
  DenyPolicy policy_;
  std::shared_ptr<Signer> signer_;
};

/// Exchange surface the issuance flow needs. Implemented in-process and by
/// the HTTP client.
class ExchangeClient {
 public:
  virtual ~ExchangeClient() = default;
  virtual Result<std::string> issue_vc_id(const Did& owner) = 0;
  virtual Result<int> active_grant_count(const Did& device) = 0;
};

struct IssueContext {
  Did owner_did;
  const Signer& signer;
  ExchangeClient& exchange;
  const DidResolver& resolver;
  std::vector<const AuthorizingParty*> parties;
  const Clock& clock;
};

/// The owner agent's issuance flow, in order: resolve customer and device
/// DIDs; check per-device capacity against active grants; set
/// privacyPreserving := customer not on the exemption list; obtain a vcId from the
/// exchange; collect endorsements from every authorizing party (any denial
/// aborts); sign. Rejections report the failing step.
///
/// Callers serialize issuance per owner.
Result<VerifiableCredential> owner_issue_flow(const AccessRequestDraft& draft,
                                              const OwnerPolicy& policy,
                                              IssueContext& ctx);

}  // namespace iotx

#endif  // IOTX_POLICY_HPP
