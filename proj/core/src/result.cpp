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

#include "iotx/result.hpp"

#include <array>

namespace iotx {
namespace {

struct TokenEntry {
  ErrorCode code;
  std::string_view token;
};

constexpr std::array kTokens{
    TokenEntry{ErrorCode::kMalformedDid, "MalformedDid"},
    TokenEntry{ErrorCode::kUnknownMethod, "UnknownMethod"},
    TokenEntry{ErrorCode::kNotFound, "NotFound"},
    TokenEntry{ErrorCode::kProofInvalid, "ProofInvalid"},
    TokenEntry{ErrorCode::kUpdateUnauthorized, "UpdateUnauthorized"},
    TokenEntry{ErrorCode::kServiceSyntaxError, "ServiceSyntaxError"},
    TokenEntry{ErrorCode::kDuplicateServiceType, "DuplicateServiceType"},
    TokenEntry{ErrorCode::kDuplicatePlugin, "DuplicatePlugin"},
    TokenEntry{ErrorCode::kUnsupportedValue, "UnsupportedValue"},
    TokenEntry{ErrorCode::kSubjectInvalid, "SubjectInvalid"},
    TokenEntry{ErrorCode::kSignerMismatch, "SignerMismatch"},
    TokenEntry{ErrorCode::kIssuerUnresolvable, "IssuerUnresolvable"},
    TokenEntry{ErrorCode::kEndorsementInvalid, "EndorsementInvalid"},
    TokenEntry{ErrorCode::kDeviceUnresolvable, "DeviceUnresolvable"},
    TokenEntry{ErrorCode::kMalformedTimestamp, "MalformedTimestamp"},
    TokenEntry{ErrorCode::kMalformedPeriod, "MalformedPeriod"},
    TokenEntry{ErrorCode::kUnknownKeyHandle, "UnknownKeyHandle"},
    TokenEntry{ErrorCode::kDuplicateIdentity, "DuplicateIdentity"},
    TokenEntry{ErrorCode::kDanglingKeyHandle, "DanglingKeyHandle"},
    TokenEntry{ErrorCode::kKeystoreError, "KeystoreError"},
    TokenEntry{ErrorCode::kDenied, "Denied"},
    TokenEntry{ErrorCode::kCustomerUnresolvable, "CustomerUnresolvable"},
    TokenEntry{ErrorCode::kCapacityExceeded, "CapacityExceeded"},
    TokenEntry{ErrorCode::kPolicyDenied, "PolicyDenied"},
    TokenEntry{ErrorCode::kExchangeUnavailable, "ExchangeUnavailable"},
    TokenEntry{ErrorCode::kPolicyInvalid, "PolicyInvalid"},
    TokenEntry{ErrorCode::kDuplicateConnectivityId, "DuplicateConnectivityId"},
    TokenEntry{ErrorCode::kOwnerUnresolvable, "OwnerUnresolvable"},
    TokenEntry{ErrorCode::kVerificationFailed, "VerificationFailed"},
    TokenEntry{ErrorCode::kUnknownVcId, "UnknownVcId"},
    TokenEntry{ErrorCode::kVcIdAlreadyUsed, "VcIdAlreadyUsed"},
    TokenEntry{ErrorCode::kVcIdIssuerMismatch, "VcIdIssuerMismatch"},
    TokenEntry{ErrorCode::kGrantNotActive, "GrantNotActive"},
    TokenEntry{ErrorCode::kDeviceNotInGrant, "DeviceNotInGrant"},
    TokenEntry{ErrorCode::kPermissionDenied, "PermissionDenied"},
    TokenEntry{ErrorCode::kOutsideWindow, "OutsideWindow"},
    TokenEntry{ErrorCode::kPeriodNotElapsed, "PeriodNotElapsed"},
    TokenEntry{ErrorCode::kUnknownDevice, "UnknownDevice"},
    TokenEntry{ErrorCode::kSignatureInvalid, "SignatureInvalid"},
    TokenEntry{ErrorCode::kNonMonotoneTimestamp, "NonMonotoneTimestamp"},
    TokenEntry{ErrorCode::kUnknownFilter, "UnknownFilter"},
    TokenEntry{ErrorCode::kFilterInvalid, "FilterInvalid"},
    TokenEntry{ErrorCode::kMalformedRequest, "MalformedRequest"},
    TokenEntry{ErrorCode::kIoError, "IoError"},
    TokenEntry{ErrorCode::kInternal, "Internal"},
};

}  // namespace

std::string_view error_token(ErrorCode code) {
  for (const auto& e : kTokens) {
    if (e.code == code) return e.token;
  }
  return "Internal";
}

ErrorCode error_code_from_token(std::string_view token) {
  for (const auto& e : kTokens) {
    if (e.token == token) return e.code;
  }
  return ErrorCode::kInternal;
}

}  // namespace iotx
