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

#ifndef IOTX_RESULT_HPP
#define IOTX_RESULT_HPP

#include <cassert>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace iotx {

/// Typed failure reasons. Tokens are part of the wire protocol: each code
/// round-trips through `error_token` / `error_code_from_token` and appears
/// verbatim in HTTP error bodies and CLI stderr output.
enum class ErrorCode {
  // identity
  kMalformedDid,
  kUnknownMethod,
  kNotFound,
  kProofInvalid,
  kUpdateUnauthorized,
  kServiceSyntaxError,
  kDuplicateServiceType,
  kDuplicatePlugin,
  // credential
  kUnsupportedValue,
  kSubjectInvalid,
  kSignerMismatch,
  kIssuerUnresolvable,
  kEndorsementInvalid,
  kDeviceUnresolvable,
  kMalformedTimestamp,
  kMalformedPeriod,
  // keystore
  kUnknownKeyHandle,
  kDuplicateIdentity,
  kDanglingKeyHandle,
  kKeystoreError,
  // policy
  kDenied,
  kCustomerUnresolvable,
  kCapacityExceeded,
  kPolicyDenied,
  kExchangeUnavailable,
  kPolicyInvalid,
  // exchange
  kDuplicateConnectivityId,
  kOwnerUnresolvable,
  kVerificationFailed,
  kUnknownVcId,
  kVcIdAlreadyUsed,
  kVcIdIssuerMismatch,
  kGrantNotActive,
  kDeviceNotInGrant,
  kPermissionDenied,
  kOutsideWindow,
  kPeriodNotElapsed,
  kUnknownDevice,
  kSignatureInvalid,
  kNonMonotoneTimestamp,
  // privacy
  kUnknownFilter,
  kFilterInvalid,
  // plumbing
  kMalformedRequest,
  kIoError,
  kInternal,
};

std::string_view error_token(ErrorCode code);
ErrorCode error_code_from_token(std::string_view token);

struct Error {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
  // Protocol step that failed, for multi-step flows (0 when not applicable).
  int step = 0;

  std::string_view token() const { return error_token(code); }
};

inline Error fail(ErrorCode code, std::string message = {}, int step = 0) {
  return Error{code, std::move(message), step};
}

/// Value-or-Error. Modeled after the expected<> idiom; small enough that the
/// project does not need a third-party dependency for it.
template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error error) : v_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    assert(ok());
    return std::get<T>(v_);
  }
  T& value() & {
    assert(ok());
    return std::get<T>(v_);
  }
  T&& take() {
    assert(ok());
    return std::move(std::get<T>(v_));
  }

  const Error& error() const {
    assert(!ok());
    return std::get<Error>(v_);
  }
  ErrorCode code() const { return error().code; }

 private:
  std::variant<T, Error> v_;
};

/// Result with no payload.
class Status {
 public:
  Status() = default;
  Status(Error error) : error_(std::move(error)), failed_(true) {}

  bool ok() const { return !failed_; }
  explicit operator bool() const { return ok(); }

  const Error& error() const {
    assert(failed_);
    return error_;
  }
  ErrorCode code() const { return error().code; }

 private:
  Error error_;
  bool failed_ = false;
};

inline Status ok_status() { return Status{}; }

}  // namespace iotx

#endif  // IOTX_RESULT_HPP
