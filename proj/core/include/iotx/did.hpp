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

#ifndef IOTX_DID_HPP
#define IOTX_DID_HPP

#include <compare>
#include <string>
#include <string_view>

#include "iotx/result.hpp"

namespace iotx {

/// Decentralized identifier. Canonical text form is exactly
/// `did:<method>:<method-specific-id>`; parsing then re-serializing any
/// valid DID string is the identity function.
struct Did {
  std::string method;              // lowercase alphanumerics
  std::string method_specific_id;  // nonempty

  std::string to_string() const {
    return "did:" + method + ":" + method_specific_id;
  }

  auto operator<=>(const Did&) const = default;
};

/// Parses `did:<method>:<id>`. Method accepts [a-z0-9]+; the id accepts
/// [A-Za-z0-9._:-]+ (colons allowed, so method-specific ids may be
/// hierarchical). Everything else is MalformedDid.
Result<Did> parse_did(std::string_view text);

}  // namespace iotx

#endif  // IOTX_DID_HPP
