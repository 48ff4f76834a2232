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

#include "iotx/did.hpp"

namespace iotx {
namespace {

bool method_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool id_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-' || c == ':';
}

}  // namespace

Result<Did> parse_did(std::string_view text) {
  constexpr std::string_view kPrefix = "did:";
  if (text.substr(0, kPrefix.size()) != kPrefix) {
    return fail(ErrorCode::kMalformedDid, "missing did: prefix");
  }
  const auto rest = text.substr(kPrefix.size());
  const auto sep = rest.find(':');
  if (sep == std::string_view::npos) {
    return fail(ErrorCode::kMalformedDid, "missing method-specific id");
  }
  const auto method = rest.substr(0, sep);
  const auto id = rest.substr(sep + 1);
  if (method.empty()) {
    return fail(ErrorCode::kMalformedDid, "empty method");
  }
  if (id.empty()) {
    return fail(ErrorCode::kMalformedDid, "empty method-specific id");
  }
  for (char c : method) {
    if (!method_char(c)) {
      return fail(ErrorCode::kMalformedDid, "illegal method character");
    }
  }
  for (char c : id) {
    if (!id_char(c)) {
      return fail(ErrorCode::kMalformedDid, "illegal id character");
    }
  }
  return Did{std::string(method), std::string(id)};
}

}  // namespace iotx
