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

#ifndef IOTX_CANONICAL_HPP
#define IOTX_CANONICAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "iotx/result.hpp"

namespace iotx {

using Json = nlohmann::json;

/// Deterministic serialization of the structured values that get signed.
///
/// Rules: object keys sorted lexicographically by code point, no
/// insignificant whitespace, UTF-8 passthrough, integers in minimal decimal
/// form, booleans as `true`/`false`. Strings escape `"` `\` and control
/// characters only. Equal values canonicalize to equal bytes.
///
/// Supported domain: objects, arrays, strings, integers, booleans. Floats
/// and nulls return UnsupportedValue — signed documents carry timestamps and
/// durations as strings/integers for exactly this reason.
Result<std::string> canonicalize(const Json& value);

/// Same, as a byte vector for signing.
Result<std::vector<uint8_t>> canonical_bytes(const Json& value);

}  // namespace iotx

#endif  // IOTX_CANONICAL_HPP
