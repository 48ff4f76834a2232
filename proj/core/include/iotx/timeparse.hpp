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

#ifndef IOTX_TIMEPARSE_HPP
#define IOTX_TIMEPARSE_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "iotx/result.hpp"

namespace iotx {

/// Accepts `YYYY-MM-DD:hh:mm:ss` and ISO 8601 `YYYY-MM-DDThh:mm:ssZ`,
/// both read as UTC. Returns epoch seconds.
Result<int64_t> parse_timestamp(std::string_view text);

/// Accepts `hh:mm:ss` (hours may exceed two digits). Returns seconds.
Result<int64_t> parse_period(std::string_view text);

/// Epoch seconds to `YYYY-MM-DDThh:mm:ssZ`. The single serialization used in
/// every signed document, so timestamps never need float canonicalization.
std::string format_timestamp(int64_t epoch_seconds);

}  // namespace iotx

#endif  // IOTX_TIMEPARSE_HPP
