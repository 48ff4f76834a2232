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

#ifndef IOTX_HEX_HPP
#define IOTX_HEX_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iotx/result.hpp"

namespace iotx {

// All hex produced by this project is lowercase.
std::string to_hex(std::span<const uint8_t> bytes);

Result<std::vector<uint8_t>> from_hex(std::string_view text);

template <size_t N>
Result<std::array<uint8_t, N>> from_hex_array(std::string_view text) {
  auto bytes = from_hex(text);
  if (!bytes.ok()) return bytes.error();
  if (bytes.value().size() != N) {
    return fail(ErrorCode::kMalformedRequest,
                "expected " + std::to_string(N) + " hex-encoded bytes");
  }
  std::array<uint8_t, N> out{};
  std::copy(bytes.value().begin(), bytes.value().end(), out.begin());
  return out;
}

}  // namespace iotx

#endif  // IOTX_HEX_HPP
