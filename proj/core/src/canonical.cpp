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

#include "iotx/canonical.hpp"

#include <algorithm>
#include <cstdio>

namespace iotx {
namespace {

void write_escaped(std::string_view s, std::string& out) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

Status write_value(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return ok_status();
    case Json::value_t::number_integer:
      out += std::to_string(v.get<int64_t>());
      return ok_status();
    case Json::value_t::number_unsigned:
      out += std::to_string(v.get<uint64_t>());
      return ok_status();
    case Json::value_t::string:
      write_escaped(v.get_ref<const std::string&>(), out);
      return ok_status();
    case Json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& item : v) {
        if (!first) out.push_back(',');
        first = false;
        if (auto st = write_value(item, out); !st.ok()) return st;
      }
      out.push_back(']');
      return ok_status();
    }
    case Json::value_t::object: {
      // json::object_t is an ordered map; byte-wise key order equals
      // code-point order for UTF-8. Sorted explicitly anyway so the rule
      // does not depend on the container.
      std::vector<const std::string*> keys;
      keys.reserve(v.size());
      for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(&it.key());
      std::sort(keys.begin(), keys.end(),
                [](const std::string* a, const std::string* b) { return *a < *b; });
      out.push_back('{');
      bool first = true;
      for (const auto* k : keys) {
        if (!first) out.push_back(',');
        first = false;
        write_escaped(*k, out);
        out.push_back(':');
        if (auto st = write_value(v.at(*k), out); !st.ok()) return st;
      }
      out.push_back('}');
      return ok_status();
    }
    case Json::value_t::number_float:
      return fail(ErrorCode::kUnsupportedValue,
                  "floating-point values cannot be canonicalized");
    case Json::value_t::null:
      return fail(ErrorCode::kUnsupportedValue, "null cannot be canonicalized");
    default:
      return fail(ErrorCode::kUnsupportedValue, "unsupported value type");
  }
}

}  // namespace

Result<std::string> canonicalize(const Json& value) {
  std::string out;
  if (auto st = write_value(value, out); !st.ok()) return st.error();
  return out;
}

Result<std::vector<uint8_t>> canonical_bytes(const Json& value) {
  auto text = canonicalize(value);
  if (!text.ok()) return text.error();
  const auto& s = text.value();
  return std::vector<uint8_t>(s.begin(), s.end());
}

}  // namespace iotx
