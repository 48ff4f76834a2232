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

#include "iotx/timeparse.hpp"

#include <cstdio>

namespace iotx {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int64_t to_int(std::string_view s) {
  int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

bool leap_year(int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int64_t y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap_year(y)) return 29;
  return kDays[m - 1];
}

// Howard Hinnant's civil-date algorithms; proleptic Gregorian calendar.
int64_t days_from_civil(int64_t y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(int64_t z, int64_t& y, int& m, int& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int64_t doe = z - era * 146097;
  const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = yoe + era * 400;
  const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int64_t mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y += m <= 2;
}

Result<int64_t> assemble(std::string_view ys, std::string_view mos,
                         std::string_view ds, std::string_view hs,
                         std::string_view mins, std::string_view ss) {
  for (auto part : {ys, mos, ds, hs, mins, ss}) {
    if (!all_digits(part)) {
      return fail(ErrorCode::kMalformedTimestamp, "non-numeric component");
    }
  }
  const int64_t y = to_int(ys);
  const int mo = static_cast<int>(to_int(mos));
  const int d = static_cast<int>(to_int(ds));
  const int h = static_cast<int>(to_int(hs));
  const int mi = static_cast<int>(to_int(mins));
  const int s = static_cast<int>(to_int(ss));
  if (mo < 1 || mo > 12) {
    return fail(ErrorCode::kMalformedTimestamp, "month out of range");
  }
  if (d < 1 || d > days_in_month(y, mo)) {
    return fail(ErrorCode::kMalformedTimestamp, "day out of range");
  }
  if (h > 23 || mi > 59 || s > 59) {
    return fail(ErrorCode::kMalformedTimestamp, "time of day out of range");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace

Result<int64_t> parse_timestamp(std::string_view t) {
  // YYYY-MM-DD:hh:mm:ss                 (19 chars)
  // YYYY-MM-DDThh:mm:ssZ                (20 chars)
  const bool iso = t.size() == 20 && t[10] == 'T' && t[19] == 'Z';
  const bool compact = t.size() == 19 && t[10] == ':';
  if (!iso && !compact) {
    return fail(ErrorCode::kMalformedTimestamp, "unrecognized timestamp form");
  }
  if (t[4] != '-' || t[7] != '-' || t[13] != ':' || t[16] != ':') {
    return fail(ErrorCode::kMalformedTimestamp, "bad separators");
  }
  return assemble(t.substr(0, 4), t.substr(5, 2), t.substr(8, 2),
                  t.substr(11, 2), t.substr(14, 2), t.substr(17, 2));
}

Result<int64_t> parse_period(std::string_view t) {
  const size_t c1 = t.find(':');
  if (c1 == std::string_view::npos) {
    return fail(ErrorCode::kMalformedPeriod, "missing separator");
  }
  const size_t c2 = t.find(':', c1 + 1);
  if (c2 == std::string_view::npos || t.find(':', c2 + 1) != std::string_view::npos) {
    return fail(ErrorCode::kMalformedPeriod, "expected hh:mm:ss");
  }
  const auto hs = t.substr(0, c1);
  const auto ms = t.substr(c1 + 1, c2 - c1 - 1);
  const auto ss = t.substr(c2 + 1);
  if (hs.size() < 2 || ms.size() != 2 || ss.size() != 2 || !all_digits(hs) ||
      !all_digits(ms) || !all_digits(ss)) {
    return fail(ErrorCode::kMalformedPeriod, "expected hh:mm:ss");
  }
  const int64_t m = to_int(ms);
  const int64_t s = to_int(ss);
  if (m > 59 || s > 59) {
    return fail(ErrorCode::kMalformedPeriod, "minutes/seconds out of range");
  }
  return to_int(hs) * 3600 + m * 60 + s;
}

std::string format_timestamp(int64_t epoch) {
  int64_t days = epoch / 86400;
  int64_t rem = epoch % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int64_t y;
  int mo, d;
  civil_from_days(days, y, mo, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), mo, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace iotx
