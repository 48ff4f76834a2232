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

#include <random>

#include <doctest.h>

using namespace iotx;

TEST_CASE("period hh:mm:ss converts to seconds") {
  auto p = parse_period("06:00:00");
  REQUIRE(p.ok());
  CHECK(p.value() == 21600);  // 6 * 3600
  CHECK(parse_period("00:00:01").value() == 1);
  CHECK(parse_period("01:30:30").value() == 5430);
  CHECK(parse_period("100:00:00").value() == 360000);  // hours may grow
}

TEST_CASE("period rejects malformed input") {
  CHECK(parse_period("6:00").code() == ErrorCode::kMalformedPeriod);
  CHECK(parse_period("06:60:00").code() == ErrorCode::kMalformedPeriod);
  CHECK(parse_period("06:00:61").code() == ErrorCode::kMalformedPeriod);
  CHECK(parse_period("06-00-00").code() == ErrorCode::kMalformedPeriod);
  CHECK(parse_period("").code() == ErrorCode::kMalformedPeriod);
  CHECK(parse_period("aa:bb:cc").code() == ErrorCode::kMalformedPeriod);
}

TEST_CASE("both timestamp forms read as the same UTC instant") {
  auto compact = parse_timestamp("2019-10-01:00:00:00");
  auto iso = parse_timestamp("2019-10-01T00:00:00Z");
  REQUIRE(compact.ok());
  REQUIRE(iso.ok());
  CHECK(compact.value() == iso.value());
  // Known epoch value for 2019-10-01T00:00:00Z.
  CHECK(iso.value() == 1569888000);
}

TEST_CASE("timestamp rejects out-of-range components") {
  CHECK(parse_timestamp("2019-13-01:00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2019-00-01:00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2019-02-30:00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2019-10-01:24:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2019-10-01:00:60:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2019-10-01 00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("not-a-timestamp").code() ==
        ErrorCode::kMalformedTimestamp);
}

TEST_CASE("leap years are honored") {
  CHECK(parse_timestamp("2020-02-29:00:00:00").ok());
  CHECK(parse_timestamp("2019-02-29:00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);
  CHECK(parse_timestamp("2000-02-29:00:00:00").ok());   // 400-year rule
  CHECK(parse_timestamp("1900-02-29:00:00:00").code() ==
        ErrorCode::kMalformedTimestamp);                // 100-year rule
}

TEST_CASE("format then parse round-trips across random epochs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const int64_t epoch = rng() % 4'000'000'000LL;  // through year ~2096
    const std::string text = format_timestamp(epoch);
    auto parsed = parse_timestamp(text);
    REQUIRE(parsed.ok());
    CHECK(parsed.value() == epoch);
  }
}
