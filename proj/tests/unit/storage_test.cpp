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

#include "iotx/storage.hpp"

#include <doctest.h>

using namespace iotx;

namespace {

TelemetryRecord rec(const Did& d, int64_t ts, std::string temp) {
  return TelemetryRecord{d, ts, Json{{"temp", std::move(temp)}}};
}

}  // namespace

TEST_CASE("scan returns ascending timestamps within the range") {
  MemoryEdgeStore store;
  const Did dev{"iotx", "d1"};
  for (int64_t ts : {50, 10, 30, 20, 40}) {
    REQUIRE(store.put(rec(dev, ts, std::to_string(ts))).ok());
  }
  auto all = store.scan(dev, 0, 100);
  REQUIRE(all.size() == 5);
  for (size_t i = 1; i < all.size(); ++i) {
    CHECK(all[i - 1].timestamp < all[i].timestamp);
  }
  auto window = store.scan(dev, 20, 40);
  REQUIRE(window.size() == 3);
  CHECK(window.front().timestamp == 20);
  CHECK(window.back().timestamp == 40);

  auto exclusive = store.scan(dev, 20, 40, /*from_exclusive=*/true);
  REQUIRE(exclusive.size() == 2);
  CHECK(exclusive.front().timestamp == 30);
}

TEST_CASE("partitions are per device") {
  MemoryEdgeStore store;
  const Did a{"iotx", "a"};
  const Did b{"iotx", "b"};
  REQUIRE(store.put(rec(a, 1, "1")).ok());
  REQUIRE(store.put(rec(b, 2, "2")).ok());
  CHECK(store.scan(a, 0, 10).size() == 1);
  CHECK(store.scan(b, 0, 10).size() == 1);
  CHECK(store.scan(Did{"iotx", "c"}, 0, 10).empty());
  CHECK(store.latest_timestamp(a) == 1);
  CHECK(store.latest_timestamp(b) == 2);
  CHECK_FALSE(store.latest_timestamp(Did{"iotx", "c"}).has_value());
}

TEST_CASE("same (device, timestamp) upserts") {
  MemoryEdgeStore store;
  const Did dev{"iotx", "d"};
  REQUIRE(store.put(rec(dev, 5, "old")).ok());
  REQUIRE(store.put(rec(dev, 5, "new")).ok());
  auto rows = store.scan(dev, 0, 10);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fields.at("temp") == "new");
}

TEST_CASE("field validation rejects nests, floats and empty names") {
  MemoryEdgeStore store;
  const Did dev{"iotx", "d"};
  TelemetryRecord nested{dev, 1, Json{{"a", Json{{"b", 1}}}}};
  CHECK_FALSE(store.put(nested).ok());
  TelemetryRecord floaty{dev, 1, Json{{"a", 1.5}}};
  CHECK_FALSE(store.put(floaty).ok());
  TelemetryRecord unnamed{dev, 1, Json{{"", "x"}}};
  CHECK_FALSE(store.put(unnamed).ok());
  TelemetryRecord fine{dev, 1, Json{{"n", 3}, {"s", "x"}}};
  CHECK(store.put(fine).ok());
}
