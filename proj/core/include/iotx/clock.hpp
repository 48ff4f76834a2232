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

#ifndef IOTX_CLOCK_HPP
#define IOTX_CLOCK_HPP

#include <atomic>
#include <chrono>
#include <cstdint>

namespace iotx {

/// Time source for every enforcement decision. UTC epoch seconds.
/// Injectable so tests (and manual-mode deployments) control time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now() const = 0;
};

class RealClock final : public Clock {
 public:
  int64_t now() const override {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(int64_t start = 0) : now_(start) {}

  int64_t now() const override { return now_.load(std::memory_order_relaxed); }
  void set(int64_t t) { now_.store(t, std::memory_order_relaxed); }
  void advance(int64_t seconds) {
    now_.fetch_add(seconds, std::memory_order_relaxed);
  }

 private:
  std::atomic<int64_t> now_;
};

}  // namespace iotx

#endif  // IOTX_CLOCK_HPP
