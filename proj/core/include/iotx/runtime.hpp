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

#ifndef IOTX_RUNTIME_HPP
#define IOTX_RUNTIME_HPP

#include <memory>

#include "iotx/config.hpp"
#include "iotx/devicesim.hpp"
#include "iotx/exchange.hpp"

namespace iotx {

/// The assembled in-process stack: clock, identity hub + resolver with the
/// local `iotx` method, keystore, filter registry, edge store, and the
/// exchange itself. Shared by the service binary and the test harnesses.
class ExchangeRuntime {
 public:
  static Result<std::unique_ptr<ExchangeRuntime>> create(
      const ServiceConfig& config, std::string_view keystore_passphrase = {});

  Exchange& exchange() { return *exchange_; }
  Resolver& resolver() { return resolver_; }
  IdentityHub& hub() { return hub_; }
  Keystore& keystore() { return *keystore_; }
  FilterRegistry& filters() { return filters_; }
  MemoryEdgeStore& store() { return store_; }
  QueueGateway& gateway() { return gateway_; }
  Clock& clock() { return *clock_; }
  ManualClock* manual_clock() { return manual_; }

  const ServiceConfig& config() const { return config_; }

  /// Loads an owner policy file into the exchange's policy registry.
  Status preload_policy(const std::string& owner_did,
                        const std::string& policy_file);

 private:
  ExchangeRuntime() = default;

  ServiceConfig config_;
  std::unique_ptr<Clock> clock_;
  ManualClock* manual_ = nullptr;  // non-null in manual mode
  IdentityHub hub_;
  Resolver resolver_;
  std::unique_ptr<Keystore> keystore_;
  FilterRegistry filters_;
  MemoryEdgeStore store_;
  QueueGateway gateway_;
  std::unique_ptr<Exchange> exchange_;
};

/// In-process ExchangeClient for tests and embedded agents.
class LocalExchangeClient final : public ExchangeClient {
 public:
  explicit LocalExchangeClient(Exchange& exchange) : exchange_(exchange) {}

  Result<std::string> issue_vc_id(const Did& owner) override {
    return exchange_.issue_vc_id(owner);
  }
  Result<int> active_grant_count(const Did& device) override {
    return exchange_.active_grant_count(device);
  }

 private:
  Exchange& exchange_;
};

}  // namespace iotx

#endif  // IOTX_RUNTIME_HPP
