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

#include "iotx/runtime.hpp"

#include <fstream>

namespace iotx {

Result<std::unique_ptr<ExchangeRuntime>> ExchangeRuntime::create(
    const ServiceConfig& config, std::string_view keystore_passphrase) {
  auto rt = std::unique_ptr<ExchangeRuntime>(new ExchangeRuntime());
  rt->config_ = config;

  if (config.manual_clock) {
    auto manual = std::make_unique<ManualClock>(config.manual_start);
    rt->manual_ = manual.get();
    rt->clock_ = std::move(manual);
  } else {
    rt->clock_ = std::make_unique<RealClock>();
  }

  if (config.keystore_path.empty()) {
    rt->keystore_ = std::make_unique<Keystore>();
  } else {
    auto ks = Keystore::open(config.keystore_path, keystore_passphrase);
    if (!ks.ok()) return ks.error();
    rt->keystore_ = ks.take();
  }

  if (!config.hub_path.empty()) {
    if (auto st = rt->hub_.attach_file(config.hub_path); !st.ok()) {
      return st.error();
    }
  }

  if (!config.filter_config_path.empty()) {
    std::ifstream in(config.filter_config_path);
    if (!in) {
      return fail(ErrorCode::kIoError,
                  "cannot open filter config: " + config.filter_config_path);
    }
    Json entries = Json::parse(in, nullptr, false);
    if (entries.is_discarded()) {
      return fail(ErrorCode::kMalformedRequest,
                  "filter config is not valid JSON");
    }
    if (auto st = rt->filters_.load_config(entries); !st.ok()) {
      return st.error();
    }
  }

  if (auto st = rt->resolver_.register_plugin(std::make_shared<LocalMethodPlugin>(
          "iotx", rt->hub_, *rt->clock_));
      !st.ok()) {
    return st.error();
  }

  rt->exchange_ = std::make_unique<Exchange>(
      ExchangeConfig{config.default_capacity}, *rt->clock_, *rt->keystore_,
      rt->resolver_, "iotx", rt->filters_, rt->store_, &rt->gateway_);

  for (const auto& p : config.policies) {
    if (auto st = rt->preload_policy(p.owner_did, p.policy_file); !st.ok()) {
      return st.error();
    }
  }
  return rt;
}

Status ExchangeRuntime::preload_policy(const std::string& owner_did,
                                       const std::string& policy_file) {
  auto owner = parse_did(owner_did);
  if (!owner.ok()) return owner.error();
  std::ifstream in(policy_file);
  if (!in) {
    return fail(ErrorCode::kIoError, "cannot open policy file: " + policy_file);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    return fail(ErrorCode::kMalformedRequest,
                "policy file is not valid JSON: " + policy_file);
  }
  auto policy = OwnerPolicy::from_json(j, filters_);
  if (!policy.ok()) return policy.error();
  exchange_->set_owner_policy(owner.value(), policy.take());
  return ok_status();
}

}  // namespace iotx
