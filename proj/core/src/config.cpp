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

#include "iotx/config.hpp"

#include <cstdlib>
#include <fstream>

namespace iotx {
namespace {

void parse_clock_spec(std::string_view spec, ServiceConfig& cfg) {
  if (spec.substr(0, 6) == "manual") {
    cfg.manual_clock = true;
    if (spec.size() > 7 && spec[6] == ':') {
      cfg.manual_start = std::atoll(std::string(spec.substr(7)).c_str());
    }
  } else {
    cfg.manual_clock = false;
  }
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const Json& j) {
  ServiceConfig cfg;
  if (j.contains("listen")) {
    const std::string listen = j.at("listen").get<std::string>();
    const auto colon = listen.rfind(':');
    if (colon != std::string::npos) {
      cfg.listen_host = listen.substr(0, colon);
      cfg.listen_port = std::atoi(listen.substr(colon + 1).c_str());
    }
  }
  if (j.contains("defaultCapacity")) {
    cfg.default_capacity = j.at("defaultCapacity").get<int>();
  }
  if (j.contains("clock")) {
    parse_clock_spec(j.at("clock").get<std::string>(), cfg);
  }
  if (j.contains("manualStart")) {
    cfg.manual_start = j.at("manualStart").get<int64_t>();
  }
  if (j.contains("keystorePath")) {
    cfg.keystore_path = j.at("keystorePath").get<std::string>();
  }
  if (j.contains("hubPath")) cfg.hub_path = j.at("hubPath").get<std::string>();
  if (j.contains("filterConfigPath")) {
    cfg.filter_config_path = j.at("filterConfigPath").get<std::string>();
  }
  if (j.contains("policies")) {
    for (const auto& p : j.at("policies")) {
      cfg.policies.push_back(PolicyPreload{
          p.at("ownerDid").get<std::string>(),
          p.at("policyFile").get<std::string>()});
    }
  }
  return cfg;
}

Result<ServiceConfig> ServiceConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return fail(ErrorCode::kIoError, "cannot open config file: " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    return fail(ErrorCode::kMalformedRequest, "config is not valid JSON: " + path);
  }
  try {
    ServiceConfig cfg = from_json(j);
    cfg.apply_env();
    return cfg;
  } catch (const Json::exception& e) {
    return fail(ErrorCode::kMalformedRequest,
                std::string("bad config value: ") + e.what());
  }
}

void ServiceConfig::apply_env() {
  if (const char* v = std::getenv("IOTX_LISTEN")) {
    const std::string listen(v);
    const auto colon = listen.rfind(':');
    if (colon != std::string::npos) {
      listen_host = listen.substr(0, colon);
      listen_port = std::atoi(listen.substr(colon + 1).c_str());
    }
  }
  if (const char* v = std::getenv("IOTX_DEFAULT_CAPACITY")) {
    default_capacity = std::atoi(v);
  }
  if (const char* v = std::getenv("IOTX_CLOCK")) {
    parse_clock_spec(v, *this);
  }
}

}  // namespace iotx
