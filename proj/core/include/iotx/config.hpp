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

#ifndef IOTX_CONFIG_HPP
#define IOTX_CONFIG_HPP

#include <string>
#include <vector>

#include "iotx/canonical.hpp"

namespace iotx {

/// Service configuration. File first, then environment overrides:
/// IOTX_LISTEN (host:port), IOTX_DEFAULT_CAPACITY, IOTX_CLOCK
/// (real | manual[:start]). IOTX_KEYSTORE_PASSPHRASE is read separately,
/// never from the file.
struct ServiceConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8420;
  int default_capacity = 16;
  bool manual_clock = false;
  int64_t manual_start = 0;
  std::string keystore_path;       // empty: in-memory
  std::string hub_path;            // empty: in-memory
  std::string filter_config_path;  // optional extra filter definitions

  struct PolicyPreload {
    std::string owner_did;
    std::string policy_file;
  };
  std::vector<PolicyPreload> policies;

  static Result<ServiceConfig> load(const std::string& path);
  static ServiceConfig from_json(const Json& j);
  void apply_env();
};

}  // namespace iotx

#endif  // IOTX_CONFIG_HPP
