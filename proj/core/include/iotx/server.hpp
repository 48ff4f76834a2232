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

#ifndef IOTX_SERVER_HPP
#define IOTX_SERVER_HPP

#include <memory>
#include <string>
#include <thread>

#include "iotx/runtime.hpp"

namespace iotx {

/// HTTP/JSON face of the exchange. All success bodies are canonical JSON;
/// errors carry {"error": "<ReasonToken>", "step": <n>, "message": ...}.
class ExchangeServer {
 public:
  explicit ExchangeServer(ExchangeRuntime& runtime);
  ~ExchangeServer();

  ExchangeServer(const ExchangeServer&) = delete;
  ExchangeServer& operator=(const ExchangeServer&) = delete;

  /// Blocks serving until stop().
  Status listen(const std::string& host, int port);

  /// Binds an ephemeral port and serves on a background thread.
  Result<int> start(const std::string& host);

  void stop();

  int port() const { return port_; }

 private:
  void wire_routes();

  ExchangeRuntime& runtime_;
  struct Impl;  // hides httplib from the public header
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace iotx

#endif  // IOTX_SERVER_HPP
