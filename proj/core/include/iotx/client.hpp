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

#ifndef IOTX_CLIENT_HPP
#define IOTX_CLIENT_HPP

#include <memory>
#include <string>

#include "iotx/credential.hpp"
#include "iotx/exchange.hpp"
#include "iotx/policy.hpp"

namespace iotx {

/// HTTP client for the exchange API. Connection failures surface as
/// ExchangeUnavailable; 4xx/5xx bodies are mapped back to their typed
/// reasons.
class HttpExchangeClient final : public ExchangeClient {
 public:
  explicit HttpExchangeClient(const std::string& base_url);
  ~HttpExchangeClient();

  HttpExchangeClient(const HttpExchangeClient&) = delete;
  HttpExchangeClient& operator=(const HttpExchangeClient&) = delete;

  // ExchangeClient
  Result<std::string> issue_vc_id(const Did& owner) override;
  Result<int> active_grant_count(const Did& device) override;

  Result<Json> register_device(const Did& owner, std::string_view type,
                               std::string_view connectivity_id,
                               std::string_view serial);
  Result<DidDocument> resolve(const Did& did);
  Result<Json> store_document(const DidDocument& doc);
  Result<Json> present_credential(const VerifiableCredential& vc);
  Result<Json> fetch_data(std::string_view vc_id, const Did& device,
                          const std::optional<std::string>& as_of);
  Result<Json> send_control(std::string_view vc_id, const Did& device,
                            const Json& command,
                            const std::optional<std::string>& as_of);
  Result<Json> ingest(std::string_view connectivity_id, const Json& body);
  Result<Json> mapping_by_connectivity(std::string_view connectivity_id);
  Result<Signature> sign_remote(std::string_view key_handle,
                                std::span<const uint8_t> message);
  Result<Json> set_policy(const Did& owner, const Json& policy);
  Result<Json> set_clock(int64_t now);
  Status healthy();

 private:
  Result<Json> get(const std::string& path);
  Result<Json> post(const std::string& path, const Json& body);

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// DidResolver over the exchange's resolution endpoint.
class HttpResolver final : public DidResolver {
 public:
  explicit HttpResolver(HttpExchangeClient& client) : client_(client) {}

  Result<DidDocument> resolve(const Did& did) const override {
    return client_.resolve(did);
  }

 private:
  HttpExchangeClient& client_;
};

}  // namespace iotx

#endif  // IOTX_CLIENT_HPP
