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

#include "iotx/client.hpp"

#include <httplib.h>

#include "iotx/hex.hpp"

namespace iotx {

struct HttpExchangeClient::Impl {
  explicit Impl(const std::string& base_url) : client(base_url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
  }
  httplib::Client client;
};

HttpExchangeClient::HttpExchangeClient(const std::string& base_url)
    : impl_(std::make_unique<Impl>(base_url)) {}

HttpExchangeClient::~HttpExchangeClient() = default;

namespace {

Result<Json> to_result(const httplib::Result& res) {
  if (!res) {
    return fail(ErrorCode::kExchangeUnavailable,
                "cannot reach the exchange: " + httplib::to_string(res.error()));
  }
  Json body = Json::parse(res->body, nullptr, false);
  if (res->status >= 200 && res->status < 300) {
    if (body.is_discarded()) {
      return fail(ErrorCode::kInternal, "exchange returned invalid JSON");
    }
    return body;
  }
  if (!body.is_discarded() && body.is_object() && body.contains("error")) {
    Error e;
    e.code = error_code_from_token(body.at("error").get<std::string>());
    e.step = body.value("step", 0);
    e.message = body.value("message", "");
    return e;
  }
  return fail(ErrorCode::kInternal,
              "exchange returned HTTP " + std::to_string(res->status));
}

}  // namespace

Result<Json> HttpExchangeClient::get(const std::string& path) {
  return to_result(impl_->client.Get(path));
}

Result<Json> HttpExchangeClient::post(const std::string& path,
                                      const Json& body) {
  auto text = canonicalize(body);
  return to_result(impl_->client.Post(
      path, text.ok() ? text.value() : body.dump(), "application/json"));
}

Result<std::string> HttpExchangeClient::issue_vc_id(const Did& owner) {
  auto r = post("/v1/vc-ids", Json{{"ownerDid", owner.to_string()}});
  if (!r.ok()) return r.error();
  return r.value().at("vcId").get<std::string>();
}

Result<int> HttpExchangeClient::active_grant_count(const Did& device) {
  auto r = get("/v1/devices/" + device.to_string() + "/grants");
  if (!r.ok()) return r.error();
  return r.value().at("activeGrants").get<int>();
}

Result<Json> HttpExchangeClient::register_device(const Did& owner,
                                                 std::string_view type,
                                                 std::string_view connectivity_id,
                                                 std::string_view serial) {
  return post("/v1/devices", Json{{"ownerDid", owner.to_string()},
                                  {"connectivityType", std::string(type)},
                                  {"connectivityId", std::string(connectivity_id)},
                                  {"deviceUniqueId", std::string(serial)}});
}

Result<DidDocument> HttpExchangeClient::resolve(const Did& did) {
  auto r = get("/v1/dids/" + did.to_string());
  if (!r.ok()) return r.error();
  return DidDocument::from_json(r.value());
}

Result<Json> HttpExchangeClient::store_document(const DidDocument& doc) {
  return post("/v1/dids", doc.to_json());
}

Result<Json> HttpExchangeClient::present_credential(
    const VerifiableCredential& vc) {
  return post("/v1/access", vc.to_json());
}

Result<Json> HttpExchangeClient::fetch_data(
    std::string_view vc_id, const Did& device,
    const std::optional<std::string>& as_of) {
  std::string path = "/v1/access/" + std::string(vc_id) + "/devices/" +
                     device.to_string() + "/data";
  if (as_of) path += "?asOf=" + *as_of;
  return get(path);
}

Result<Json> HttpExchangeClient::send_control(
    std::string_view vc_id, const Did& device, const Json& command,
    const std::optional<std::string>& as_of) {
  Json body = {{"command", command}};
  if (as_of) body["asOf"] = *as_of;
  return post("/v1/access/" + std::string(vc_id) + "/devices/" +
                  device.to_string() + "/control",
              body);
}

Result<Json> HttpExchangeClient::ingest(std::string_view connectivity_id,
                                        const Json& body) {
  return post("/v1/telemetry/" + std::string(connectivity_id), body);
}

Result<Json> HttpExchangeClient::mapping_by_connectivity(
    std::string_view connectivity_id) {
  return get("/v1/mappings/" + std::string(connectivity_id));
}

Result<Signature> HttpExchangeClient::sign_remote(
    std::string_view key_handle, std::span<const uint8_t> message) {
  auto r = post("/v1/keys/" + std::string(key_handle) + "/sign",
                Json{{"message", to_hex(message)}});
  if (!r.ok()) return r.error();
  return from_hex_array<kSignatureBytes>(
      r.value().at("signature").get<std::string>());
}

Result<Json> HttpExchangeClient::set_policy(const Did& owner,
                                            const Json& policy) {
  return post("/v1/policies",
              Json{{"ownerDid", owner.to_string()}, {"policy", policy}});
}

Result<Json> HttpExchangeClient::set_clock(int64_t now) {
  return post("/v1/clock", Json{{"now", now}});
}

Status HttpExchangeClient::healthy() {
  auto r = get("/v1/healthz");
  if (!r.ok()) return r.error();
  return ok_status();
}

}  // namespace iotx
