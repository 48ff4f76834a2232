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

#include "iotx/server.hpp"

#include <httplib.h>

#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace iotx {
namespace {

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownVcId:
    case ErrorCode::kUnknownDevice:
    case ErrorCode::kUnknownMethod:
    case ErrorCode::kUnknownKeyHandle:
    case ErrorCode::kUnknownFilter:
    case ErrorCode::kDeviceNotInGrant:
      return 404;
    case ErrorCode::kDuplicateConnectivityId:
    case ErrorCode::kDuplicateIdentity:
    case ErrorCode::kDuplicateServiceType:
    case ErrorCode::kVcIdAlreadyUsed:
    case ErrorCode::kNonMonotoneTimestamp:
      return 409;
    case ErrorCode::kPermissionDenied:
    case ErrorCode::kUpdateUnauthorized:
    case ErrorCode::kPolicyDenied:
    case ErrorCode::kDenied:
    case ErrorCode::kOutsideWindow:
    case ErrorCode::kGrantNotActive:
    case ErrorCode::kVcIdIssuerMismatch:
      return 403;
    case ErrorCode::kVerificationFailed:
    case ErrorCode::kProofInvalid:
    case ErrorCode::kSignatureInvalid:
    case ErrorCode::kEndorsementInvalid:
    case ErrorCode::kSignerMismatch:
      return 401;
    case ErrorCode::kPeriodNotElapsed:
    case ErrorCode::kCapacityExceeded:
      return 429;
    case ErrorCode::kInternal:
    case ErrorCode::kIoError:
    case ErrorCode::kKeystoreError:
      return 500;
    default:
      return 400;
  }
}

void send_error(httplib::Response& res, const Error& e) {
  Json body = {{"error", std::string(e.token())},
               {"step", e.step},
               {"message", e.message}};
  res.status = http_status_for(e.code);
  res.set_content(body.dump(), "application/json");
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  auto text = canonicalize(body);
  res.status = status;
  // Success bodies stay within the canonicalizable domain by construction.
  res.set_content(text.ok() ? text.value() : body.dump(), "application/json");
}

Result<Json> parse_body(const httplib::Request& req) {
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded()) {
    return fail(ErrorCode::kMalformedRequest, "body is not valid JSON");
  }
  return j;
}

Result<int64_t> parse_as_of(const httplib::Request& req, const Clock& clock) {
  if (!req.has_param("asOf")) return clock.now();
  const std::string raw = req.get_param_value("asOf");
  if (auto ts = parse_timestamp(raw); ts.ok()) return ts;
  // Fall back to a plain epoch integer.
  if (!raw.empty() && raw.find_first_not_of("0123456789") == std::string::npos) {
    return static_cast<int64_t>(std::stoll(raw));
  }
  return fail(ErrorCode::kMalformedTimestamp, "bad asOf value: " + raw);
}

}  // namespace

struct ExchangeServer::Impl {
  httplib::Server server;
};

ExchangeServer::ExchangeServer(ExchangeRuntime& runtime)
    : runtime_(runtime), impl_(std::make_unique<Impl>()) {
  wire_routes();
}

ExchangeServer::~ExchangeServer() { stop(); }

void ExchangeServer::wire_routes() {
  auto& s = impl_->server;
  auto& rt = runtime_;

  s.Get("/v1/healthz", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, Json{{"status", "ok"}});
  });

  // register_device
  s.Post("/v1/devices", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    const auto& j = body.value();
    if (!j.is_object() || !j.contains("ownerDid") ||
        !j.contains("connectivityType") || !j.contains("connectivityId") ||
        !j.contains("deviceUniqueId")) {
      return send_error(res, fail(ErrorCode::kMalformedRequest,
                                  "need ownerDid, connectivityType, "
                                  "connectivityId, deviceUniqueId"));
    }
    auto owner = parse_did(j.at("ownerDid").get<std::string>());
    if (!owner.ok()) return send_error(res, owner.error());
    auto reg = rt.exchange().register_device(
        owner.value(), j.at("connectivityType").get<std::string>(),
        j.at("connectivityId").get<std::string>(),
        j.at("deviceUniqueId").get<std::string>());
    if (!reg.ok()) return send_error(res, reg.error());
    send_json(res, reg.value().to_json(), 201);
  });

  // resolve
  s.Get("/v1/dids/:did", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto did = parse_did(req.path_params.at("did"));
    if (!did.ok()) return send_error(res, did.error());
    auto doc = rt.resolver().resolve(did.value());
    if (!doc.ok()) return send_error(res, doc.error());
    send_json(res, doc.value().to_json());
  });

  // hub_store: agents enroll their self-signed documents here
  s.Post("/v1/dids", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    auto doc = DidDocument::from_json(body.value());
    if (!doc.ok()) return send_error(res, doc.error());
    auto rev = rt.hub().store(doc.value());
    if (!rev.ok()) return send_error(res, rev.error());
    send_json(res,
              Json{{"id", doc.value().id.to_string()}, {"revision", rev.value()}},
              201);
  });

  // issue_vc_id
  s.Post("/v1/vc-ids", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    if (!body.value().is_object() || !body.value().contains("ownerDid")) {
      return send_error(res, fail(ErrorCode::kMalformedRequest, "need ownerDid"));
    }
    auto owner = parse_did(body.value().at("ownerDid").get<std::string>());
    if (!owner.ok()) return send_error(res, owner.error());
    auto id = rt.exchange().issue_vc_id(owner.value());
    if (!id.ok()) return send_error(res, id.error());
    send_json(res, Json{{"vcId", id.value()}}, 201);
  });

  // present_credential
  s.Post("/v1/access", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    auto vc = VerifiableCredential::from_json(body.value());
    if (!vc.ok()) return send_error(res, vc.error());
    auto grant = rt.exchange().present_credential(vc.value());
    if (!grant.ok()) return send_error(res, grant.error());
    send_json(res, grant.value(), 201);
  });

  // access_data
  s.Get("/v1/access/:vcid/devices/:did/data",
        [&rt](const httplib::Request& req, httplib::Response& res) {
          auto did = parse_did(req.path_params.at("did"));
          if (!did.ok()) return send_error(res, did.error());
          auto as_of = parse_as_of(req, rt.clock());
          if (!as_of.ok()) return send_error(res, as_of.error());
          std::optional<Did> customer;
          if (req.has_param("customer")) {
            auto c = parse_did(req.get_param_value("customer"));
            if (!c.ok()) return send_error(res, c.error());
            customer = c.take();
          }
          auto records = rt.exchange().access_data(
              customer, req.path_params.at("vcid"), did.value(), as_of.value());
          if (!records.ok()) return send_error(res, records.error());
          Json out = Json::array();
          for (const auto& r : records.value()) out.push_back(r.to_json());
          send_json(res, Json{{"records", out}});
        });

  // access_control
  s.Post("/v1/access/:vcid/devices/:did/control",
         [&rt](const httplib::Request& req, httplib::Response& res) {
           auto did = parse_did(req.path_params.at("did"));
           if (!did.ok()) return send_error(res, did.error());
           auto body = parse_body(req);
           if (!body.ok()) return send_error(res, body.error());
           if (!body.value().is_object() || !body.value().contains("command")) {
             return send_error(res,
                               fail(ErrorCode::kMalformedRequest, "need command"));
           }
           int64_t as_of = rt.clock().now();
           if (body.value().contains("asOf")) {
             const auto& v = body.value().at("asOf");
             if (v.is_number_integer() || v.is_number_unsigned()) {
               as_of = v.get<int64_t>();
             } else if (v.is_string()) {
               auto ts = parse_timestamp(v.get<std::string>());
               if (!ts.ok()) return send_error(res, ts.error());
               as_of = ts.value();
             }
           }
           std::optional<Did> customer;
           if (body.value().contains("customerDid")) {
             auto c = parse_did(body.value().at("customerDid").get<std::string>());
             if (!c.ok()) return send_error(res, c.error());
             customer = c.take();
           }
           auto st = rt.exchange().access_control(customer,
                                                  req.path_params.at("vcid"),
                                                  did.value(),
                                                  body.value().at("command"),
                                                  as_of);
           if (!st.ok()) return send_error(res, st.error());
           send_json(res, Json{{"accepted", true}}, 202);
         });

  // ingest_telemetry
  s.Post("/v1/telemetry/:connid",
         [&rt](const httplib::Request& req, httplib::Response& res) {
           auto body = parse_body(req);
           if (!body.ok()) return send_error(res, body.error());
           auto st = rt.exchange().ingest_telemetry(req.path_params.at("connid"),
                                                    body.value());
           if (!st.ok()) return send_error(res, st.error());
           send_json(res, Json{{"stored", true}}, 201);
         });

  // active grant count, for issuance-time capacity checks
  s.Get("/v1/devices/:did/grants",
        [&rt](const httplib::Request& req, httplib::Response& res) {
          auto did = parse_did(req.path_params.at("did"));
          if (!did.ok()) return send_error(res, did.error());
          send_json(res, Json{{"activeGrants",
                               rt.exchange().active_grant_count(did.value())}});
        });

  // owner policy registration (the exchange applies the filter spec at presentation)
  s.Post("/v1/policies", [&rt](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    if (!body.value().is_object() || !body.value().contains("ownerDid") ||
        !body.value().contains("policy")) {
      return send_error(res,
                        fail(ErrorCode::kMalformedRequest, "need ownerDid, policy"));
    }
    auto owner = parse_did(body.value().at("ownerDid").get<std::string>());
    if (!owner.ok()) return send_error(res, owner.error());
    auto policy = OwnerPolicy::from_json(body.value().at("policy"), rt.filters());
    if (!policy.ok()) return send_error(res, policy.error());
    rt.exchange().set_owner_policy(owner.value(), policy.take());
    send_json(res, Json{{"stored", true}}, 201);
  });

  // custody-side signing: devices hold handles, not keys
  s.Post("/v1/keys/:handle/sign",
         [&rt](const httplib::Request& req, httplib::Response& res) {
           auto body = parse_body(req);
           if (!body.ok()) return send_error(res, body.error());
           if (!body.value().is_object() || !body.value().contains("message")) {
             return send_error(res, fail(ErrorCode::kMalformedRequest,
                                         "need message (hex)"));
           }
           auto message = from_hex(body.value().at("message").get<std::string>());
           if (!message.ok()) return send_error(res, message.error());
           auto sig = rt.keystore().sign_with(req.path_params.at("handle"),
                                              message.value());
           if (!sig.ok()) return send_error(res, sig.error());
           send_json(res, Json{{"signature", to_hex(sig.value())}});
         });

  // identity mapping lookup by connectivity id
  s.Get("/v1/mappings/:connid",
        [&rt](const httplib::Request& req, httplib::Response& res) {
          auto m = rt.keystore().lookup_by_connectivity(req.path_params.at("connid"));
          if (!m.ok()) return send_error(res, m.error());
          Json out = {{"deviceUniqueId", m.value().device_unique_id},
                      {"did", m.value().did.to_string()},
                      {"connectivityId", m.value().connectivity_id},
                      {"keyHandle", m.value().key_handle}};
          if (m.value().cloud_key_slot) out["cloudKeySlot"] = *m.value().cloud_key_slot;
          send_json(res, out);
        });

  // manual-clock control; rejected in real-clock mode
  s.Post("/v1/clock", [&rt](const httplib::Request& req, httplib::Response& res) {
    if (rt.manual_clock() == nullptr) {
      return send_error(res, fail(ErrorCode::kMalformedRequest,
                                  "clock is not in manual mode"));
    }
    auto body = parse_body(req);
    if (!body.ok()) return send_error(res, body.error());
    if (!body.value().is_object() || !body.value().contains("now")) {
      return send_error(res, fail(ErrorCode::kMalformedRequest, "need now"));
    }
    const auto& v = body.value().at("now");
    int64_t now = 0;
    if (v.is_number_integer() || v.is_number_unsigned()) {
      now = v.get<int64_t>();
    } else if (v.is_string()) {
      auto ts = parse_timestamp(v.get<std::string>());
      if (!ts.ok()) return send_error(res, ts.error());
      now = ts.value();
    } else {
      return send_error(res, fail(ErrorCode::kMalformedRequest, "bad now"));
    }
    rt.manual_clock()->set(now);
    rt.exchange().expire_grants(now);
    send_json(res, Json{{"now", now}});
  });
}

Status ExchangeServer::listen(const std::string& host, int port) {
  port_ = port;
  if (!impl_->server.listen(host, port)) {
    return fail(ErrorCode::kIoError,
                "cannot listen on " + host + ":" + std::to_string(port));
  }
  return ok_status();
}

Result<int> ExchangeServer::start(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) {
    return fail(ErrorCode::kIoError, "cannot bind a port on " + host);
  }
  port_ = port;
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void ExchangeServer::stop() {
  if (impl_ && impl_->server.is_running()) {
    impl_->server.stop();
  }
  if (thread_.joinable()) thread_.join();
}

}  // namespace iotx
