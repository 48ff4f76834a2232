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

// Operator CLI for the exchange. Agents (owner, customer, authorizing
// parties) are personae holding seed-key files; machine output is canonical
// JSON on stdout, diagnostics go to stderr.
//
// Exit codes: 0 success, 1 fault, 2 typed protocol rejection (reason token
// on stderr), 64 malformed arguments, 69 exchange unreachable.

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "iotx/client.hpp"
#include "iotx/hex.hpp"
#include "iotx/server.hpp"
#include "iotx/timeparse.hpp"

namespace {

using namespace iotx;

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitRejected = 2;
constexpr int kExitUsage = 64;
constexpr int kExitUnavailable = 69;

int exit_code_for(const Error& e) {
  switch (e.code) {
    case ErrorCode::kExchangeUnavailable:
      return kExitUnavailable;
    case ErrorCode::kIoError:
    case ErrorCode::kInternal:
    case ErrorCode::kKeystoreError:
      return kExitFault;
    default:
      return kExitRejected;
  }
}

int report(const Error& e) {
  std::cerr << e.token();
  if (!e.message.empty()) std::cerr << ": " << e.message;
  std::cerr << "\n";
  return exit_code_for(e);
}

void print_json(const Json& j) {
  auto text = canonicalize(j);
  std::cout << (text.ok() ? text.value() : j.dump()) << "\n";
}

Result<Json> read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return fail(ErrorCode::kIoError, "cannot open " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    return fail(ErrorCode::kIoError, path + " is not valid JSON");
  }
  return j;
}

std::string default_url() {
  if (const char* v = std::getenv("IOTX_EXCHANGE_URL")) return v;
  return "http://127.0.0.1:8420";
}

Result<int64_t> timestamp_arg(const std::string& raw) {
  if (auto ts = parse_timestamp(raw); ts.ok()) return ts;
  if (!raw.empty() && raw.find_first_not_of("0123456789") == std::string::npos) {
    return static_cast<int64_t>(std::stoll(raw));
  }
  return fail(ErrorCode::kMalformedTimestamp, "bad timestamp: " + raw);
}

ExchangeServer* g_server = nullptr;

int cmd_serve(const std::string& config_path) {
  auto config = ServiceConfig::load(config_path);
  if (!config.ok()) return report(config.error());

  std::string passphrase;
  if (const char* v = std::getenv("IOTX_KEYSTORE_PASSPHRASE")) passphrase = v;
  if (!config.value().keystore_path.empty() && passphrase.empty()) {
    return report(fail(ErrorCode::kKeystoreError,
                       "IOTX_KEYSTORE_PASSPHRASE required for a persistent "
                       "keystore"));
  }

  auto runtime = ExchangeRuntime::create(config.value(), passphrase);
  if (!runtime.ok()) return report(runtime.error());

  ExchangeServer server(*runtime.value());
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server != nullptr) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server != nullptr) g_server->stop();
  });

  // Real-clock mode sweeps expired grants in the background; manual mode
  // sweeps whenever the clock endpoint moves time.
  std::atomic<bool> running{true};
  std::thread sweeper;
  if (runtime.value()->manual_clock() == nullptr) {
    sweeper = std::thread([&running, rt = runtime.value().get()] {
      int ticks = 0;
      while (running.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(500));
        if (++ticks >= 60) {  // every 30 s
          ticks = 0;
          rt->exchange().expire_grants(rt->clock().now());
        }
      }
    });
  }

  std::cerr << "iotx exchange listening on " << config.value().listen_host
            << ":" << config.value().listen_port << "\n";
  auto st = server.listen(config.value().listen_host,
                          config.value().listen_port);
  g_server = nullptr;
  running.store(false);
  if (sweeper.joinable()) sweeper.join();
  if (!st.ok()) return report(st.error());
  return kExitOk;
}

int cmd_key_gen(const std::string& out_path) {
  auto signer = SeedSigner::generate();
  if (auto st = signer.save(out_path); !st.ok()) return report(st.error());
  print_json(Json{{"keyFile", out_path},
                  {"publicKey", to_hex(signer.public_key())}});
  return kExitOk;
}

int cmd_did_create(const std::string& url, const std::string& key_path,
                   const std::string& method,
                   const std::vector<std::string>& service_specs) {
  auto signer = SeedSigner::load(key_path);
  if (!signer.ok()) return report(signer.error());

  std::vector<ServiceEntry> services;
  for (const auto& spec : service_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--service must look like type=endpoint\n";
      return kExitUsage;
    }
    services.push_back(
        ServiceEntry{Did{}, spec.substr(0, eq), spec.substr(eq + 1)});
  }

  RealClock clock;
  auto doc = make_self_signed_document(method, signer.value().public_key(),
                                       std::move(services), signer.value(),
                                       clock.now());
  if (!doc.ok()) return report(doc.error());

  HttpExchangeClient client(url);
  auto stored = client.store_document(doc.value());
  if (!stored.ok()) return report(stored.error());
  print_json(doc.value().to_json());
  return kExitOk;
}

int cmd_did_resolve(const std::string& url, const std::string& did_text) {
  auto did = parse_did(did_text);
  if (!did.ok()) return report(did.error());
  HttpExchangeClient client(url);
  auto doc = client.resolve(did.value());
  if (!doc.ok()) return report(doc.error());
  print_json(doc.value().to_json());
  return kExitOk;
}

int cmd_device_register(const std::string& url, const std::string& owner,
                        const std::string& type, const std::string& conn_id,
                        const std::string& serial) {
  auto owner_did = parse_did(owner);
  if (!owner_did.ok()) return report(owner_did.error());
  HttpExchangeClient client(url);
  auto reg = client.register_device(owner_did.value(), type, conn_id, serial);
  if (!reg.ok()) return report(reg.error());
  print_json(reg.value());
  return kExitOk;
}

int cmd_policy_push(const std::string& url, const std::string& owner,
                    const std::string& policy_path) {
  auto owner_did = parse_did(owner);
  if (!owner_did.ok()) return report(owner_did.error());
  auto policy = read_json_file(policy_path);
  if (!policy.ok()) return report(policy.error());
  HttpExchangeClient client(url);
  auto stored = client.set_policy(owner_did.value(), policy.value());
  if (!stored.ok()) return report(stored.error());
  print_json(stored.value());
  return kExitOk;
}

int cmd_owner_issue(const std::string& url, const std::string& policy_path,
                    const std::string& request_path,
                    const std::string& owner_text,
                    const std::string& key_path,
                    const std::string& parties_path) {
  auto owner_did = parse_did(owner_text);
  if (!owner_did.ok()) return report(owner_did.error());
  auto signer = SeedSigner::load(key_path);
  if (!signer.ok()) return report(signer.error());

  auto policy_json = read_json_file(policy_path);
  if (!policy_json.ok()) return report(policy_json.error());
  FilterRegistry filters;
  auto policy = OwnerPolicy::from_json(policy_json.value(), filters);
  if (!policy.ok()) return report(policy.error());

  auto request_json = read_json_file(request_path);
  if (!request_json.ok()) return report(request_json.error());
  auto draft = AccessRequestDraft::from_json(request_json.value());
  if (!draft.ok()) return report(draft.error());

  // Authorizing-party personae: [{"did", "keyFile", "denyFile"}].
  std::vector<AuthorizingParty> parties;
  if (!parties_path.empty()) {
    auto parties_json = read_json_file(parties_path);
    if (!parties_json.ok()) return report(parties_json.error());
    for (const auto& p : parties_json.value()) {
      auto pdid = parse_did(p.at("did").get<std::string>());
      if (!pdid.ok()) return report(pdid.error());
      auto psigner = SeedSigner::load(p.at("keyFile").get<std::string>());
      if (!psigner.ok()) return report(psigner.error());
      DenyPolicy deny;
      if (p.contains("denyFile")) {
        auto deny_json = read_json_file(p.at("denyFile").get<std::string>());
        if (!deny_json.ok()) return report(deny_json.error());
        auto parsed = DenyPolicy::from_json(deny_json.value());
        if (!parsed.ok()) return report(parsed.error());
        deny = parsed.take();
      }
      parties.emplace_back(pdid.take(), std::move(deny),
                           std::make_shared<SeedSigner>(psigner.take()));
    }
  }

  HttpExchangeClient client(url);
  HttpResolver resolver(client);
  RealClock clock;
  IssueContext ctx{owner_did.take(), signer.value(), client, resolver, {},
                   clock};
  for (const auto& p : parties) ctx.parties.push_back(&p);

  auto vc = owner_issue_flow(draft.value(), policy.value(), ctx);
  if (!vc.ok()) return report(vc.error());
  print_json(vc.value().to_json());
  return kExitOk;
}

int cmd_customer_present(const std::string& url, const std::string& vc_path) {
  auto vc_json = read_json_file(vc_path);
  if (!vc_json.ok()) return report(vc_json.error());
  auto vc = VerifiableCredential::from_json(vc_json.value());
  if (!vc.ok()) return report(vc.error());
  HttpExchangeClient client(url);
  auto grant = client.present_credential(vc.value());
  if (!grant.ok()) return report(grant.error());
  print_json(grant.value());
  return kExitOk;
}

int cmd_customer_fetch(const std::string& url, const std::string& vc_id,
                       const std::string& device_text,
                       const std::string& as_of) {
  auto device = parse_did(device_text);
  if (!device.ok()) return report(device.error());
  HttpExchangeClient client(url);
  std::optional<std::string> as_of_param;
  if (!as_of.empty()) as_of_param = as_of;
  auto records = client.fetch_data(vc_id, device.value(), as_of_param);
  if (!records.ok()) return report(records.error());
  print_json(records.value());
  return kExitOk;
}

int cmd_customer_control(const std::string& url, const std::string& vc_id,
                         const std::string& device_text,
                         const std::string& command_text,
                         const std::string& as_of) {
  auto device = parse_did(device_text);
  if (!device.ok()) return report(device.error());
  Json command = Json::parse(command_text, nullptr, false);
  if (command.is_discarded() || !command.is_object()) {
    std::cerr << "--command must be a JSON object\n";
    return kExitUsage;
  }
  HttpExchangeClient client(url);
  std::optional<std::string> as_of_param;
  if (!as_of.empty()) as_of_param = as_of;
  auto accepted = client.send_control(vc_id, device.value(), command,
                                      as_of_param);
  if (!accepted.ok()) return report(accepted.error());
  print_json(accepted.value());
  return kExitOk;
}

int cmd_sim_run(const std::string& url, const std::string& fleet_path,
                int64_t duration, const std::string& start_text, bool fast) {
  auto fleet_json = read_json_file(fleet_path);
  if (!fleet_json.ok()) return report(fleet_json.error());
  auto fleet = Fleet::from_config(fleet_json.value());
  if (!fleet.ok()) return report(fleet.error());

  HttpExchangeClient client(url);

  // Devices must already be registered; pull handles from the mapping table.
  for (auto& d : fleet.value()->devices()) {
    auto mapping = client.mapping_by_connectivity(d.connectivity_id);
    if (!mapping.ok()) return report(mapping.error());
    d.key_handle = mapping.value().at("keyHandle").get<std::string>();
    auto did = parse_did(mapping.value().at("did").get<std::string>());
    if (!did.ok()) return report(did.error());
    d.did = did.take();
  }

  int64_t start = 0;
  if (start_text.empty()) {
    start = RealClock().now();
  } else {
    auto ts = timestamp_arg(start_text);
    if (!ts.ok()) return report(ts.error());
    start = ts.value();
  }

  SignFn sign = [&client](std::string_view handle,
                          std::span<const uint8_t> message) {
    return client.sign_remote(handle, message);
  };
  IngestFn ingest = [&client](std::string_view conn_id, const Json& body) {
    auto r = client.ingest(conn_id, body);
    if (!r.ok()) return Status(r.error());
    return ok_status();
  };

  FleetReport total;
  if (fast) {
    total = fleet.value()->run(start, duration, sign, ingest);
  } else {
    // Paced mode: one wall-clock tick per second of schedule.
    for (int64_t k = 1; k <= duration; ++k) {
      std::this_thread::sleep_for(std::chrono::seconds(1));
      for (auto& d : fleet.value()->devices()) {
        if (k % d.emit_interval != 0) continue;
        auto body = emit(d, start + k, sign);
        if (!body.ok()) {
          total.errors.emplace_back(d.connectivity_id, body.error());
          continue;
        }
        auto st = ingest(d.connectivity_id, body.value());
        if (!st.ok()) {
          total.errors.emplace_back(d.connectivity_id, st.error());
          continue;
        }
        ++total.records_per_device[d.connectivity_id];
        ++total.total_ingested;
      }
    }
  }

  Json per_device = Json::object();
  for (const auto& [conn, count] : total.records_per_device) {
    per_device[conn] = count;
  }
  Json errors = Json::array();
  for (const auto& [conn, err] : total.errors) {
    errors.push_back(Json{{"connectivityId", conn},
                          {"error", std::string(err.token())}});
  }
  print_json(Json{{"ingested", total.total_ingested},
                  {"perDevice", per_device},
                  {"errors", errors}});
  return total.errors.empty() ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IoT Exchange operator CLI"};
  app.require_subcommand(1);

  std::string url = default_url();
  app.add_option("--url", url, "Exchange base URL (or IOTX_EXCHANGE_URL)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the exchange service");
  std::string config_path;
  serve->add_option("--config", config_path, "Service config file")->required();

  // key gen
  auto* key = app.add_subcommand("key", "Agent key management");
  auto* key_gen = key->add_subcommand("gen", "Generate an agent seed key");
  std::string key_out;
  key_gen->add_option("--out", key_out, "Output key file")->required();

  // did create / resolve
  auto* did = app.add_subcommand("did", "DID operations");
  auto* did_create = did->add_subcommand("create", "Create and enroll a DID");
  std::string did_key, did_method = "iotx";
  std::vector<std::string> did_services;
  did_create->add_option("--key", did_key, "Seed key file")->required();
  did_create->add_option("--method", did_method, "DID method");
  did_create->add_option("--service", did_services,
                         "Connectivity binding, type=endpoint");
  auto* did_resolve = did->add_subcommand("resolve", "Resolve a DID");
  std::string did_text;
  did_resolve->add_option("did", did_text, "DID to resolve")->required();

  // device register
  auto* device = app.add_subcommand("device", "Device lifecycle");
  auto* device_register = device->add_subcommand("register", "Register a device");
  std::string dev_owner, dev_type, dev_conn, dev_serial;
  device_register->add_option("--owner", dev_owner, "Owner DID")->required();
  device_register->add_option("--type", dev_type, "Connectivity type")->required();
  device_register->add_option("--conn-id", dev_conn, "Connectivity id")->required();
  device_register->add_option("--serial", dev_serial, "Device unique id")->required();

  // policy push
  auto* policy = app.add_subcommand("policy", "Owner policy management");
  auto* policy_push = policy->add_subcommand("push", "Upload an owner policy");
  std::string pol_owner, pol_file;
  policy_push->add_option("--owner", pol_owner, "Owner DID")->required();
  policy_push->add_option("--policy", pol_file, "Policy file")->required();

  // owner issue
  auto* owner = app.add_subcommand("owner", "Owner agent");
  auto* owner_issue = owner->add_subcommand("issue", "Run the issuance flow");
  std::string issue_policy, issue_request, issue_owner, issue_key, issue_parties;
  owner_issue->add_option("--policy", issue_policy, "Owner policy file")->required();
  owner_issue->add_option("--request", issue_request, "Access request draft file")
      ->required();
  owner_issue->add_option("--owner-did", issue_owner, "Owner DID")->required();
  owner_issue->add_option("--key", issue_key, "Owner seed key file")->required();
  owner_issue->add_option("--parties", issue_parties,
                          "Authorizing parties file: [{did, keyFile, denyFile}]");

  // customer present / fetch / control
  auto* customer = app.add_subcommand("customer", "Customer agent");
  auto* present = customer->add_subcommand("present", "Present a credential");
  std::string present_vc;
  present->add_option("--vc", present_vc, "Credential file")->required();
  auto* fetch = customer->add_subcommand("fetch", "Fetch device data");
  std::string fetch_vc_id, fetch_device, fetch_as_of;
  fetch->add_option("--vc-id", fetch_vc_id, "Grant vcId")->required();
  fetch->add_option("--device", fetch_device, "Device DID")->required();
  fetch->add_option("--as-of", fetch_as_of, "Access time (default: now)");
  auto* control = customer->add_subcommand("control", "Send a control command");
  std::string ctl_vc_id, ctl_device, ctl_command, ctl_as_of;
  control->add_option("--vc-id", ctl_vc_id, "Grant vcId")->required();
  control->add_option("--device", ctl_device, "Device DID")->required();
  control->add_option("--command", ctl_command, "Command JSON object")->required();
  control->add_option("--as-of", ctl_as_of, "Access time (default: now)");

  // sim run
  auto* sim = app.add_subcommand("sim", "Device simulator");
  auto* sim_run = sim->add_subcommand("run", "Drive a fleet against the exchange");
  std::string fleet_file, sim_start;
  int64_t sim_duration = 0;
  bool sim_fast = false;
  sim_run->add_option("--fleet", fleet_file, "Fleet config file")->required();
  sim_run->add_option("--duration", sim_duration, "Schedule length, seconds")
      ->required();
  sim_run->add_option("--start", sim_start,
                      "Schedule origin timestamp (default: now)");
  sim_run->add_flag("--fast", sim_fast, "Emit without wall-clock pacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (serve->parsed()) return cmd_serve(config_path);
  if (key_gen->parsed()) return cmd_key_gen(key_out);
  if (did_create->parsed())
    return cmd_did_create(url, did_key, did_method, did_services);
  if (did_resolve->parsed()) return cmd_did_resolve(url, did_text);
  if (device_register->parsed())
    return cmd_device_register(url, dev_owner, dev_type, dev_conn, dev_serial);
  if (policy_push->parsed()) return cmd_policy_push(url, pol_owner, pol_file);
  if (owner_issue->parsed())
    return cmd_owner_issue(url, issue_policy, issue_request, issue_owner,
                           issue_key, issue_parties);
  if (present->parsed()) return cmd_customer_present(url, present_vc);
  if (fetch->parsed())
    return cmd_customer_fetch(url, fetch_vc_id, fetch_device, fetch_as_of);
  if (control->parsed())
    return cmd_customer_control(url, ctl_vc_id, ctl_device, ctl_command,
                                ctl_as_of);
  if (sim_run->parsed())
    return cmd_sim_run(url, fleet_file, sim_duration, sim_start, sim_fast);

  std::cerr << "no subcommand\n";
  return kExitUsage;
}
