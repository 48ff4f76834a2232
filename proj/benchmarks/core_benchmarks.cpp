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

#include <benchmark/benchmark.h>

#include "harness.hpp"
#include "iotx/hex.hpp"
#include "iotx/timeparse.hpp"

namespace {

using namespace iotx;
using iotx::testing::Agent;
using iotx::testing::make_agent;
using iotx::testing::make_runtime;

constexpr int64_t kT0 = 1'700'000'000;

struct BenchState {
  std::unique_ptr<ExchangeRuntime> rt = make_runtime(kT0);
  Agent owner = make_agent(*rt);
  Agent customer = make_agent(*rt);
  Did device;
  std::string eui = "a81758fffe03ab42";
  std::string key_handle;
  VerifiableCredential vc;

  BenchState() {
    auto reg =
        rt->exchange().register_device(owner.did, "LoRaDeviceEUI", eui, "SN-B");
    device = reg.value().did;
    key_handle = rt->keystore().lookup_by_connectivity(eui).value().key_handle;

    LocalExchangeClient client(rt->exchange());
    AccessRequestDraft draft;
    draft.customer_did = customer.did;
    draft.device_ids = {device};
    draft.start = kT0;
    draft.end = kT0 + 30 * 86400;
    draft.period = 1;  // no throttling in the hot-path benchmark
    draft.permissions = {"data"};
    OwnerPolicy policy;
    policy.filter_spec = {FilterSpecEntry{
        {device}, {"redact_location", "redact_device_id"}}};
    rt->exchange().set_owner_policy(owner.did, policy);
    IssueContext ctx{owner.did, *owner.signer, client, rt->resolver(), {},
                     rt->clock()};
    vc = owner_issue_flow(draft, policy, ctx).take();
  }
};

BenchState& state() {
  static BenchState s;
  return s;
}

Json sample_vc_json() { return state().vc.to_json(); }

void BM_CanonicalizeCredential(benchmark::State& st) {
  const Json doc = sample_vc_json();
  for (auto _ : st) {
    auto text = canonicalize(doc);
    benchmark::DoNotOptimize(text);
  }
}
BENCHMARK(BM_CanonicalizeCredential);

void BM_SignCredential(benchmark::State& st) {
  auto& bs = state();
  UnsignedCredential fields;
  fields.vc_id = bs.vc.vc_id;
  fields.issuer = bs.vc.issuer;
  fields.issuance_date = bs.vc.issuance_date;
  fields.credential_subject = bs.vc.credential_subject;
  for (auto _ : st) {
    auto vc = sign_credential(fields, *bs.owner.signer, bs.rt->resolver());
    benchmark::DoNotOptimize(vc);
  }
}
BENCHMARK(BM_SignCredential);

void BM_VerifyCredential(benchmark::State& st) {
  auto& bs = state();
  for (auto _ : st) {
    auto result = verify_credential(bs.vc, bs.rt->resolver());
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_VerifyCredential);

void BM_KeystoreSign(benchmark::State& st) {
  auto& bs = state();
  std::vector<uint8_t> message(st.range(0), 0xab);
  for (auto _ : st) {
    auto sig = bs.rt->keystore().sign_with(bs.key_handle, message);
    benchmark::DoNotOptimize(sig);
  }
  st.SetBytesProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_KeystoreSign)->Arg(64)->Arg(1024);

void BM_ApplyFilterChain(benchmark::State& st) {
  FilterRegistry registry;
  const std::vector<std::string> chain = {"redact_location",
                                          "redact_device_id"};
  TelemetryRecord record{Did{"iotx", "bench"}, kT0,
                         Json{{"temp", "24.7"},
                              {"lat", "1.3521"},
                              {"lon", "103.8198"},
                              {"loraId", "a81758fffe03ab42"}}};
  for (auto _ : st) {
    auto out = apply_chain(registry, chain, record);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ApplyFilterChain);

void BM_IngestTelemetry(benchmark::State& st) {
  auto& bs = state();
  int64_t ts = kT0 + 1'000'000;  // clear of records other benchmarks wrote
  for (auto _ : st) {
    st.PauseTiming();
    const std::string ts_text = format_timestamp(ts++);
    const Json fields{{"temp", "24.7"},
                      {"lat", "1.3521"},
                      {"lon", "103.8198"},
                      {"loraId", bs.eui}};
    auto message =
        Exchange::telemetry_signing_bytes(bs.eui, ts_text, fields);
    auto sig = bs.rt->keystore().sign_with(bs.key_handle, message.value());
    const Json body{{"timestamp", ts_text},
                    {"fields", fields},
                    {"signature", to_hex(sig.value())}};
    st.ResumeTiming();
    auto result = bs.rt->exchange().ingest_telemetry(bs.eui, body);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_IngestTelemetry);

void BM_PresentAndAccess(benchmark::State& st) {
  // Fresh grant per iteration batch is too slow; measure the access gate on
  // one standing grant instead.
  auto& bs = state();
  static bool presented = [] {
    return state().rt->exchange().present_credential(state().vc).ok();
  }();
  (void)presented;
  int64_t as_of = kT0 + 10;
  for (auto _ : st) {
    auto records = bs.rt->exchange().access_data(bs.customer.did,
                                                 bs.vc.vc_id, bs.device,
                                                 as_of);
    as_of += 1;
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(BM_PresentAndAccess);

}  // namespace
