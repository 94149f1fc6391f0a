// Copyright 2026 The ragdcache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ragdcache/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ragdcache {

const char* to_string(DeviceKind k) {
  switch (k) {
    case DeviceKind::kInferenceGpu: return "InferenceGpu";
    case DeviceKind::kGeneratorGpu: return "GeneratorGpu";
    case DeviceKind::kCpu: return "Cpu";
  }
  return "?";
}

DeviceKind device_kind_from_string(const std::string& s) {
  if (s == "InferenceGpu") return DeviceKind::kInferenceGpu;
  if (s == "GeneratorGpu") return DeviceKind::kGeneratorGpu;
  if (s == "Cpu") return DeviceKind::kCpu;
  throw std::invalid_argument("unknown device kind '" + s + "'");
}

void DeviceProfile::validate() const {
  if (!(compute_rate > 0.0) || !std::isfinite(compute_rate)) {
    throw std::invalid_argument("device " + device_id + ": compute_rate must be positive");
  }
  if (concurrency == 0) throw std::invalid_argument("device " + device_id + ": concurrency is 0");
}

void CostParams::validate() const {
  model.validate();
  for (double bw : {disk_read_bw, disk_write_bw, mem_bw}) {
    if (!(bw > 0.0)) throw std::invalid_argument("bandwidths must be positive");
  }
  if (!(disk_seek >= 0.0) || !(network_delay >= 0.0) || !(decode_seconds_per_token >= 0.0)) {
    throw std::invalid_argument("delays must be non-negative");
  }
}

double prefill_work(std::uint64_t layers, std::uint64_t hidden_dim, std::uint64_t n_total) {
  const double n = static_cast<double>(n_total);
  return static_cast<double>(layers) * n * n * static_cast<double>(hidden_dim);
}

double cached_prefill_work(std::uint64_t layers, std::uint64_t hidden_dim, std::uint64_t n_query,
                           std::uint64_t n_cached) {
  return static_cast<double>(layers) * static_cast<double>(n_query) *
         static_cast<double>(n_query + n_cached) * static_cast<double>(hidden_dim);
}

double prefill_work(const ModelProfile& m, std::uint64_t n_total) {
  return prefill_work(m.layers, m.hidden_dim, n_total);
}

double cached_prefill_work(const ModelProfile& m, std::uint64_t n_query, std::uint64_t n_cached) {
  return cached_prefill_work(m.layers, m.hidden_dim, n_query, n_cached);
}

double load_time(std::uint64_t bytes, Tier tier, const CostParams& params) {
  const double b = static_cast<double>(bytes);
  if (tier == Tier::kMemory) return b / params.mem_bw;
  return params.disk_seek + b / params.disk_read_bw;
}

double generation_time(const CostParams& params, const DeviceProfile& device,
                       std::uint64_t n_doc_tokens) {
  const double compute = prefill_work(params.model, n_doc_tokens) / device.compute_rate;
  const double write = static_cast<double>(blob_size(params.model, n_doc_tokens)) /
                       params.disk_write_bw;
  return compute + write;
}

std::uint64_t cache_file_bytes(const ModelProfile& m, std::uint64_t n_tokens,
                               std::uint64_t doc_count) {
  return blob_size(m, n_tokens) + 46 + 8 * doc_count;
}

TtftBreakdown ttft(const CostParams& params, const DeviceProfile& device, std::uint64_t n_query,
                   std::uint64_t n_cached_tokens, LookupOutcome outcome, std::uint64_t bytes) {
  TtftBreakdown out;
  if (outcome == LookupOutcome::kMiss) {
    out.prefill = prefill_work(params.model, n_query + n_cached_tokens) / device.compute_rate;
  } else {
    const Tier tier = outcome == LookupOutcome::kMemoryHit ? Tier::kMemory : Tier::kDisk;
    out.kv_load = load_time(bytes, tier, params);
    out.prefill =
        cached_prefill_work(params.model, n_query, n_cached_tokens) / device.compute_rate;
  }
  out.ttft = out.kv_load + out.prefill;
  return out;
}

TtftBreakdown ttft(const CostParams& params, const DeviceProfile& device, std::uint64_t n_query,
                   std::uint64_t n_cached_tokens, const LookupResult& lookup) {
  std::uint64_t bytes = lookup.load_cost_bytes;
  if (lookup.outcome == LookupOutcome::kMemoryHit && lookup.blob) {
    bytes = lookup.blob->encoded_size();
  }
  return ttft(params, device, n_query, n_cached_tokens, lookup.outcome, bytes);
}

}  // namespace ragdcache
