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

#pragma once

// Analytic timing model standing in for GPU execution. Work is counted in
// abstract units (L * tokens^2 * D); a device turns work into seconds via its
// compute rate. All times are seconds.

#include <cstdint>
#include <string>

#include "ragdcache/kv_codec.hpp"
#include "ragdcache/kv_store.hpp"

namespace ragdcache {

enum class DeviceKind { kInferenceGpu, kGeneratorGpu, kCpu };

const char* to_string(DeviceKind k);
DeviceKind device_kind_from_string(const std::string& s);

struct DeviceProfile {
  std::string device_id;
  DeviceKind kind = DeviceKind::kInferenceGpu;
  double compute_rate = 1.0;  // work units per second
  std::uint32_t concurrency = 1;

  void validate() const;
  bool operator==(const DeviceProfile&) const = default;
};

struct CostParams {
  ModelProfile model;
  double disk_read_bw = 3.4e9;
  double disk_write_bw = 2.4e9;
  double disk_seek = 0.0;
  double mem_bw = 12e9;
  double network_delay = 0.0;
  bool decode_enabled = false;
  double decode_seconds_per_token = 0.0;
  std::uint32_t answer_tokens = 0;

  void validate() const;
  bool operator==(const CostParams&) const = default;
};

enum class Tier { kDisk, kMemory };

/// L * n^2 * D.
double prefill_work(std::uint64_t layers, std::uint64_t hidden_dim, std::uint64_t n_total);

/// L * n_q * (n_q + n_c) * D: new tokens attend over the whole context,
/// cached tokens cost nothing.
double cached_prefill_work(std::uint64_t layers, std::uint64_t hidden_dim, std::uint64_t n_query,
                           std::uint64_t n_cached);

double prefill_work(const ModelProfile& m, std::uint64_t n_total);
double cached_prefill_work(const ModelProfile& m, std::uint64_t n_query, std::uint64_t n_cached);

/// Disk: seek + bytes / disk_read_bw. Memory: bytes / mem_bw.
double load_time(std::uint64_t bytes, Tier tier, const CostParams& params);

/// Compute plus write-back time to produce one cache of `n_doc_tokens` tokens.
double generation_time(const CostParams& params, const DeviceProfile& device,
                       std::uint64_t n_doc_tokens);

/// Bytes read to load a cache: encoded blob size for `doc_count` documents.
std::uint64_t cache_file_bytes(const ModelProfile& m, std::uint64_t n_tokens,
                               std::uint64_t doc_count);

struct TtftBreakdown {
  double ttft = 0.0;
  double kv_load = 0.0;
  double prefill = 0.0;
};

/// Miss: all n_query + n_cached tokens are prefilled from raw text and
/// kv_load is 0. Hit: load from the lookup's tier, then cached prefill.
/// `bytes` is what the load reads.
TtftBreakdown ttft(const CostParams& params, const DeviceProfile& device, std::uint64_t n_query,
                   std::uint64_t n_cached_tokens, LookupOutcome outcome, std::uint64_t bytes);

/// Same, taking bytes from the lookup: load_cost_bytes for disk hits, the
/// blob's encoded size for memory hits.
TtftBreakdown ttft(const CostParams& params, const DeviceProfile& device, std::uint64_t n_query,
                   std::uint64_t n_cached_tokens, const LookupResult& lookup);

}  // namespace ragdcache
