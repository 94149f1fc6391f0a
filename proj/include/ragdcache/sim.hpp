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

// Discrete-event model of the serving system: a central FIFO queue feeding
// inference instances, an optional KV cache generator, and a shared disk
// cache. Time is simulated; identical inputs give bit-identical output.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ragdcache/cost_model.hpp"
#include "ragdcache/prefetch.hpp"
#include "ragdcache/workload.hpp"

namespace ragdcache {

class KvStore;

enum class ArrivalProcess { kPoisson, kUniform };

const char* to_string(ArrivalProcess p);
ArrivalProcess arrival_process_from_string(const std::string& s);

struct ArrivalSpec {
  double rate = 40.0;
  ArrivalProcess process = ArrivalProcess::kPoisson;
};

struct SimConfig {
  Configuration configuration = Configuration::kBaseline;
  std::vector<DeviceProfile> devices;
  CostParams cost;
  double threshold = 1.0;
  ArrivalSpec arrival;
  std::uint32_t k = 1;
  std::uint32_t tries = 1;
  std::uint64_t seed = 1;
  std::uint64_t memory_capacity_bytes = 0;
  KeyGranularity granularity = KeyGranularity::kCombination;

  // Single-instance runs only.
  std::uint32_t batch_size = 1;
  bool cache_enabled = true;

  /// Throws std::invalid_argument on a topology or parameter violation.
  void validate() const;
  std::vector<DeviceProfile> inference_devices() const;
  std::optional<DeviceProfile> generator() const;
  bool prefetch_enabled() const { return generator().has_value(); }
};

struct TopologyRates {
  double gpu_rate = 1.0;
  double generator_gpu_rate = 1.0;
  double cpu_rate = 1.0;
};

/// Baseline: 2 inference GPUs. A: 1 inference GPU + 1 generator GPU.
/// B: 2 inference GPUs + 1 CPU. SingleInstance: 1 inference GPU.
std::vector<DeviceProfile> make_devices(Configuration config, const TopologyRates& rates);

enum class CacheOrigin { kMemoryHit, kDiskHit, kGenerated, kMissRaw };

const char* to_string(CacheOrigin o);

struct QueryRecord {
  std::uint64_t query_id = 0;
  std::uint32_t try_index = 0;
  std::uint32_t instance = 0;
  double arrival = 0.0;
  double dispatch = 0.0;
  double first_token = 0.0;
  double queue_wait = 0.0;
  double kv_load = 0.0;
  double prefill = 0.0;
  double network = 0.0;
  std::vector<CacheOrigin> origins;  // one per required cache entry

  double latency() const { return first_token - arrival; }
  double ttft() const { return kv_load + prefill; }
};

struct TryMetrics {
  std::uint32_t try_index = 0;
  std::uint64_t completed = 0;
  double makespan = 0.0;
  double throughput = 0.0;
  double mean_latency = 0.0;
  double median_latency = 0.0;
  double p95_latency = 0.0;
  double ttft_mean = 0.0;
  double mean_queue_wait = 0.0;
  double mean_kv_load = 0.0;
  double mean_prefill = 0.0;
  std::uint64_t lookups = 0;
  std::uint64_t memory_hits = 0;
  std::uint64_t disk_hits = 0;  // includes caches generated for the query
  std::uint64_t generation_tasks = 0;
  double memory_hit_ratio = 0.0;
  double disk_hit_ratio = 0.0;
};

struct MetricsReport {
  TryMetrics overall;  // try_index unused; makespan summed over tries
  std::vector<TryMetrics> tries;
};

struct SimResult {
  MetricsReport metrics;
  std::vector<QueryRecord> records;
};

/// Multi-instance run. Every try replays the same arrival schedule with the
/// items in a per-try shuffled order; the disk cache carries over between
/// tries. Items must have resolved doc ids.
SimResult run(const SimConfig& config, const std::vector<WorkItem>& items);

/// Fills doc_ids/doc_tokens of embedding items from `index`.
std::vector<WorkItem> resolve_items(const FlatIndex& index, std::vector<WorkItem> items,
                                    std::uint32_t k);

struct SingleInstanceCell {
  std::string model_id;
  std::uint32_t batch_size = 1;
  bool cache_enabled = false;
  std::uint64_t queries = 0;
  double total_time = 0.0;
  double throughput = 0.0;
  double ttft_mean = 0.0;
  double kv_load_mean = 0.0;
  double prefill_mean = 0.0;
  double decode_per_batch = 0.0;
  std::uint64_t memory_hits = 0;
  std::uint64_t disk_hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t hit_path_queries = 0;
  std::uint64_t hit_path_faster = 0;  // load + cached prefill < full prefill
};

struct SingleInstanceResult {
  SingleInstanceCell cell;
  std::vector<QueryRecord> records;
};

/// Closed-loop batched run on one inference GPU. All queries are ready at
/// time 0 and are served in batches of config.batch_size; a batch's prefill
/// is the sum of its members' work. With the cache enabled every document
/// cache is assumed precomputed on disk, and a memory LRU of
/// config.memory_capacity_bytes sits in front of it.
///
/// With `real_store` set, caches are really written to and read from that
/// store and kv_load is the measured wall-clock read time. Not
/// deterministic.
SingleInstanceResult run_single_instance(const SimConfig& config,
                                         const std::vector<WorkItem>& items,
                                         KvStore* real_store = nullptr);

struct SweepRow {
  double rate = 0.0;
  double throughput = 0.0;
  double mean_latency = 0.0;
  double mean_queue_wait = 0.0;
  double mean_processing = 0.0;
  double mean_network = 0.0;
  double queue_share = 0.0;
  double processing_share = 0.0;
  double network_share = 0.0;
};

/// One run per rate (ascending), each on a fresh cache.
std::vector<SweepRow> sweep_rate(const SimConfig& config, const std::vector<WorkItem>& items,
                                 const std::vector<double>& rates);

/// Completed queries per second of busy time summed over instances: the
/// rate at which the instances drain a non-empty queue.
double service_capacity(const SimResult& result, std::size_t instances);

}  // namespace ragdcache
