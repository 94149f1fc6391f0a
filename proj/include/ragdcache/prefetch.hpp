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

// KV cache generator: watches the central queue, flags queries that have
// waited past a threshold, resolves their documents early and generates the
// missing caches on a dedicated device.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ragdcache/cache_service.hpp"
#include "ragdcache/cost_model.hpp"
#include "ragdcache/vector_index.hpp"

namespace ragdcache {

enum class Configuration { kBaseline, kA, kB, kSingleInstance };

const char* to_string(Configuration c);
Configuration configuration_from_string(const std::string& s);

/// How a query's documents map to cache entries. kCombination keys one
/// entry by the ordered top-k list; kPerDocument keys one entry per doc.
enum class KeyGranularity { kCombination, kPerDocument };

const char* to_string(KeyGranularity g);
KeyGranularity key_granularity_from_string(const std::string& s);

enum class PrefetchState { kNone, kSearching, kGenerating, kReady };

const char* to_string(PrefetchState s);

struct PendingQuery {
  std::uint64_t query_id = 0;
  double arrival_time = 0.0;
  DocIds doc_ids;  // empty until resolved
  std::vector<float> embedding;
  std::uint32_t k = 1;
  std::uint32_t q_token_count = 16;
  std::vector<std::uint32_t> doc_tokens;  // parallel to doc_ids
  bool flagged = false;
  double flag_time = 0.0;
  PrefetchState prefetch_state = PrefetchState::kNone;
};

/// One cache entry a query needs, with the token count it covers.
struct RequiredKey {
  KvKey key;
  std::uint32_t tokens = 0;
};

std::vector<RequiredKey> required_keys(std::uint64_t model_hash, const DocIds& doc_ids,
                                       const std::vector<std::uint32_t>& doc_tokens,
                                       KeyGranularity granularity);

struct PrefetchTask {
  KvKey key;
  DeviceProfile assigned_device;
  double est_work = 0.0;
  std::uint32_t tokens = 0;
  std::uint64_t query_id = 0;
};

/// Flags every unflagged query with arrival_time + threshold <= now, in
/// queue order, and returns their ids. Flags are never cleared.
std::vector<std::uint64_t> scan(std::vector<PendingQuery>& queue, double now, double threshold);

/// Device that runs generation for a configuration: the generator GPU for
/// A, the CPU for B, none for Baseline and SingleInstance or when the
/// configuration lists no such device.
std::optional<DeviceProfile> assign_device(Configuration config,
                                           const std::vector<DeviceProfile>& devices);

/// Tasks for the query's keys that `present` reports absent, in key order.
std::vector<PrefetchTask> plan_tasks(const PendingQuery& query, const ModelProfile& model,
                                     const DeviceProfile& device, KeyGranularity granularity,
                                     const std::function<bool(const KvKey&)>& present);

struct PrepareOptions {
  ModelProfile model;
  KeyGranularity granularity = KeyGranularity::kCombination;
  std::uint64_t payload_seed = 0;
};

/// Produces the blob for one key. Defaults to synth_blob.
using KeyGenerator = std::function<KvBlob(const RequiredKey&)>;

struct PrepareResult {
  PendingQuery query;
  std::size_t generated = 0;
  std::size_t reused = 0;
  std::size_t waited = 0;
  std::string error;  // set when generation failed and the state fell back
};

/// Resolves top-k docs (through `index` when the query carries an
/// embedding) and makes every required cache durable through `service`.
/// Generation goes through the single-flight layer, so concurrent prepares
/// of overlapping queries produce each cache once. A generation failure
/// leaves the query in state kNone; it is still served on the miss path.
/// Throws std::invalid_argument if the query is not flagged or the device
/// is an inference GPU.
PrepareResult prepare(PendingQuery query, const FlatIndex* index, SharedCacheService& service,
                      const DeviceProfile& device, const PrepareOptions& opts,
                      const KeyGenerator& generate = {});

}  // namespace ragdcache
