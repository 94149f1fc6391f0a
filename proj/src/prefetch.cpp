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

#include "ragdcache/prefetch.hpp"

#include <stdexcept>

namespace ragdcache {

const char* to_string(Configuration c) {
  switch (c) {
    case Configuration::kBaseline: return "Baseline";
    case Configuration::kA: return "A";
    case Configuration::kB: return "B";
    case Configuration::kSingleInstance: return "SingleInstance";
  }
  return "?";
}

Configuration configuration_from_string(const std::string& s) {
  if (s == "Baseline" || s == "baseline") return Configuration::kBaseline;
  if (s == "A" || s == "sharedA") return Configuration::kA;
  if (s == "B" || s == "sharedB") return Configuration::kB;
  if (s == "SingleInstance" || s == "single") return Configuration::kSingleInstance;
  throw std::invalid_argument("unknown configuration '" + s + "'");
}

const char* to_string(KeyGranularity g) {
  return g == KeyGranularity::kCombination ? "combination" : "per-document";
}

KeyGranularity key_granularity_from_string(const std::string& s) {
  if (s == "combination") return KeyGranularity::kCombination;
  if (s == "per-document") return KeyGranularity::kPerDocument;
  throw std::invalid_argument("unknown key granularity '" + s + "'");
}

const char* to_string(PrefetchState s) {
  switch (s) {
    case PrefetchState::kNone: return "None";
    case PrefetchState::kSearching: return "Searching";
    case PrefetchState::kGenerating: return "Generating";
    case PrefetchState::kReady: return "Ready";
  }
  return "?";
}

std::vector<RequiredKey> required_keys(std::uint64_t model_hash, const DocIds& doc_ids,
                                       const std::vector<std::uint32_t>& doc_tokens,
                                       KeyGranularity granularity) {
  if (doc_ids.size() != doc_tokens.size()) {
    throw std::invalid_argument("doc_ids and doc_tokens differ in length");
  }
  std::vector<RequiredKey> out;
  if (doc_ids.empty()) return out;
  if (granularity == KeyGranularity::kCombination) {
    std::uint32_t total = 0;
    for (auto t : doc_tokens) total += t;
    out.push_back({KvKey{model_hash, doc_ids}, total});
  } else {
    for (std::size_t i = 0; i < doc_ids.size(); ++i) {
      out.push_back({KvKey{model_hash, {doc_ids[i]}}, doc_tokens[i]});
    }
  }
  return out;
}

std::vector<std::uint64_t> scan(std::vector<PendingQuery>& queue, double now, double threshold) {
  std::vector<std::uint64_t> flagged;
  for (auto& q : queue) {
    if (q.flagged || q.arrival_time + threshold > now) continue;
    q.flagged = true;
    q.flag_time = now;
    flagged.push_back(q.query_id);
  }
  return flagged;
}

std::optional<DeviceProfile> assign_device(Configuration config,
                                           const std::vector<DeviceProfile>& devices) {
  DeviceKind want;
  switch (config) {
    case Configuration::kA: want = DeviceKind::kGeneratorGpu; break;
    case Configuration::kB: want = DeviceKind::kCpu; break;
    default: return std::nullopt;
  }
  for (const auto& d : devices) {
    if (d.kind == want) return d;
  }
  return std::nullopt;
}

std::vector<PrefetchTask> plan_tasks(const PendingQuery& query, const ModelProfile& model,
                                     const DeviceProfile& device, KeyGranularity granularity,
                                     const std::function<bool(const KvKey&)>& present) {
  std::vector<PrefetchTask> tasks;
  for (auto& rk : required_keys(model.hash(), query.doc_ids, query.doc_tokens, granularity)) {
    if (present(rk.key)) continue;
    tasks.push_back(PrefetchTask{std::move(rk.key), device, prefill_work(model, rk.tokens),
                                 rk.tokens, query.query_id});
  }
  return tasks;
}

PrepareResult prepare(PendingQuery query, const FlatIndex* index, SharedCacheService& service,
                      const DeviceProfile& device, const PrepareOptions& opts,
                      const KeyGenerator& generate) {
  if (!query.flagged) throw std::invalid_argument("prepare: query is not flagged");
  if (device.kind == DeviceKind::kInferenceGpu) {
    throw std::invalid_argument("prepare: generation may not run on an inference GPU");
  }

  PrepareResult result;
  if (query.doc_ids.empty()) {
    query.prefetch_state = PrefetchState::kSearching;
    if (index == nullptr || query.embedding.empty()) {
      throw std::invalid_argument("prepare: query has neither doc ids nor an index to search");
    }
    for (const auto& hit : index->search(query.embedding, query.k)) {
      query.doc_ids.push_back(hit.doc_id);
      query.doc_tokens.push_back(index->token_count(hit.doc_id));
    }
  }

  query.prefetch_state = PrefetchState::kGenerating;
  try {
    for (const auto& rk : required_keys(opts.model.hash(), query.doc_ids, query.doc_tokens,
                                        opts.granularity)) {
      auto produce = [&]() -> KvBlob {
        if (generate) return generate(rk);
        return synth_blob(opts.model, rk.key.doc_ids, rk.tokens, opts.payload_seed);
      };
      switch (service.get_or_generate(rk.key, produce).origin) {
        case FetchOrigin::kGenerated: ++result.generated; break;
        case FetchOrigin::kWaitedOnInFlight: ++result.waited; break;
        default: ++result.reused; break;
      }
    }
    query.prefetch_state = PrefetchState::kReady;
  } catch (const std::exception& e) {
    query.prefetch_state = PrefetchState::kNone;
    result.error = e.what();
  }
  result.query = std::move(query);
  return result;
}

}  // namespace ragdcache
