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

#include "ragdcache/cache_service.hpp"

#include <optional>

namespace ragdcache {

const char* to_string(FetchOrigin o) {
  switch (o) {
    case FetchOrigin::kMemoryHit: return "MemoryHit";
    case FetchOrigin::kDiskHit: return "DiskHit";
    case FetchOrigin::kGenerated: return "Generated";
    case FetchOrigin::kWaitedOnInFlight: return "WaitedOnInFlight";
  }
  return "?";
}

namespace {

std::optional<FetchResult> from_lookup(const LookupResult& r) {
  switch (r.outcome) {
    case LookupOutcome::kMemoryHit: return FetchResult{r.blob, FetchOrigin::kMemoryHit};
    case LookupOutcome::kDiskHit: return FetchResult{r.blob, FetchOrigin::kDiskHit};
    case LookupOutcome::kMiss: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

FetchResult SharedCacheService::get_or_generate(const KvKey& key, const Generator& generate) {
  if (store_.contains(key) != Residency::kAbsent) {
    if (auto hit = from_lookup(store_.get(key))) return *hit;
  }

  std::promise<BlobPtr> promise;
  {
    std::unique_lock lock(mu_);
    if (auto it = in_flight_.find(key); it != in_flight_.end()) {
      std::shared_future<BlobPtr> pending = it->second;
      lock.unlock();
      return FetchResult{pending.get(), FetchOrigin::kWaitedOnInFlight};
    }
    in_flight_.emplace(key, promise.get_future().share());
  }

  auto finish = [&] {
    std::lock_guard lock(mu_);
    in_flight_.erase(key);
  };

  try {
    // A previous leader may have stored the key between our first check and
    // registering; its put happens before its registry entry is removed.
    if (store_.contains(key) != Residency::kAbsent) {
      if (auto hit = from_lookup(store_.get(key))) {
        promise.set_value(hit->blob);
        finish();
        return *hit;
      }
    }
    auto blob = std::make_shared<const KvBlob>(generate());
    store_.put(key, blob);
    promise.set_value(blob);
    finish();
    return FetchResult{std::move(blob), FetchOrigin::kGenerated};
  } catch (...) {
    promise.set_exception(std::current_exception());
    finish();
    throw;
  }
}

bool SharedCacheService::in_flight(const KvKey& key) const {
  std::lock_guard lock(mu_);
  return in_flight_.contains(key);
}

std::size_t SharedCacheService::in_flight_count() const {
  std::lock_guard lock(mu_);
  return in_flight_.size();
}

}  // namespace ragdcache
