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

#include <functional>
#include <future>
#include <mutex>
#include <unordered_map>

#include "ragdcache/kv_store.hpp"

namespace ragdcache {

enum class FetchOrigin { kMemoryHit, kDiskHit, kGenerated, kWaitedOnInFlight };

const char* to_string(FetchOrigin o);

struct FetchResult {
  BlobPtr blob;
  FetchOrigin origin = FetchOrigin::kGenerated;
};

/// Shared KV cache manager: a single-flight layer over KvStore. Concurrent
/// requests for the same absent key run the generator once; everyone else
/// blocks on the in-flight entry and receives the same blob. The generated
/// blob is stored before any waiter is released.
///
/// If the generator throws, every waiter sees the exception and the key is
/// released so a later call can try again.
class SharedCacheService {
 public:
  using Generator = std::function<KvBlob()>;

  explicit SharedCacheService(KvStore& store) : store_(store) {}

  FetchResult get_or_generate(const KvKey& key, const Generator& generate);

  bool in_flight(const KvKey& key) const;
  std::size_t in_flight_count() const;

  KvStore& store() { return store_; }

 private:
  KvStore& store_;
  mutable std::mutex mu_;
  std::unordered_map<KvKey, std::shared_future<BlobPtr>, KvKeyHash> in_flight_;
};

}  // namespace ragdcache
