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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ragdcache/kv_codec.hpp"
#include "ragdcache/lru.hpp"

namespace ragdcache {

/// Identifies one cache entry: a model and the ordered combination of
/// retrieved documents whose KV state the entry holds.
struct KvKey {
  std::uint64_t model_hash = 0;
  DocIds doc_ids;

  bool operator==(const KvKey&) const = default;
  auto operator<=>(const KvKey&) const = default;

  /// FNV-1a over the little-endian doc ids; names the blob file.
  std::uint64_t doc_hash() const;
  std::string to_string() const;
};

struct KvKeyHash {
  std::size_t operator()(const KvKey& k) const noexcept;
};

inline KvKey key_of(const KvBlobHeader& h) { return KvKey{h.model_hash, h.doc_ids}; }

enum class LookupOutcome { kMemoryHit, kDiskHit, kMiss };
enum class Residency { kInMemory, kOnDisk, kAbsent };

const char* to_string(LookupOutcome o);
const char* to_string(Residency r);

using BlobPtr = std::shared_ptr<const KvBlob>;

struct LookupResult {
  LookupOutcome outcome = LookupOutcome::kMiss;
  BlobPtr blob;  // set iff outcome is a hit
  std::uint64_t load_cost_bytes = 0;  // file bytes read; 0 unless kDiskHit
};

struct StoreStats {
  std::uint64_t memory_hits = 0;
  std::uint64_t disk_hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t corrupt = 0;
  std::uint64_t memory_bytes_used = 0;
  std::uint64_t memory_capacity_bytes = 0;
  std::uint64_t disk_bytes_used = 0;
  std::uint64_t memory_entries = 0;
  std::uint64_t disk_entries = 0;

  bool operator==(const StoreStats&) const = default;
};

void to_json(nlohmann::json& j, const StoreStats& s);
void from_json(const nlohmann::json& j, StoreStats& s);

enum class StoreErrorKind { kKeyMismatch, kImmutable, kInvalidBlob, kIo, kCorrupt, kCollision };

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  StoreErrorKind kind() const { return kind_; }

 private:
  StoreErrorKind kind_;
};

enum class PutOutcome { kWritten, kAlreadyPresent };

/// Two-tier KV cache storage: every entry is durable on disk, and a
/// byte-budgeted LRU keeps recently used blobs in memory.
///
/// Disk layout: <root>/<model_hash hex>/<doc hash hex>.rdkv, written via
/// temp file + rename, plus <root>/manifest.jsonl with one line per entry.
/// Entries are immutable once written.
///
/// Thread-safe. One mutex guards the LRU, the disk index and the counters;
/// disk reads run outside it, puts are serialized by a second mutex.
class KvStore {
 public:
  explicit KvStore(std::filesystem::path root, std::uint64_t memory_capacity_bytes = 0);

  KvStore(const KvStore&) = delete;
  KvStore& operator=(const KvStore&) = delete;

  /// Persists `blob` under `key` and admits it to the memory tier. Re-putting
  /// identical content is a no-op that returns kAlreadyPresent.
  PutOutcome put(const KvKey& key, const KvBlob& blob);
  PutOutcome put(const KvKey& key, BlobPtr blob);

  /// Memory hits never touch the disk. Disk hits decode the file and promote
  /// it to most recently used. A corrupt file is quarantined, counted as
  /// corrupt and as a miss, and reported as StoreError{kCorrupt}.
  LookupResult get(const KvKey& key);

  Residency contains(const KvKey& key) const;
  StoreStats stats() const;
  void set_memory_capacity(std::uint64_t bytes);

  /// Keys resident in memory, most recently used first.
  std::vector<KvKey> memory_keys() const;
  std::vector<KvKey> disk_keys() const;

  std::filesystem::path path_for(const KvKey& key) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  struct DiskEntry {
    std::filesystem::path path;
    std::uint64_t bytes = 0;
    std::uint64_t checksum = 0;
  };

  void load_manifest();
  void admit_locked(const KvKey& key, BlobPtr blob);
  void quarantine_locked(const KvKey& key);

  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::mutex write_mu_;
  ByteLru<KvKey, BlobPtr, KvKeyHash> memory_;
  std::unordered_map<KvKey, DiskEntry, KvKeyHash> disk_;
  std::map<std::filesystem::path, KvKey> path_owner_;
  StoreStats stats_;
};

}  // namespace ragdcache
